#pragma once

#include <span>
#include <string>

#include "rfrules/rules.hpp"

namespace rfrules {

/// Weighted confusion counts of one rule with respect to its head class
/// (one-vs-rest): components sum to the total instance weight.
struct ConfusionCounts {
    double tp = 0.0;
    double fp = 0.0;
    double tn = 0.0;
    double fn = 0.0;
};

enum class HeuristicKind { Precision, Recall, MEstimate };

/// Default smoothing strength for the m-estimate, the tuned value reported
/// by Janssen & Fuernkranz (2010).
inline constexpr double kDefaultM = 22.466;

struct Heuristic {
    HeuristicKind kind = HeuristicKind::MEstimate;
    double m = kDefaultM;

    static Heuristic precision() { return {HeuristicKind::Precision, 0.0}; }
    static Heuristic recall() { return {HeuristicKind::Recall, 0.0}; }
    static Heuristic m_estimate(double m = kDefaultM) { return {HeuristicKind::MEstimate, m}; }

    /// Maps counts to a value in [0, 1]:
    ///   precision  = tp / (tp + fp), 0 when the rule covers nothing
    ///   recall     = tp / (tp + fn), 0 when the head class is empty
    ///   m-estimate = (tp + m * head_prior) / (tp + fp + m), head_prior when
    ///                the denominator is 0
    double evaluate(const ConfusionCounts& c, double head_prior) const;
};

/// tp = covered weight with label = head, fp = covered with other label,
/// fn/tn = the uncovered counterparts.
ConfusionCounts confusion_counts(const Rule& rule, const Dataset& data,
                                 std::span<const double> weights);

Heuristic heuristic_from_name(const std::string& name, double m = kDefaultM);
std::string heuristic_name(const Heuristic& h);

}  // namespace rfrules
