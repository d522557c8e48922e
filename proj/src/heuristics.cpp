#include "rfrules/heuristics.hpp"

#include <stdexcept>

namespace rfrules {

double Heuristic::evaluate(const ConfusionCounts& c, double head_prior) const {
    switch (kind) {
        case HeuristicKind::Precision:
            return c.tp + c.fp > 0.0 ? c.tp / (c.tp + c.fp) : 0.0;
        case HeuristicKind::Recall:
            return c.tp + c.fn > 0.0 ? c.tp / (c.tp + c.fn) : 0.0;
        case HeuristicKind::MEstimate: {
            const double denom = c.tp + c.fp + m;
            return denom > 0.0 ? (c.tp + m * head_prior) / denom : head_prior;
        }
    }
    return 0.0;
}

ConfusionCounts confusion_counts(const Rule& rule, const Dataset& data,
                                 std::span<const double> weights) {
    if (weights.size() != data.n_rows())
        throw std::invalid_argument("weights length does not match the dataset");
    ConfusionCounts c;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const double w = weights[i];
        if (w < 0.0) throw std::invalid_argument("negative instance weight");
        const bool positive = data.label(i) == rule.head;
        if (covers(rule, data.row(i))) {
            (positive ? c.tp : c.fp) += w;
        } else {
            (positive ? c.fn : c.tn) += w;
        }
    }
    return c;
}

Heuristic heuristic_from_name(const std::string& name, double m) {
    if (name == "precision") return Heuristic::precision();
    if (name == "recall") return Heuristic::recall();
    if (name == "m-estimate") return Heuristic::m_estimate(m);
    throw std::invalid_argument("unknown heuristic '" + name +
                                "' (expected precision, recall or m-estimate)");
}

std::string heuristic_name(const Heuristic& h) {
    switch (h.kind) {
        case HeuristicKind::Precision: return "precision";
        case HeuristicKind::Recall: return "recall";
        case HeuristicKind::MEstimate: return "m-estimate";
    }
    return "";
}

}  // namespace rfrules
