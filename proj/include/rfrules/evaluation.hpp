#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfrules/selection.hpp"

namespace rfrules {

/// Classifier over a rule subset: each covering selected rule votes for its
/// head; instances no rule covers fall back to the training majority class.
struct VotePredictor {
    const RuleSet* ruleset = nullptr;
    std::vector<std::uint32_t> selected;
    ClassId default_class = 0;
    std::vector<double> class_priors;
};

VotePredictor make_predictor(const RuleSet& ruleset, const RuleSubset& subset);

/// (predicted class, was any rule covering). Vote ties go to the higher
/// prior, then the lower class id.
std::pair<ClassId, bool> predict_vote(const VotePredictor& p, const Instance& inst);

/// Fraction of instances predicted correctly; uncovered instances count via
/// the default-class prediction.
double accuracy(const VotePredictor& p, const Dataset& test);

/// Fraction of instances no selected rule covers.
double uncovered_fraction(const VotePredictor& p, const Dataset& test);

/// How uncovered test instances enter the accuracy: predicted as the
/// training majority class, or counted as errors outright.
enum class UncoveredMode { DefaultClass, Error };

struct CurvePoint {
    int n_rules = 0;
    double accuracy = 0.0;
    double uncovered_fraction = 0.0;
};

/// Runs the selection once on `train` to length n_max (n_max = 0 means all
/// d rules) and evaluates every prefix on `test`, updating the vote tallies
/// with the newly added rule only. The curve has one point per selected
/// rule; random-trees selections can stop short of n_max.
std::vector<CurvePoint> accuracy_curve(const RuleSet& ruleset, const SelectionConfig& config,
                                       const Dataset& train, const Dataset& test, int n_max,
                                       UncoveredMode mode = UncoveredMode::DefaultClass);

/// One strategy/heuristic combination to evaluate; RandomTrees takes no
/// heuristic.
struct CellSpec {
    Strategy strategy = Strategy::WeightedCovering;
    std::optional<Heuristic> heuristic;

    std::string heuristic_label() const;
};

struct ExperimentConfig {
    int k_folds = 10;
    int n_trees = 100;
    int n_candidate_features = 0;  // 0 = ceil(sqrt(columns))
    int n_max = 0;                 // 0 = per-fold rule count d
    std::uint64_t seed = 0;
    double min_weight = 0.0;
    UncoveredMode uncovered = UncoveredMode::DefaultClass;
    int threads = 1;  // affects wall time only, never results
    std::vector<CellSpec> cells;
};

struct CellResult {
    CellSpec spec;
    std::vector<std::vector<CurvePoint>> fold_curves;
    /// Pointwise mean over folds, truncated to the shortest fold curve.
    std::vector<CurvePoint> mean_curve;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::size_t n_rows = 0;
    std::vector<std::size_t> fold_rule_counts;      // d per fold
    std::vector<double> fold_baseline_accuracy;     // full forest on the test split
    double mean_baseline_accuracy = 0.0;
    std::vector<CellResult> cells;
};

/// Cross-validated curve experiment: per fold, trains a forest on the train
/// split (RNG stream derived from (seed, fold)), extracts rules, computes
/// one curve per cell on the test split plus the full-forest baseline, then
/// aggregates pointwise means. Deterministic from (data, config.seed),
/// independent of config.threads.
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config);

/// Plot-ready dump of a selected subset over the unit square (two numeric
/// columns required): per-rule bounding rectangles plus a grid of net votes
/// (votes for class 1 minus votes for class 0 among covering selected
/// rules) and the fraction of grid cells covered by at least one rule.
struct RuleRect {
    std::uint32_t rule = 0;
    ClassId head = 0;
    double score = 0.0;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    int vote = 0;  // +1 when the head is class 1, -1 for class 0
};

struct SyntheticDump {
    std::vector<RuleRect> rects;
    int grid_resolution = 100;
    std::vector<std::vector<int>> net_votes;  // [row][col], cell centers
    double covered_fraction = 0.0;
};

SyntheticDump synthetic_rule_dump(const RuleSet& ruleset, const RuleSubset& subset,
                                  int grid_resolution = 100);

std::uint64_t fold_forest_seed(std::uint64_t seed, int fold);
std::uint64_t fold_selection_seed(std::uint64_t seed, int fold);

}  // namespace rfrules
