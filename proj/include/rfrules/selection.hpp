#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfrules/heuristics.hpp"
#include "rfrules/rules.hpp"

namespace rfrules {

enum class Strategy { BestN, WeightedCovering, RandomTrees };

struct SelectionConfig {
    Strategy strategy = Strategy::WeightedCovering;
    Heuristic heuristic;
    int n = 0;  // requested subset size (cap for RandomTrees)
    std::uint64_t seed = 0;        // RandomTrees only
    double min_weight = 0.0;       // WeightedCovering: floor under halving
};

/// Ordered selection: rule indices into the RuleSet plus the heuristic value
/// each rule had at selection time.
struct RuleSubset {
    std::vector<std::uint32_t> selected;
    std::vector<double> scores;

    std::size_t size() const { return selected.size(); }
};

/// Top n rules by heuristic value on unit weights. Ties break toward the
/// shorter body, then the lower rule index. n > d is clamped with a warning.
RuleSubset select_best_n(const RuleSet& ruleset, const Dataset& data,
                         const CoverageMatrix& coverage, const Heuristic& h, int n);

/// Greedy covering: each round scores every unselected rule under the
/// current instance weights (all 1.0 initially), picks the best (same
/// tie-break as best-n) and halves the weights of the instances it covers;
/// min_weight floors the halving. Head priors stay frozen at the values
/// recorded in the rule set.
///
/// Each round rescans the whole unselected pool, O(n * d) scorings over the
/// sparse coverage lists. Incremental score maintenance (only rules whose
/// coverage intersects the just-halved instances change) would cut this but
/// is not needed at the corpus sizes this runs on.
RuleSubset select_weighted_covering(const RuleSet& ruleset, const Dataset& data,
                                    const CoverageMatrix& coverage, const Heuristic& h,
                                    int n, double min_weight = 0.0);

/// Whole trees in a seeded uniformly random order; stops before the block
/// that would push the selection past max_rules. Scores are recorded as 0.
RuleSubset select_random_trees(const RuleSet& ruleset, int max_rules, std::uint64_t seed);

/// Convenience overloads that compute the coverage matrix internally.
RuleSubset select_best_n(const RuleSet& ruleset, const Dataset& data, const Heuristic& h, int n);
RuleSubset select_weighted_covering(const RuleSet& ruleset, const Dataset& data,
                                    const Heuristic& h, int n, double min_weight = 0.0);

/// Dispatch on config.strategy.
RuleSubset select_rules(const RuleSet& ruleset, const Dataset& data,
                        const CoverageMatrix& coverage, const SelectionConfig& config);

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

}  // namespace rfrules
