#include "rfrules/selection.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "rfrules/rng.hpp"

namespace rfrules {

namespace {

int clamp_n(int n, std::size_t d, const char* what) {
    if (n < 1) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
    if (static_cast<std::size_t>(n) > d) {
        std::cerr << "warning: requested " << n << " rules but only " << d
                  << " exist; selecting all\n";
        return static_cast<int>(d);
    }
    return n;
}

// score desc, then shorter body, then lower index. Total order, so parallel
// and serial scans of the pool agree.
bool better(double score_a, std::size_t len_a, std::uint32_t idx_a,
            double score_b, std::size_t len_b, std::uint32_t idx_b) {
    if (score_a != score_b) return score_a > score_b;
    if (len_a != len_b) return len_a < len_b;
    return idx_a < idx_b;
}

struct WeightTotals {
    std::vector<double> per_class;
    double total = 0.0;
};

WeightTotals totals_of(const Dataset& data, const std::vector<double>& weights) {
    WeightTotals t;
    t.per_class.assign(data.n_classes(), 0.0);
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        t.per_class[static_cast<std::size_t>(data.label(i))] += weights[i];
        t.total += weights[i];
    }
    return t;
}

// Confusion counts of one rule from its sparse coverage list; iterates the
// list ascending so the floating-point sums match a naive per-instance pass.
ConfusionCounts counts_from_coverage(const Dataset& data, const std::vector<double>& weights,
                                     const WeightTotals& totals,
                                     const std::vector<std::uint32_t>& covered, ClassId head) {
    double tp = 0.0, covered_weight = 0.0;
    for (std::uint32_t i : covered) {
        const double w = weights[i];
        covered_weight += w;
        if (data.label(i) == head) tp += w;
    }
    ConfusionCounts c;
    c.tp = tp;
    c.fp = covered_weight - tp;
    c.fn = totals.per_class[static_cast<std::size_t>(head)] - tp;
    c.tn = totals.total - covered_weight - c.fn;
    return c;
}

void check_inputs(const RuleSet& ruleset, const Dataset& data, const CoverageMatrix& coverage) {
    if (data.n_rows() == 0) throw std::invalid_argument("selection needs a non-empty dataset");
    if (coverage.covered.size() != ruleset.size())
        throw std::invalid_argument("coverage matrix does not match the rule set");
}

}  // namespace

RuleSubset select_best_n(const RuleSet& ruleset, const Dataset& data,
                         const CoverageMatrix& coverage, const Heuristic& h, int n) {
    check_inputs(ruleset, data, coverage);
    n = clamp_n(n, ruleset.size(), "select_best_n");

    const std::vector<double> weights(data.n_rows(), 1.0);
    const WeightTotals totals = totals_of(data, weights);

    std::vector<double> scores(ruleset.size());
    for (std::size_t r = 0; r < ruleset.size(); ++r) {
        const Rule& rule = ruleset.rules[r];
        const ConfusionCounts c =
            counts_from_coverage(data, weights, totals, coverage.covered[r], rule.head);
        scores[r] = h.evaluate(c, ruleset.class_priors[static_cast<std::size_t>(rule.head)]);
    }

    std::vector<std::uint32_t> order(ruleset.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return better(scores[a], ruleset.rules[a].body.size(), a,
                      scores[b], ruleset.rules[b].body.size(), b);
    });

    RuleSubset subset;
    for (int k = 0; k < n; ++k) {
        subset.selected.push_back(order[static_cast<std::size_t>(k)]);
        subset.scores.push_back(scores[order[static_cast<std::size_t>(k)]]);
    }
    return subset;
}

RuleSubset select_weighted_covering(const RuleSet& ruleset, const Dataset& data,
                                    const CoverageMatrix& coverage, const Heuristic& h,
                                    int n, double min_weight) {
    check_inputs(ruleset, data, coverage);
    if (min_weight < 0.0) throw std::invalid_argument("min_weight must be non-negative");
    n = clamp_n(n, ruleset.size(), "select_weighted_covering");

    std::vector<double> weights(data.n_rows(), 1.0);
    WeightTotals totals = totals_of(data, weights);
    std::vector<bool> taken(ruleset.size(), false);

    RuleSubset subset;
    for (int round = 0; round < n; ++round) {
        bool have_best = false;
        std::uint32_t best_idx = 0;
        double best_score = 0.0;
        for (std::uint32_t r = 0; r < ruleset.size(); ++r) {
            if (taken[r]) continue;
            const Rule& rule = ruleset.rules[r];
            const ConfusionCounts c =
                counts_from_coverage(data, weights, totals, coverage.covered[r], rule.head);
            const double score =
                h.evaluate(c, ruleset.class_priors[static_cast<std::size_t>(rule.head)]);
            if (!have_best ||
                better(score, rule.body.size(), r,
                       best_score, ruleset.rules[best_idx].body.size(), best_idx)) {
                have_best = true;
                best_idx = r;
                best_score = score;
            }
        }
        taken[best_idx] = true;
        subset.selected.push_back(best_idx);
        subset.scores.push_back(best_score);

        for (std::uint32_t i : coverage.covered[best_idx]) {
            const double updated = std::max(weights[i] * 0.5, min_weight);
            const double delta = updated - weights[i];
            weights[i] = updated;
            totals.per_class[static_cast<std::size_t>(data.label(i))] += delta;
            totals.total += delta;
        }
    }
    return subset;
}

RuleSubset select_random_trees(const RuleSet& ruleset, int max_rules, std::uint64_t seed) {
    if (max_rules < 1) throw std::invalid_argument("select_random_trees: max_rules must be >= 1");

    std::vector<int> permutation(static_cast<std::size_t>(ruleset.source_n_trees));
    std::iota(permutation.begin(), permutation.end(), 0);
    Rng rng(seed);
    rng.shuffle(permutation);

    // Rules grouped by source tree, in extraction order within each block.
    std::vector<std::vector<std::uint32_t>> blocks(permutation.size());
    for (std::uint32_t r = 0; r < ruleset.size(); ++r)
        blocks[static_cast<std::size_t>(ruleset.rules[r].origin_tree)].push_back(r);

    RuleSubset subset;
    for (int t : permutation) {
        const auto& block = blocks[static_cast<std::size_t>(t)];
        if (subset.selected.size() + block.size() > static_cast<std::size_t>(max_rules)) break;
        subset.selected.insert(subset.selected.end(), block.begin(), block.end());
        subset.scores.insert(subset.scores.end(), block.size(), 0.0);
    }
    return subset;
}

RuleSubset select_best_n(const RuleSet& ruleset, const Dataset& data, const Heuristic& h, int n) {
    return select_best_n(ruleset, data, coverage_matrix(ruleset, data), h, n);
}

RuleSubset select_weighted_covering(const RuleSet& ruleset, const Dataset& data,
                                    const Heuristic& h, int n, double min_weight) {
    return select_weighted_covering(ruleset, data, coverage_matrix(ruleset, data), h, n,
                                    min_weight);
}

RuleSubset select_rules(const RuleSet& ruleset, const Dataset& data,
                        const CoverageMatrix& coverage, const SelectionConfig& config) {
    switch (config.strategy) {
        case Strategy::BestN:
            return select_best_n(ruleset, data, coverage, config.heuristic, config.n);
        case Strategy::WeightedCovering:
            return select_weighted_covering(ruleset, data, coverage, config.heuristic, config.n,
                                            config.min_weight);
        case Strategy::RandomTrees:
            return select_random_trees(ruleset, config.n, config.seed);
    }
    throw std::invalid_argument("unknown selection strategy");
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "best") return Strategy::BestN;
    if (name == "weighted-covering") return Strategy::WeightedCovering;
    if (name == "random-trees") return Strategy::RandomTrees;
    throw std::invalid_argument("unknown strategy '" + name +
                                "' (expected best, weighted-covering or random-trees)");
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::BestN: return "best";
        case Strategy::WeightedCovering: return "weighted-covering";
        case Strategy::RandomTrees: return "random-trees";
    }
    return "";
}

}  // namespace rfrules
