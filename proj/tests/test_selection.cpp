#include <algorithm>
#include <numeric>

#include <doctest.h>

#include "rfrules/selection.hpp"
#include "test_util.hpp"

using namespace rfrules;

namespace {

// Independent greedy reimplementation: per-instance covers() checks, its own
// weight bookkeeping, full rescan every round.
struct NaiveGreedy {
    std::vector<std::uint32_t> sequence;
    std::vector<double> scores;

    NaiveGreedy(const RuleSet& rs, const Dataset& data, const Heuristic& h, int n,
                double min_weight = 0.0) {
        std::vector<double> w(data.n_rows(), 1.0);
        std::vector<bool> used(rs.size(), false);
        for (int round = 0; round < n; ++round) {
            int best = -1;
            double best_score = 0.0;
            for (std::size_t r = 0; r < rs.size(); ++r) {
                if (used[r]) continue;
                ConfusionCounts c;
                for (std::size_t i = 0; i < data.n_rows(); ++i) {
                    const bool cov = covers(rs.rules[r], data.row(i));
                    const bool pos = data.label(i) == rs.rules[r].head;
                    if (cov && pos) c.tp += w[i];
                    if (cov && !pos) c.fp += w[i];
                    if (!cov && pos) c.fn += w[i];
                    if (!cov && !pos) c.tn += w[i];
                }
                const double score =
                    h.evaluate(c, rs.class_priors[static_cast<std::size_t>(rs.rules[r].head)]);
                const bool wins =
                    best < 0 || score > best_score ||
                    (score == best_score &&
                     (rs.rules[r].body.size() <
                          rs.rules[static_cast<std::size_t>(best)].body.size() ||
                      (rs.rules[r].body.size() ==
                           rs.rules[static_cast<std::size_t>(best)].body.size() &&
                       r < static_cast<std::size_t>(best))));
                if (wins) {
                    best = static_cast<int>(r);
                    best_score = score;
                }
            }
            used[static_cast<std::size_t>(best)] = true;
            sequence.push_back(static_cast<std::uint32_t>(best));
            scores.push_back(best_score);
            for (std::size_t i = 0; i < data.n_rows(); ++i)
                if (covers(rs.rules[static_cast<std::size_t>(best)], data.row(i)))
                    w[i] = std::max(w[i] * 0.5, min_weight);
        }
    }
};

struct Toy {
    Dataset data;
    Forest forest;
    RuleSet ruleset;
};

Toy make_toy(std::uint64_t seed, std::size_t rows = 30, int trees = 6) {
    Rng rng(seed);
    Toy toy{testutil::random_dataset(rng, rows, 2, 1, 2), Forest{}, RuleSet{}};
    toy.forest = train_forest(toy.data, trees, seed + 1);
    toy.ruleset = extract_rules(toy.forest);
    return toy;
}

}  // namespace

TEST_CASE("best_n with n = d returns every rule in score order") {
    const Toy toy = make_toy(1);
    const int d = static_cast<int>(toy.ruleset.size());
    const RuleSubset all = select_best_n(toy.ruleset, toy.data, Heuristic::precision(), d);
    REQUIRE(all.size() == toy.ruleset.size());
    std::vector<std::uint32_t> sorted_ids = all.selected;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    for (std::size_t i = 0; i < sorted_ids.size(); ++i) CHECK(sorted_ids[i] == i);
    for (std::size_t i = 1; i < all.scores.size(); ++i)
        CHECK(all.scores[i] <= all.scores[i - 1]);
}

TEST_CASE("equal scores rank the shorter body first") {
    RuleSet rs;
    rs.schema = Schema{{{"x", ColumnKind::Numeric, {}}}, {"A", "B"}};
    rs.class_priors = {0.5, 0.5};
    rs.source_n_trees = 1;
    // both rules cover everything and have equal precision; bodies of length 3 and 1
    Rule long_rule{{{0, Relation::Greater, -3.0, 0},
                    {0, Relation::LessEq, 99.0, 0},
                    {0, Relation::Greater, -5.0, 0}},
                   0, 0, 0};
    Rule short_rule{{{0, Relation::LessEq, 99.0, 0}}, 0, 0, 1};
    rs.rules = {long_rule, short_rule};

    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset d(cols, {"A", "B"});
    d.add_row({1.0}, 0, 1.0);
    d.add_row({2.0}, 1, 1.0);

    const RuleSubset subset = select_best_n(rs, d, Heuristic::precision(), 2);
    CHECK(subset.selected == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("best_n matches an independent score-then-sort oracle") {
    const Toy toy = make_toy(77);
    const Heuristic h = Heuristic::precision();
    const RuleSubset subset = select_best_n(toy.ruleset, toy.data, h, 30);

    // oracle: score every rule with unit weights, stable sort by the
    // documented key
    const std::vector<double> unit(toy.data.n_rows(), 1.0);
    std::vector<double> scores;
    for (const Rule& rule : toy.ruleset.rules)
        scores.push_back(h.evaluate(
            confusion_counts(rule, toy.data, unit),
            toy.ruleset.class_priors[static_cast<std::size_t>(rule.head)]));
    std::vector<std::uint32_t> order(toy.ruleset.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return toy.ruleset.rules[a].body.size() < toy.ruleset.rules[b].body.size();
    });
    REQUIRE(subset.size() == 30);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        CHECK(subset.selected[i] == order[i]);
        CHECK(subset.scores[i] == scores[order[i]]);
    }
}

TEST_CASE("weighted covering with n = 1 equals best_n with n = 1") {
    for (std::uint64_t seed : {2u, 3u, 4u}) {
        const Toy toy = make_toy(seed);
        for (const Heuristic& h : {Heuristic::precision(), Heuristic::recall(),
                                   Heuristic::m_estimate()}) {
            const RuleSubset a = select_best_n(toy.ruleset, toy.data, h, 1);
            const RuleSubset b = select_weighted_covering(toy.ruleset, toy.data, h, 1);
            CHECK(a.selected == b.selected);
            CHECK(a.scores == b.scores);
        }
    }
}

TEST_CASE("weighted covering halves the weights of covered instances") {
    // Two-instance coverage on a 4-instance set: the second-round score of a
    // rule covering exactly the halved instances must reflect weights
    // (0.5, 0.5, 1, 1).
    RuleSet rs;
    rs.schema = Schema{{{"x", ColumnKind::Numeric, {}}}, {"A", "B"}};
    rs.class_priors = {0.5, 0.5};
    rs.source_n_trees = 1;
    Rule first{{{0, Relation::LessEq, 1.5, 0}}, 0, 0, 0};   // covers rows 0, 1
    Rule second{{{0, Relation::LessEq, 2.5, 0}}, 0, 0, 1};  // covers rows 0, 1, 2
    rs.rules = {first, second};

    std::vector<Column> cols{{"x", ColumnKind::Numeric, {}}};
    Dataset d(cols, {"A", "B"});
    d.add_row({1.0}, 0, 1.0);
    d.add_row({1.2}, 0, 1.0);
    d.add_row({2.0}, 0, 1.0);
    d.add_row({3.0}, 1, 1.0);

    const RuleSubset subset =
        select_weighted_covering(rs, d, Heuristic::recall(), 2);
    REQUIRE(subset.selected == std::vector<std::uint32_t>{0, 1});
    // round 1: recall(first) = 2/3 with unit weights
    CHECK(subset.scores[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // round 2: weights (0.5, 0.5, 1, 1) -> recall(second) = 2/2
    CHECK(subset.scores[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted covering matches the naive greedy oracle") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed * 13 + 5);
        const std::size_t rows = 8 + rng.next_below(12);
        const Toy toy = make_toy(seed + 100, rows, 3);
        const int n = static_cast<int>(std::min<std::size_t>(toy.ruleset.size(), 8));
        for (const Heuristic& h : {Heuristic::recall(), Heuristic::m_estimate()}) {
            const RuleSubset got = select_weighted_covering(toy.ruleset, toy.data, h, n);
            const NaiveGreedy want(toy.ruleset, toy.data, h, n);
            CHECK(got.selected == want.sequence);
            CHECK(got.scores == want.scores);
        }
    }
}

TEST_CASE("weighted covering respects the min-weight floor") {
    const Toy toy = make_toy(55, 20, 4);
    const int n = static_cast<int>(std::min<std::size_t>(toy.ruleset.size(), 8));
    const RuleSubset got =
        select_weighted_covering(toy.ruleset, toy.data, Heuristic::recall(), n, 0.25);
    const NaiveGreedy want(toy.ruleset, toy.data, Heuristic::recall(), n, 0.25);
    CHECK(got.selected == want.sequence);
    CHECK(got.scores == want.scores);
}

TEST_CASE("greedy prefix property for best_n and weighted covering") {
    const Toy toy = make_toy(321);
    for (const Heuristic& h : {Heuristic::precision(), Heuristic::recall()}) {
        const RuleSubset small = select_best_n(toy.ruleset, toy.data, h, 3);
        const RuleSubset large = select_best_n(toy.ruleset, toy.data, h, 7);
        for (int i = 0; i < 3; ++i) CHECK(small.selected[i] == large.selected[i]);

        const RuleSubset wc_small = select_weighted_covering(toy.ruleset, toy.data, h, 3);
        const RuleSubset wc_large = select_weighted_covering(toy.ruleset, toy.data, h, 7);
        for (int i = 0; i < 3; ++i) CHECK(wc_small.selected[i] == wc_large.selected[i]);
    }
}

TEST_CASE("random trees appends whole blocks in the permuted order") {
    const Toy toy = make_toy(9, 25, 5);
    const int d = static_cast<int>(toy.ruleset.size());

    const RuleSubset all = select_random_trees(toy.ruleset, d, 7);
    REQUIRE(all.size() == toy.ruleset.size());

    // recover the block order and verify each block is contiguous and complete
    std::vector<int> block_order;
    for (std::uint32_t r : all.selected) {
        const int tree = toy.ruleset.rules[r].origin_tree;
        if (block_order.empty() || block_order.back() != tree) block_order.push_back(tree);
    }
    CHECK(block_order.size() == 5);

    // replay the permutation: same seed must give the same block order
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(7);
    rng.shuffle(perm);
    CHECK(block_order == perm);

    // a budget of the first two permuted blocks selects exactly those blocks
    std::size_t two_blocks = 0;
    for (const Rule& rule : toy.ruleset.rules)
        if (rule.origin_tree == perm[0] || rule.origin_tree == perm[1]) ++two_blocks;
    const RuleSubset capped =
        select_random_trees(toy.ruleset, static_cast<int>(two_blocks), 7);
    REQUIRE(capped.size() == two_blocks);
    for (std::uint32_t r : capped.selected) {
        const int tree = toy.ruleset.rules[r].origin_tree;
        CHECK((tree == perm[0] || tree == perm[1]));
    }
}

TEST_CASE("random trees on a one-tree forest returns that tree") {
    const Toy toy = make_toy(13, 20, 1);
    const RuleSubset subset =
        select_random_trees(toy.ruleset, static_cast<int>(toy.ruleset.size()), 999);
    REQUIRE(subset.size() == toy.ruleset.size());
    for (std::size_t i = 0; i < subset.size(); ++i)
        CHECK(subset.selected[i] == i);
}

TEST_CASE("selection rejects n < 1 and clamps n > d") {
    const Toy toy = make_toy(21, 15, 2);
    CHECK_THROWS_AS(select_best_n(toy.ruleset, toy.data, Heuristic::recall(), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(select_weighted_covering(toy.ruleset, toy.data, Heuristic::recall(), -2),
                    std::invalid_argument);
    const int d = static_cast<int>(toy.ruleset.size());
    const RuleSubset clamped = select_best_n(toy.ruleset, toy.data, Heuristic::recall(), d + 50);
    CHECK(clamped.size() == toy.ruleset.size());
}

TEST_CASE("selected indices are distinct and valid") {
    const Toy toy = make_toy(31);
    const int n = static_cast<int>(std::min<std::size_t>(toy.ruleset.size(), 12));
    for (const auto strategy : {Strategy::BestN, Strategy::WeightedCovering,
                                Strategy::RandomTrees}) {
        SelectionConfig config;
        config.strategy = strategy;
        config.heuristic = Heuristic::m_estimate();
        config.n = n;
        config.seed = 5;
        const RuleSubset subset = select_rules(
            toy.ruleset, toy.data, coverage_matrix(toy.ruleset, toy.data), config);
        std::vector<std::uint32_t> ids = subset.selected;
        std::sort(ids.begin(), ids.end());
        CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
        for (std::uint32_t r : ids) CHECK(r < toy.ruleset.size());
        CHECK(subset.scores.size() == subset.selected.size());
    }
}
