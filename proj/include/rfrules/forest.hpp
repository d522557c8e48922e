#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rfrules/dataset.hpp"
#include "rfrules/rng.hpp"

namespace rfrules {

/// Per-node test. A tree branches left when the condition holds:
/// numeric columns test value <= threshold, categorical test value == category.
struct SplitCondition {
    int column = 0;
    ColumnKind kind = ColumnKind::Numeric;
    double threshold = 0.0;  // numeric
    int category = 0;        // categorical

    bool holds(const Instance& inst) const {
        const double v = inst[static_cast<std::size_t>(column)];
        return kind == ColumnKind::Numeric ? v <= threshold
                                           : static_cast<int>(v) == category;
    }
};

struct TreeNode {
    SplitCondition condition;  // internal nodes only
    int left = -1;
    int right = -1;
    ClassId leaf_class = -1;  // leaves only

    bool is_leaf() const { return left < 0; }
};

/// Binary decision tree stored as a node arena in depth-first preorder
/// (node, left subtree, right subtree); the root is node 0.
class DecisionTree {
public:
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int root() const { return 0; }

    std::size_t leaf_count() const;

    /// Id of the unique leaf the instance is routed to.
    int route_to_leaf(const Instance& inst) const;
    ClassId predict(const Instance& inst) const {
        return node(route_to_leaf(inst)).leaf_class;
    }

    /// Checks tree shape (two children per internal node, every node
    /// reachable exactly once); throws std::invalid_argument on violation.
    void validate() const;

private:
    std::vector<TreeNode> nodes_;
};

struct Forest {
    std::vector<DecisionTree> trees;
    Schema schema;
    std::vector<double> class_priors;  // unweighted training frequencies
    ClassId majority_class = 0;
    std::uint64_t seed = 0;
    int n_candidate_features = 0;

    int n_trees() const { return static_cast<int>(trees.size()); }
    std::size_t total_leaves() const;
};

/// Highest-gain condition over the candidate columns, or nullopt when no
/// split has positive weighted Gini decrease. Numeric thresholds are
/// midpoints between consecutive distinct sorted values; categorical
/// candidates are one-vs-rest equality tests on the categories present.
/// Ties resolve to the lowest column, then the smallest threshold/category.
std::optional<std::pair<SplitCondition, double>> best_split(
    const Dataset& data, const std::vector<int>& candidate_columns);

/// Unpruned CART-style tree. A fresh random subset of n_candidate_features
/// columns is drawn at every node. Recursion stops at pure nodes, nodes with
/// fewer than two rows, and nodes without a positive-gain split. Leaves
/// predict the weighted majority class; ties go to the class with the higher
/// training prior, then the lower id.
DecisionTree train_tree(const Dataset& data, int n_candidate_features, Rng& rng);

/// Bagged forest: tree t is trained on bootstrap_sample(data) with an RNG
/// stream derived from (seed, t), so the result is independent of `threads`.
/// n_candidate_features = 0 selects the default ceil(sqrt(column count)).
Forest train_forest(const Dataset& data, int n_trees, std::uint64_t seed,
                    int n_candidate_features = 0, int threads = 1);

/// Per-class vote counts, one vote per tree.
std::vector<int> forest_votes(const Forest& forest, const Instance& inst);

/// Majority vote; ties go to the class with the higher training prior, then
/// the lower id.
ClassId predict_forest(const Forest& forest, const Instance& inst);

double forest_accuracy(const Forest& forest, const Dataset& data);

/// Shared tie-break: among classes with maximal score, prefer the higher
/// prior, then the lower class id.
template <typename Score>
ClassId argmax_class(const std::vector<Score>& scores, const std::vector<double>& priors) {
    ClassId best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        const auto b = static_cast<std::size_t>(best);
        if (scores[c] > scores[b] ||
            (scores[c] == scores[b] && priors[c] > priors[b]))
            best = static_cast<ClassId>(c);
    }
    return best;
}

}  // namespace rfrules
