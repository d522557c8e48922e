#include "rfrules/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfrules/parallel.hpp"

namespace rfrules {

namespace {

constexpr double kMinGain = 1e-12;

double gini(const std::vector<double>& class_weights, double total) {
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double w : class_weights) sum_sq += (w / total) * (w / total);
    return 1.0 - sum_sq;
}

struct SplitSearch {
    const Dataset& data;
    const std::vector<std::size_t>& rows;
    std::vector<double> class_weights;  // over `rows`
    double total_weight = 0.0;
    double parent_gini = 0.0;

    SplitSearch(const Dataset& d, const std::vector<std::size_t>& r)
        : data(d), rows(r), class_weights(d.n_classes(), 0.0) {
        for (std::size_t i : rows) {
            class_weights[static_cast<std::size_t>(d.label(i))] += d.weight(i);
            total_weight += d.weight(i);
        }
        parent_gini = gini(class_weights, total_weight);
    }

    double gain(const std::vector<double>& left, double left_total) const {
        std::vector<double> right(class_weights.size());
        for (std::size_t c = 0; c < right.size(); ++c) right[c] = class_weights[c] - left[c];
        const double right_total = total_weight - left_total;
        if (left_total <= 0.0 || right_total <= 0.0) return 0.0;
        return parent_gini - (left_total / total_weight) * gini(left, left_total) -
               (right_total / total_weight) * gini(right, right_total);
    }
};

// Candidates are scanned in a fixed order (columns ascending, thresholds and
// categories ascending) and a new best must be strictly greater, which pins
// the tie-break to the lowest column, then the smallest threshold/category.
std::optional<std::pair<SplitCondition, double>> best_split_rows(
    const Dataset& data, const std::vector<std::size_t>& rows,
    const std::vector<int>& candidate_columns) {
    if (rows.size() < 2) return std::nullopt;
    SplitSearch search(data, rows);
    if (search.parent_gini <= 0.0) return std::nullopt;

    std::vector<int> cols = candidate_columns;
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    std::optional<SplitCondition> best;
    double best_gain = kMinGain;

    std::vector<std::size_t> order;
    for (int col : cols) {
        if (col < 0 || static_cast<std::size_t>(col) >= data.n_cols())
            throw std::invalid_argument("candidate column out of range");
        const Column& column = data.column(static_cast<std::size_t>(col));
        const auto value = [&](std::size_t i) { return data.row(i)[static_cast<std::size_t>(col)]; };

        if (column.kind == ColumnKind::Numeric) {
            order.assign(rows.begin(), rows.end());
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
            std::vector<double> left(data.n_classes(), 0.0);
            double left_total = 0.0;
            for (std::size_t j = 0; j + 1 < order.size(); ++j) {
                const std::size_t i = order[j];
                left[static_cast<std::size_t>(data.label(i))] += data.weight(i);
                left_total += data.weight(i);
                const double lo = value(order[j]);
                const double hi = value(order[j + 1]);
                if (lo == hi) continue;
                const double g = search.gain(left, left_total);
                if (g > best_gain) {
                    best_gain = g;
                    best = SplitCondition{col, ColumnKind::Numeric, lo + (hi - lo) / 2.0, 0};
                }
            }
        } else {
            // One pass to tally per-category class weights, then one
            // one-vs-rest gain per category present.
            std::vector<std::vector<double>> cat_class(column.categories.size());
            std::vector<double> cat_total(column.categories.size(), 0.0);
            for (std::size_t i : rows) {
                const auto cat = static_cast<std::size_t>(value(i));
                if (cat_class[cat].empty()) cat_class[cat].resize(data.n_classes(), 0.0);
                cat_class[cat][static_cast<std::size_t>(data.label(i))] += data.weight(i);
                cat_total[cat] += data.weight(i);
            }
            for (std::size_t cat = 0; cat < cat_class.size(); ++cat) {
                if (cat_class[cat].empty() || cat_total[cat] >= search.total_weight) continue;
                const double g = search.gain(cat_class[cat], cat_total[cat]);
                if (g > best_gain) {
                    best_gain = g;
                    best = SplitCondition{col, ColumnKind::Categorical, 0.0,
                                          static_cast<int>(cat)};
                }
            }
        }
    }
    if (!best) return std::nullopt;
    return std::make_pair(*best, best_gain);
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, int n_candidate_features, Rng& rng)
        : data_(data), n_candidates_(n_candidate_features), rng_(rng),
          priors_(data.class_priors()) {
        all_columns_.resize(data.n_cols());
        std::iota(all_columns_.begin(), all_columns_.end(), 0);
    }

    std::vector<TreeNode> build() {
        std::vector<std::size_t> rows(data_.n_rows());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        grow(rows);
        return std::move(nodes_);
    }

private:
    int grow(const std::vector<std::size_t>& rows) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        if (!is_pure(rows) && rows.size() >= 2) {
            if (auto split = best_split_rows(data_, rows, sample_columns())) {
                std::vector<std::size_t> left_rows, right_rows;
                for (std::size_t i : rows) {
                    if (split->first.holds(data_.row(i)))
                        left_rows.push_back(i);
                    else
                        right_rows.push_back(i);
                }
                nodes_[static_cast<std::size_t>(id)].condition = split->first;
                const int left = grow(left_rows);
                const int right = grow(right_rows);
                nodes_[static_cast<std::size_t>(id)].left = left;
                nodes_[static_cast<std::size_t>(id)].right = right;
                return id;
            }
        }
        nodes_[static_cast<std::size_t>(id)].leaf_class = majority(rows);
        return id;
    }

    bool is_pure(const std::vector<std::size_t>& rows) const {
        for (std::size_t j = 1; j < rows.size(); ++j)
            if (data_.label(rows[j]) != data_.label(rows[0])) return false;
        return true;
    }

    ClassId majority(const std::vector<std::size_t>& rows) const {
        std::vector<double> weights(data_.n_classes(), 0.0);
        for (std::size_t i : rows)
            weights[static_cast<std::size_t>(data_.label(i))] += data_.weight(i);
        return argmax_class(weights, priors_);
    }

    std::vector<int> sample_columns() {
        // Partial Fisher-Yates: the first n_candidates_ entries are a uniform
        // draw without replacement.
        std::vector<int> cols = all_columns_;
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(n_candidates_),
                                                    cols.size());
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.next_below(cols.size() - i));
            std::swap(cols[i], cols[j]);
        }
        cols.resize(k);
        return cols;
    }

    const Dataset& data_;
    int n_candidates_;
    Rng& rng_;
    std::vector<double> priors_;
    std::vector<int> all_columns_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

std::size_t DecisionTree::leaf_count() const {
    std::size_t count = 0;
    for (const TreeNode& n : nodes_)
        if (n.is_leaf()) ++count;
    return count;
}

int DecisionTree::route_to_leaf(const Instance& inst) const {
    int id = root();
    while (!node(id).is_leaf())
        id = node(id).condition.holds(inst) ? node(id).left : node(id).right;
    return id;
}

void DecisionTree::validate() const {
    if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
    std::vector<int> seen(nodes_.size(), 0);
    std::vector<int> stack{root()};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
            throw std::invalid_argument("node id out of range");
        if (++seen[static_cast<std::size_t>(id)] > 1)
            throw std::invalid_argument("node reachable more than once");
        const TreeNode& n = node(id);
        if (n.is_leaf()) {
            if (n.leaf_class < 0) throw std::invalid_argument("leaf without class");
            if (n.right >= 0) throw std::invalid_argument("leaf with a child");
        } else {
            if (n.right < 0) throw std::invalid_argument("internal node missing a child");
            stack.push_back(n.left);
            stack.push_back(n.right);
        }
    }
    for (int s : seen)
        if (s != 1) throw std::invalid_argument("unreachable node in arena");
}

std::size_t Forest::total_leaves() const {
    std::size_t total = 0;
    for (const DecisionTree& t : trees) total += t.leaf_count();
    return total;
}

std::optional<std::pair<SplitCondition, double>> best_split(
    const Dataset& data, const std::vector<int>& candidate_columns) {
    if (data.n_rows() < 2)
        throw std::invalid_argument("best_split needs at least two rows");
    std::vector<std::size_t> rows(data.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return best_split_rows(data, rows, candidate_columns);
}

DecisionTree train_tree(const Dataset& data, int n_candidate_features, Rng& rng) {
    if (data.n_rows() == 0) throw std::invalid_argument("cannot train on an empty dataset");
    if (n_candidate_features < 1 ||
        static_cast<std::size_t>(n_candidate_features) > data.n_cols())
        throw std::invalid_argument("n_candidate_features out of range");
    return DecisionTree(TreeBuilder(data, n_candidate_features, rng).build());
}

Forest train_forest(const Dataset& data, int n_trees, std::uint64_t seed,
                    int n_candidate_features, int threads) {
    if (n_trees < 1) throw std::invalid_argument("n_trees must be at least 1");
    if (data.n_rows() == 0) throw std::invalid_argument("cannot train on an empty dataset");
    if (n_candidate_features == 0)
        n_candidate_features =
            static_cast<int>(std::ceil(std::sqrt(static_cast<double>(data.n_cols()))));
    if (n_candidate_features < 1 ||
        static_cast<std::size_t>(n_candidate_features) > data.n_cols())
        throw std::invalid_argument("n_candidate_features out of range");

    Forest forest;
    forest.schema = data.schema();
    forest.class_priors = data.class_priors();
    forest.majority_class = argmax_class(forest.class_priors, forest.class_priors);
    forest.seed = seed;
    forest.n_candidate_features = n_candidate_features;
    forest.trees.assign(static_cast<std::size_t>(n_trees), DecisionTree({}));

    parallel_for(static_cast<std::size_t>(n_trees), threads, [&](std::size_t t) {
        Rng rng(mix_seed(seed, t));
        const Dataset boot = bootstrap_sample(data, rng);
        forest.trees[t] = train_tree(boot, n_candidate_features, rng);
    });
    return forest;
}

std::vector<int> forest_votes(const Forest& forest, const Instance& inst) {
    if (inst.size() != forest.schema.columns.size())
        throw std::invalid_argument("instance arity does not match the forest schema");
    std::vector<int> votes(forest.schema.class_names.size(), 0);
    for (const DecisionTree& t : forest.trees)
        votes[static_cast<std::size_t>(t.predict(inst))]++;
    return votes;
}

ClassId predict_forest(const Forest& forest, const Instance& inst) {
    return argmax_class(forest_votes(forest, inst), forest.class_priors);
}

double forest_accuracy(const Forest& forest, const Dataset& data) {
    if (data.n_rows() == 0) throw std::invalid_argument("empty evaluation set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        if (predict_forest(forest, data.row(i)) == data.label(i)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.n_rows());
}

}  // namespace rfrules
