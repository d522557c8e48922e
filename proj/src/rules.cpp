#include "rfrules/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rfrules/parallel.hpp"

namespace rfrules {

namespace {

// Collects one path's conditions, merging numeric bounds per column and
// dropping exact categorical duplicates. Body order is first occurrence
// along the path.
std::vector<Condition> merge_path(const std::vector<Condition>& path) {
    std::vector<Condition> body;
    for (const Condition& cond : path) {
        bool merged = false;
        for (Condition& existing : body) {
            if (existing.column != cond.column || existing.relation != cond.relation) continue;
            switch (cond.relation) {
                case Relation::LessEq:
                    existing.threshold = std::min(existing.threshold, cond.threshold);
                    merged = true;
                    break;
                case Relation::Greater:
                    existing.threshold = std::max(existing.threshold, cond.threshold);
                    merged = true;
                    break;
                case Relation::Eq:
                    merged = true;  // a second equality on one column is always redundant
                    break;
                case Relation::NotEq:
                    merged = existing.category == cond.category;
                    break;
            }
            if (merged) break;
        }
        if (!merged) body.push_back(cond);
    }
    return body;
}

void extract_tree(const DecisionTree& tree, int tree_index, std::vector<Rule>& out) {
    std::vector<Condition> path;
    // Depth-first, left before right, so rule order matches leaf order.
    const auto walk = [&](auto&& self, int id) -> void {
        const TreeNode& node = tree.node(id);
        if (node.is_leaf()) {
            out.push_back(Rule{merge_path(path), node.leaf_class, tree_index, id});
            return;
        }
        const SplitCondition& sc = node.condition;
        if (sc.kind == ColumnKind::Numeric) {
            path.push_back({sc.column, Relation::LessEq, sc.threshold, 0});
            self(self, node.left);
            path.back() = {sc.column, Relation::Greater, sc.threshold, 0};
        } else {
            path.push_back({sc.column, Relation::Eq, 0.0, sc.category});
            self(self, node.left);
            path.back() = {sc.column, Relation::NotEq, 0.0, sc.category};
        }
        self(self, node.right);
        path.pop_back();
    };
    walk(walk, tree.root());
}

std::string format_threshold(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

RuleSet extract_rules(const Forest& forest) {
    RuleSet rs;
    rs.source_n_trees = forest.n_trees();
    rs.class_priors = forest.class_priors;
    rs.majority_class = forest.majority_class;
    rs.schema = forest.schema;
    rs.rules.reserve(forest.total_leaves());
    for (int t = 0; t < forest.n_trees(); ++t)
        extract_tree(forest.trees[static_cast<std::size_t>(t)], t, rs.rules);
    return rs;
}

bool covers(const Rule& rule, const Instance& inst) {
    for (const Condition& cond : rule.body) {
        if (static_cast<std::size_t>(cond.column) >= inst.size())
            throw std::invalid_argument("instance arity too small for rule condition");
        if (!cond.holds(inst)) return false;
    }
    return true;
}

CoverageMatrix coverage_matrix(const RuleSet& ruleset, const Dataset& data, int threads) {
    if (data.n_cols() != ruleset.schema.columns.size())
        throw std::invalid_argument("dataset arity does not match the rule set schema");
    CoverageMatrix m;
    m.covered.resize(ruleset.size());
    parallel_for(ruleset.size(), threads, [&](std::size_t r) {
        const Rule& rule = ruleset.rules[r];
        for (std::size_t i = 0; i < data.n_rows(); ++i)
            if (covers(rule, data.row(i))) m.covered[r].push_back(static_cast<std::uint32_t>(i));
    });
    return m;
}

std::vector<int> ruleset_votes(const RuleSet& ruleset, const Instance& inst) {
    if (inst.size() != ruleset.schema.columns.size())
        throw std::invalid_argument("instance arity does not match the rule set schema");
    std::vector<int> votes(ruleset.schema.class_names.size(), 0);
    for (const Rule& rule : ruleset.rules)
        if (covers(rule, inst)) votes[static_cast<std::size_t>(rule.head)]++;
    return votes;
}

std::string format_rule(const Rule& rule, const Schema& schema) {
    std::ostringstream out;
    out << "IF ";
    if (rule.body.empty()) out << "TRUE";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        const Condition& cond = rule.body[i];
        if (i > 0) out << " AND ";
        const Column& col = schema.columns[static_cast<std::size_t>(cond.column)];
        out << col.name;
        switch (cond.relation) {
            case Relation::LessEq: out << " <= " << format_threshold(cond.threshold); break;
            case Relation::Greater: out << " > " << format_threshold(cond.threshold); break;
            case Relation::Eq:
                out << " = " << col.categories[static_cast<std::size_t>(cond.category)];
                break;
            case Relation::NotEq:
                out << " != " << col.categories[static_cast<std::size_t>(cond.category)];
                break;
        }
    }
    out << " THEN class=" << schema.class_names[static_cast<std::size_t>(rule.head)];
    return out.str();
}

}  // namespace rfrules
