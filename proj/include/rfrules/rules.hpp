#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfrules/forest.hpp"

namespace rfrules {

enum class Relation { LessEq, Greater, Eq, NotEq };

struct Condition {
    int column = 0;
    Relation relation = Relation::LessEq;
    double threshold = 0.0;  // LessEq / Greater
    int category = 0;        // Eq / NotEq

    bool holds(const Instance& inst) const {
        const double v = inst[static_cast<std::size_t>(column)];
        switch (relation) {
            case Relation::LessEq: return v <= threshold;
            case Relation::Greater: return v > threshold;
            case Relation::Eq: return static_cast<int>(v) == category;
            case Relation::NotEq: return static_cast<int>(v) != category;
        }
        return false;
    }
};

/// Propositional rule: the body is a conjunction of conditions, the head a
/// single predicted class. origin identifies the source (tree, leaf).
struct Rule {
    std::vector<Condition> body;
    ClassId head = 0;
    int origin_tree = 0;
    int origin_leaf = 0;
};

/// All rules of a forest, one per leaf, in tree order then depth-first leaf
/// order. Rules of one tree have pairwise-disjoint coverage and jointly
/// cover the full instance space.
struct RuleSet {
    std::vector<Rule> rules;
    int source_n_trees = 0;
    std::vector<double> class_priors;
    ClassId majority_class = 0;
    Schema schema;

    std::size_t size() const { return rules.size(); }  // d
};

/// One rule per leaf. Conditions along the path are taken as-is on the left
/// branch and negated on the right (<= becomes >, = becomes !=); repeated
/// numeric conditions on one column are merged into the tightest interval,
/// which never changes coverage.
RuleSet extract_rules(const Forest& forest);

/// True iff every body condition holds; an empty body covers everything.
/// Throws when the instance is too short for some condition's column.
bool covers(const Rule& rule, const Instance& inst);

/// Sparse coverage: covered[r] lists the indices of the instances rule r
/// covers, ascending.
struct CoverageMatrix {
    std::vector<std::vector<std::uint32_t>> covered;
};

CoverageMatrix coverage_matrix(const RuleSet& ruleset, const Dataset& data, int threads = 1);

/// Per-class vote counts over all rules of the set that cover the instance.
std::vector<int> ruleset_votes(const RuleSet& ruleset, const Instance& inst);

/// "IF x <= 0.25 AND color = blue THEN class=recurrence"
std::string format_rule(const Rule& rule, const Schema& schema);

}  // namespace rfrules
