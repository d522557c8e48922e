#include "rfrules/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "rfrules/parallel.hpp"

namespace rfrules {

namespace {

void check_test_set(const VotePredictor& p, const Dataset& test) {
    if (test.n_rows() == 0) throw std::invalid_argument("empty evaluation set");
    if (test.n_cols() != p.ruleset->schema.columns.size())
        throw std::invalid_argument("dataset arity does not match the rule set schema");
}

// Incremental prefix evaluation shared by accuracy_curve.
class CurveTracker {
public:
    CurveTracker(const RuleSet& ruleset, const Dataset& test, UncoveredMode mode)
        : ruleset_(ruleset), test_(test), mode_(mode),
          votes_(test.n_rows(), std::vector<int>(ruleset.schema.class_names.size(), 0)),
          predictions_(test.n_rows(), ruleset.majority_class) {
        for (std::size_t i = 0; i < test.n_rows(); ++i)
            if (is_correct(i, false)) ++n_correct_;
    }

    void add_rule(const Rule& rule) {
        for (std::size_t i = 0; i < test_.n_rows(); ++i) {
            if (!covers(rule, test_.row(i))) continue;
            const bool was_covered = covered_count_[i] > 0;
            const bool was_correct = is_correct(i, was_covered);
            if (!was_covered) ++n_covered_;
            covered_count_[i]++;
            votes_[i][static_cast<std::size_t>(rule.head)]++;
            predictions_[i] = argmax_class(votes_[i], ruleset_.class_priors);
            n_correct_ += static_cast<int>(is_correct(i, true)) - static_cast<int>(was_correct);
        }
    }

    CurvePoint point(int n_rules) const {
        const auto n = static_cast<double>(test_.n_rows());
        return CurvePoint{n_rules, static_cast<double>(n_correct_) / n,
                          static_cast<double>(test_.n_rows() - n_covered_) / n};
    }

private:
    bool is_correct(std::size_t i, bool covered) const {
        if (!covered)
            return mode_ == UncoveredMode::DefaultClass &&
                   ruleset_.majority_class == test_.label(i);
        return predictions_[i] == test_.label(i);
    }

    const RuleSet& ruleset_;
    const Dataset& test_;
    UncoveredMode mode_;
    std::vector<std::vector<int>> votes_;
    std::vector<ClassId> predictions_;
    std::vector<int> covered_count_ = std::vector<int>(test_.n_rows(), 0);
    std::size_t n_covered_ = 0;
    long n_correct_ = 0;
};

}  // namespace

VotePredictor make_predictor(const RuleSet& ruleset, const RuleSubset& subset) {
    for (std::uint32_t r : subset.selected)
        if (r >= ruleset.size())
            throw std::invalid_argument("subset index out of range for the rule set");
    return VotePredictor{&ruleset, subset.selected, ruleset.majority_class,
                         ruleset.class_priors};
}

std::pair<ClassId, bool> predict_vote(const VotePredictor& p, const Instance& inst) {
    if (inst.size() != p.ruleset->schema.columns.size())
        throw std::invalid_argument("instance arity does not match the rule set schema");
    std::vector<int> votes(p.class_priors.size(), 0);
    bool any = false;
    for (std::uint32_t r : p.selected) {
        const Rule& rule = p.ruleset->rules[r];
        if (covers(rule, inst)) {
            votes[static_cast<std::size_t>(rule.head)]++;
            any = true;
        }
    }
    if (!any) return {p.default_class, false};
    return {argmax_class(votes, p.class_priors), true};
}

double accuracy(const VotePredictor& p, const Dataset& test) {
    check_test_set(p, test);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.n_rows(); ++i)
        if (predict_vote(p, test.row(i)).first == test.label(i)) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.n_rows());
}

double uncovered_fraction(const VotePredictor& p, const Dataset& test) {
    check_test_set(p, test);
    std::size_t uncovered = 0;
    for (std::size_t i = 0; i < test.n_rows(); ++i)
        if (!predict_vote(p, test.row(i)).second) ++uncovered;
    return static_cast<double>(uncovered) / static_cast<double>(test.n_rows());
}

std::vector<CurvePoint> accuracy_curve(const RuleSet& ruleset, const SelectionConfig& config,
                                       const Dataset& train, const Dataset& test, int n_max,
                                       UncoveredMode mode) {
    if (test.n_rows() == 0) throw std::invalid_argument("empty test set");
    const int d = static_cast<int>(ruleset.size());
    if (n_max <= 0 || n_max > d) n_max = d;

    SelectionConfig run = config;
    run.n = n_max;
    const RuleSubset subset =
        select_rules(ruleset, train, coverage_matrix(ruleset, train), run);

    std::vector<CurvePoint> curve;
    curve.reserve(subset.size());
    CurveTracker tracker(ruleset, test, mode);
    for (std::size_t k = 0; k < subset.size(); ++k) {
        tracker.add_rule(ruleset.rules[subset.selected[k]]);
        curve.push_back(tracker.point(static_cast<int>(k) + 1));
    }
    return curve;
}

std::string CellSpec::heuristic_label() const {
    return heuristic ? heuristic_name(*heuristic) : "none";
}

std::uint64_t fold_forest_seed(std::uint64_t seed, int fold) {
    return mix_seed(mix_seed(seed, 1), static_cast<std::uint64_t>(fold));
}

std::uint64_t fold_selection_seed(std::uint64_t seed, int fold) {
    return mix_seed(mix_seed(seed, 2), static_cast<std::uint64_t>(fold));
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config) {
    if (config.cells.empty())
        throw std::invalid_argument("experiment needs at least one strategy/heuristic cell");
    const auto folds = stratified_kfold(data, config.k_folds, config.seed);
    const auto k = folds.size();

    ExperimentResult result;
    result.config = config;
    result.n_rows = data.n_rows();
    result.fold_rule_counts.resize(k);
    result.fold_baseline_accuracy.resize(k);
    result.cells.resize(config.cells.size());
    for (std::size_t c = 0; c < config.cells.size(); ++c) {
        result.cells[c].spec = config.cells[c];
        result.cells[c].fold_curves.resize(k);
    }

    parallel_for(k, config.threads, [&](std::size_t f) {
        const FoldSplit& fold = folds[f];
        const Forest forest =
            train_forest(fold.train, config.n_trees,
                         fold_forest_seed(config.seed, static_cast<int>(f)),
                         config.n_candidate_features, 1);
        const RuleSet ruleset = extract_rules(forest);
        result.fold_rule_counts[f] = ruleset.size();
        result.fold_baseline_accuracy[f] = forest_accuracy(forest, fold.test);

        for (std::size_t c = 0; c < config.cells.size(); ++c) {
            SelectionConfig sel;
            sel.strategy = config.cells[c].strategy;
            if (config.cells[c].heuristic) sel.heuristic = *config.cells[c].heuristic;
            sel.seed = fold_selection_seed(config.seed, static_cast<int>(f));
            sel.min_weight = config.min_weight;
            result.cells[c].fold_curves[f] = accuracy_curve(
                ruleset, sel, fold.train, fold.test, config.n_max, config.uncovered);
        }
    });

    double baseline_sum = 0.0;
    for (double b : result.fold_baseline_accuracy) baseline_sum += b;
    result.mean_baseline_accuracy = baseline_sum / static_cast<double>(k);

    for (CellResult& cell : result.cells) {
        std::size_t len = cell.fold_curves.front().size();
        for (const auto& curve : cell.fold_curves) len = std::min(len, curve.size());
        cell.mean_curve.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            double acc = 0.0, unc = 0.0;
            for (const auto& curve : cell.fold_curves) {
                acc += curve[i].accuracy;
                unc += curve[i].uncovered_fraction;
            }
            cell.mean_curve[i] = CurvePoint{static_cast<int>(i) + 1,
                                            acc / static_cast<double>(k),
                                            unc / static_cast<double>(k)};
        }
    }
    return result;
}

SyntheticDump synthetic_rule_dump(const RuleSet& ruleset, const RuleSubset& subset,
                                  int grid_resolution) {
    if (ruleset.schema.columns.size() != 2 ||
        ruleset.schema.columns[0].kind != ColumnKind::Numeric ||
        ruleset.schema.columns[1].kind != ColumnKind::Numeric)
        throw std::invalid_argument("rule dump needs exactly two numeric columns");
    if (grid_resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");

    SyntheticDump dump;
    dump.grid_resolution = grid_resolution;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const std::uint32_t r = subset.selected[k];
        const Rule& rule = ruleset.rules[r];
        RuleRect rect;
        rect.rule = r;
        rect.head = rule.head;
        rect.score = subset.scores[k];
        rect.vote = rule.head == 1 ? 1 : -1;
        for (const Condition& cond : rule.body) {
            double& lo = cond.column == 0 ? rect.x_lo : rect.y_lo;
            double& hi = cond.column == 0 ? rect.x_hi : rect.y_hi;
            if (cond.relation == Relation::LessEq) hi = std::min(hi, cond.threshold);
            if (cond.relation == Relation::Greater) lo = std::max(lo, cond.threshold);
        }
        rect.x_lo = std::clamp(rect.x_lo, 0.0, 1.0);
        rect.x_hi = std::clamp(rect.x_hi, 0.0, 1.0);
        rect.y_lo = std::clamp(rect.y_lo, 0.0, 1.0);
        rect.y_hi = std::clamp(rect.y_hi, 0.0, 1.0);
        dump.rects.push_back(rect);
    }

    const int res = grid_resolution;
    dump.net_votes.assign(static_cast<std::size_t>(res), std::vector<int>(res, 0));
    std::size_t covered_cells = 0;
    for (int gy = 0; gy < res; ++gy) {
        for (int gx = 0; gx < res; ++gx) {
            const Instance center{(gx + 0.5) / res, (gy + 0.5) / res};
            int net = 0;
            bool any = false;
            for (std::uint32_t r : subset.selected) {
                const Rule& rule = ruleset.rules[r];
                if (!covers(rule, center)) continue;
                any = true;
                net += rule.head == 1 ? 1 : -1;
            }
            dump.net_votes[static_cast<std::size_t>(gy)][static_cast<std::size_t>(gx)] = net;
            if (any) ++covered_cells;
        }
    }
    dump.covered_fraction =
        static_cast<double>(covered_cells) / (static_cast<double>(res) * res);
    return dump;
}

}  // namespace rfrules
