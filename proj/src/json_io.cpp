#include "rfrules/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rfrules {

using nlohmann::json;

namespace {

void expect(const json& doc, const char* kind) {
    if (!doc.is_object() || doc.value("kind", "") != kind)
        throw std::runtime_error(std::string("expected a '") + kind + "' document");
    if (doc.value("format_version", 0) != kFormatVersion)
        throw std::runtime_error(std::string("unsupported format_version in '") + kind +
                                 "' document");
}

json schema_to_json(const Schema& schema) {
    json cols = json::array();
    for (const Column& c : schema.columns) {
        json col{{"name", c.name},
                 {"kind", c.kind == ColumnKind::Numeric ? "numeric" : "categorical"}};
        if (c.kind == ColumnKind::Categorical) col["categories"] = c.categories;
        cols.push_back(std::move(col));
    }
    return json{{"columns", std::move(cols)}, {"class_names", schema.class_names}};
}

Schema schema_from_json(const json& doc) {
    Schema schema;
    for (const json& col : doc.at("columns")) {
        Column c;
        c.name = col.at("name").get<std::string>();
        const std::string kind = col.at("kind").get<std::string>();
        if (kind == "numeric") {
            c.kind = ColumnKind::Numeric;
        } else if (kind == "categorical") {
            c.kind = ColumnKind::Categorical;
            c.categories = col.at("categories").get<std::vector<std::string>>();
        } else {
            throw std::runtime_error("unknown column kind '" + kind + "'");
        }
        schema.columns.push_back(std::move(c));
    }
    schema.class_names = doc.at("class_names").get<std::vector<std::string>>();
    return schema;
}

json condition_to_json(const SplitCondition& c) {
    if (c.kind == ColumnKind::Numeric)
        return json{{"column", c.column}, {"kind", "le"}, {"threshold", c.threshold}};
    return json{{"column", c.column}, {"kind", "eq"}, {"category", c.category}};
}

SplitCondition condition_from_json(const json& doc) {
    SplitCondition c;
    c.column = doc.at("column").get<int>();
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "le") {
        c.kind = ColumnKind::Numeric;
        c.threshold = doc.at("threshold").get<double>();
    } else if (kind == "eq") {
        c.kind = ColumnKind::Categorical;
        c.category = doc.at("category").get<int>();
    } else {
        throw std::runtime_error("unknown split kind '" + kind + "'");
    }
    return c;
}

json strategy_heuristic_config(const SelectionConfig& config) {
    json out{{"strategy", strategy_name(config.strategy)},
             {"n", config.n},
             {"min_weight", config.min_weight}};
    if (config.strategy == Strategy::RandomTrees) {
        out["seed"] = config.seed;
    } else {
        out["heuristic"] = heuristic_name(config.heuristic);
        if (config.heuristic.kind == HeuristicKind::MEstimate) out["m"] = config.heuristic.m;
    }
    return out;
}

std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

json forest_to_json(const Forest& forest) {
    json trees = json::array();
    for (const DecisionTree& tree : forest.trees) {
        json nodes = json::array();
        for (const TreeNode& n : tree.nodes()) {
            if (n.is_leaf())
                nodes.push_back(json{{"leaf", n.leaf_class}});
            else
                nodes.push_back(json{{"split", condition_to_json(n.condition)},
                                     {"left", n.left},
                                     {"right", n.right}});
        }
        trees.push_back(json{{"nodes", std::move(nodes)}});
    }
    return json{{"format_version", kFormatVersion},
                {"kind", "forest"},
                {"seed", forest.seed},
                {"n_candidate_features", forest.n_candidate_features},
                {"schema", schema_to_json(forest.schema)},
                {"class_priors", forest.class_priors},
                {"majority_class", forest.majority_class},
                {"trees", std::move(trees)}};
}

Forest forest_from_json(const json& doc) {
    expect(doc, "forest");
    Forest forest;
    forest.seed = doc.at("seed").get<std::uint64_t>();
    forest.n_candidate_features = doc.value("n_candidate_features", 0);
    forest.schema = schema_from_json(doc.at("schema"));
    forest.class_priors = doc.at("class_priors").get<std::vector<double>>();
    forest.majority_class = doc.at("majority_class").get<ClassId>();
    for (const json& tree : doc.at("trees")) {
        std::vector<TreeNode> nodes;
        for (const json& n : tree.at("nodes")) {
            TreeNode node;
            if (n.contains("leaf")) {
                node.leaf_class = n.at("leaf").get<ClassId>();
            } else {
                node.condition = condition_from_json(n.at("split"));
                node.left = n.at("left").get<int>();
                node.right = n.at("right").get<int>();
            }
            nodes.push_back(node);
        }
        forest.trees.emplace_back(std::move(nodes));
        forest.trees.back().validate();
    }
    if (forest.trees.empty()) throw std::runtime_error("forest document has no trees");
    return forest;
}

json ruleset_to_json(const RuleSet& ruleset) {
    json rules = json::array();
    for (const Rule& rule : ruleset.rules) {
        json body = json::array();
        for (const Condition& cond : rule.body) {
            switch (cond.relation) {
                case Relation::LessEq:
                    body.push_back(json{{"column", cond.column}, {"relation", "le"},
                                        {"threshold", cond.threshold}});
                    break;
                case Relation::Greater:
                    body.push_back(json{{"column", cond.column}, {"relation", "gt"},
                                        {"threshold", cond.threshold}});
                    break;
                case Relation::Eq:
                    body.push_back(json{{"column", cond.column}, {"relation", "eq"},
                                        {"category", cond.category}});
                    break;
                case Relation::NotEq:
                    body.push_back(json{{"column", cond.column}, {"relation", "ne"},
                                        {"category", cond.category}});
                    break;
            }
        }
        rules.push_back(json{{"body", std::move(body)},
                             {"head", rule.head},
                             {"origin_tree", rule.origin_tree},
                             {"origin_leaf", rule.origin_leaf}});
    }
    return json{{"format_version", kFormatVersion},
                {"kind", "ruleset"},
                {"d", ruleset.size()},
                {"source_n_trees", ruleset.source_n_trees},
                {"class_priors", ruleset.class_priors},
                {"majority_class", ruleset.majority_class},
                {"schema", schema_to_json(ruleset.schema)},
                {"rules", std::move(rules)}};
}

RuleSet ruleset_from_json(const json& doc) {
    expect(doc, "ruleset");
    RuleSet ruleset;
    ruleset.source_n_trees = doc.at("source_n_trees").get<int>();
    ruleset.class_priors = doc.at("class_priors").get<std::vector<double>>();
    ruleset.majority_class = doc.at("majority_class").get<ClassId>();
    ruleset.schema = schema_from_json(doc.at("schema"));
    for (const json& r : doc.at("rules")) {
        Rule rule;
        rule.head = r.at("head").get<ClassId>();
        rule.origin_tree = r.at("origin_tree").get<int>();
        rule.origin_leaf = r.at("origin_leaf").get<int>();
        for (const json& c : r.at("body")) {
            Condition cond;
            cond.column = c.at("column").get<int>();
            const std::string rel = c.at("relation").get<std::string>();
            if (rel == "le" || rel == "gt") {
                cond.relation = rel == "le" ? Relation::LessEq : Relation::Greater;
                cond.threshold = c.at("threshold").get<double>();
            } else if (rel == "eq" || rel == "ne") {
                cond.relation = rel == "eq" ? Relation::Eq : Relation::NotEq;
                cond.category = c.at("category").get<int>();
            } else {
                throw std::runtime_error("unknown rule relation '" + rel + "'");
            }
            rule.body.push_back(cond);
        }
        ruleset.rules.push_back(std::move(rule));
    }
    if (doc.at("d").get<std::size_t>() != ruleset.size())
        throw std::runtime_error("ruleset document d does not match its rule count");
    return ruleset;
}

json subset_to_json(const RuleSubset& subset, const SelectionConfig& config,
                    const RuleSet& ruleset) {
    return json{{"format_version", kFormatVersion},
                {"kind", "rule_subset"},
                {"config", strategy_heuristic_config(config)},
                {"d", ruleset.size()},
                {"source_n_trees", ruleset.source_n_trees},
                {"indices", subset.selected},
                {"scores", subset.scores}};
}

std::pair<RuleSubset, SelectionConfig> subset_from_json(const json& doc, const RuleSet& ruleset) {
    expect(doc, "rule_subset");
    if (doc.at("d").get<std::size_t>() != ruleset.size())
        throw std::runtime_error("subset was selected from a rule set of different size");
    RuleSubset subset;
    subset.selected = doc.at("indices").get<std::vector<std::uint32_t>>();
    subset.scores = doc.at("scores").get<std::vector<double>>();
    for (std::uint32_t r : subset.selected)
        if (r >= ruleset.size()) throw std::runtime_error("subset index out of range");

    SelectionConfig config;
    const json& c = doc.at("config");
    config.strategy = strategy_from_name(c.at("strategy").get<std::string>());
    config.n = c.at("n").get<int>();
    config.min_weight = c.value("min_weight", 0.0);
    if (config.strategy == Strategy::RandomTrees)
        config.seed = c.at("seed").get<std::uint64_t>();
    else
        config.heuristic =
            heuristic_from_name(c.at("heuristic").get<std::string>(), c.value("m", kDefaultM));
    return {std::move(subset), config};
}

json experiment_to_json(const ExperimentResult& result) {
    const ExperimentConfig& config = result.config;
    json cells = json::array();
    for (const CellResult& cell : result.cells) {
        const auto curve_to_json = [](const std::vector<CurvePoint>& curve) {
            json points = json::array();
            for (const CurvePoint& p : curve)
                points.push_back(json{{"n", p.n_rules},
                                      {"accuracy", p.accuracy},
                                      {"uncovered", p.uncovered_fraction}});
            return points;
        };
        json fold_curves = json::array();
        for (const auto& curve : cell.fold_curves) fold_curves.push_back(curve_to_json(curve));
        cells.push_back(json{{"strategy", strategy_name(cell.spec.strategy)},
                             {"heuristic", cell.spec.heuristic_label()},
                             {"fold_curves", std::move(fold_curves)},
                             {"mean_curve", curve_to_json(cell.mean_curve)}});
    }
    // config.threads is deliberately not echoed: artifacts must be identical
    // for every thread count.
    json config_echo{{"folds", config.k_folds},
                     {"trees", config.n_trees},
                     {"n_candidate_features", config.n_candidate_features},
                     {"n_max", config.n_max},
                     {"seed", config.seed},
                     {"min_weight", config.min_weight},
                     {"uncovered",
                      config.uncovered == UncoveredMode::DefaultClass ? "default-class" : "error"}};
    return json{{"format_version", kFormatVersion},
                {"kind", "experiment"},
                {"config", std::move(config_echo)},
                {"n_rows", result.n_rows},
                {"fold_rule_counts", result.fold_rule_counts},
                {"fold_baseline_accuracy", result.fold_baseline_accuracy},
                {"mean_baseline_accuracy", result.mean_baseline_accuracy},
                {"cells", std::move(cells)}};
}

std::string experiment_to_csv(const ExperimentResult& result, int stride) {
    if (stride < 1) stride = 1;
    std::ostringstream out;
    out << "fold,strategy,heuristic,n,accuracy,uncovered\n";
    const auto emit_curve = [&](const std::string& fold, const std::string& strategy,
                                const std::string& heuristic,
                                const std::vector<CurvePoint>& curve) {
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (i % static_cast<std::size_t>(stride) != 0 && i + 1 != curve.size()) continue;
            out << fold << ',' << strategy << ',' << heuristic << ',' << curve[i].n_rules << ','
                << format_csv_double(curve[i].accuracy) << ','
                << format_csv_double(curve[i].uncovered_fraction) << '\n';
        }
    };
    for (std::size_t f = 0; f < result.fold_baseline_accuracy.size(); ++f)
        out << f << ",forest-baseline,none,0,"
            << format_csv_double(result.fold_baseline_accuracy[f]) << ",0\n";
    out << "mean,forest-baseline,none,0,"
        << format_csv_double(result.mean_baseline_accuracy) << ",0\n";
    for (const CellResult& cell : result.cells) {
        const std::string strategy = strategy_name(cell.spec.strategy);
        const std::string heuristic = cell.spec.heuristic_label();
        for (std::size_t f = 0; f < cell.fold_curves.size(); ++f)
            emit_curve(std::to_string(f), strategy, heuristic, cell.fold_curves[f]);
        emit_curve("mean", strategy, heuristic, cell.mean_curve);
    }
    return out.str();
}

json synthetic_dump_to_json(const SyntheticDump& dump, const SelectionConfig& config) {
    json rects = json::array();
    for (const RuleRect& r : dump.rects)
        rects.push_back(json{{"rule", r.rule},
                             {"head", r.head},
                             {"score", r.score},
                             {"x", json::array({r.x_lo, r.x_hi})},
                             {"y", json::array({r.y_lo, r.y_hi})},
                             {"vote", r.vote}});
    return json{{"format_version", kFormatVersion},
                {"kind", "rule_rectangles"},
                {"config", strategy_heuristic_config(config)},
                {"rects", std::move(rects)},
                {"grid",
                 json{{"resolution", dump.grid_resolution},
                      {"net_votes", dump.net_votes},
                      {"covered_fraction", dump.covered_fraction}}}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return doc;
}

void write_json_file(const std::string& path, const json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace rfrules
