#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfrules/evaluation.hpp"
#include "rfrules/json_io.hpp"

namespace {

using namespace rfrules;

struct CommonOpts {
    std::string label_column;
    std::uint64_t seed = 0;
    int threads = 1;
};

Dataset load_aligned(const std::string& path, const std::string& label_column,
                     const Schema& schema) {
    const auto label = label_column.empty() ? std::nullopt
                                            : std::optional<std::string>(label_column);
    return align_to_schema(load_csv(path, label), schema);
}

std::string rules_as_text(const RuleSet& ruleset, const RuleSubset& subset) {
    std::string out;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        out += format_rule(ruleset.rules[subset.selected[k]], ruleset.schema);
        out += '\n';
    }
    return out;
}

int cmd_train(const std::string& data_path, const std::string& output,
              const CommonOpts& common, int trees, int features_per_node) {
    const auto label = common.label_column.empty()
                           ? std::nullopt
                           : std::optional<std::string>(common.label_column);
    const Dataset data = load_csv(data_path, label);
    const Forest forest =
        train_forest(data, trees, common.seed, features_per_node, common.threads);
    write_json_file(output, forest_to_json(forest));

    const RuleSet ruleset = extract_rules(forest);
    std::cout << "trained " << forest.n_trees() << " trees on " << data.n_rows()
              << " rows (" << data.n_cols() << " features, " << data.n_classes()
              << " classes)\n"
              << "rules: " << ruleset.size() << "\n"
              << "training accuracy: " << forest_accuracy(forest, data) << "\n"
              << "forest written to " << output << "\n";
    return 0;
}

int cmd_select(const std::string& forest_path, const std::string& data_path,
               const std::string& output_prefix, const CommonOpts& common,
               const SelectionConfig& config) {
    const Forest forest = forest_from_json(read_json_file(forest_path));
    const Dataset data = load_aligned(data_path, common.label_column, forest.schema);
    const RuleSet ruleset = extract_rules(forest);
    const RuleSubset subset =
        select_rules(ruleset, data, coverage_matrix(ruleset, data, common.threads), config);

    write_json_file(output_prefix + ".json", subset_to_json(subset, config, ruleset));
    write_text_file(output_prefix + ".txt", rules_as_text(ruleset, subset));
    std::cout << "selected " << subset.size() << " of " << ruleset.size() << " rules ("
              << strategy_name(config.strategy) << ")\n"
              << "written to " << output_prefix << ".json and " << output_prefix << ".txt\n";
    return 0;
}

int cmd_evaluate(const std::string& forest_path, const std::string& subset_path,
                 const std::string& data_path, const CommonOpts& common,
                 const std::string& uncovered_mode, const std::string& output) {
    const Forest forest = forest_from_json(read_json_file(forest_path));
    const Dataset test = load_aligned(data_path, common.label_column, forest.schema);
    const RuleSet ruleset = extract_rules(forest);
    const auto [subset, config] = subset_from_json(read_json_file(subset_path), ruleset);

    const VotePredictor predictor = make_predictor(ruleset, subset);
    const double unc = uncovered_fraction(predictor, test);
    double acc = accuracy(predictor, test);
    if (uncovered_mode == "error") {
        // Count every uncovered instance as misclassified.
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test.n_rows(); ++i) {
            const auto [cls, covered] = predict_vote(predictor, test.row(i));
            if (covered && cls == test.label(i)) ++correct;
        }
        acc = static_cast<double>(correct) / static_cast<double>(test.n_rows());
    }

    std::cout << "accuracy: " << acc << "\n"
              << "uncovered_fraction: " << unc << "\n";
    if (!output.empty())
        write_json_file(output, nlohmann::json{{"format_version", kFormatVersion},
                                               {"kind", "evaluation"},
                                               {"accuracy", acc},
                                               {"uncovered_fraction", unc},
                                               {"n_rules", subset.size()},
                                               {"uncovered_mode", uncovered_mode}});
    return 0;
}

int cmd_experiment(const std::string& data_path, const std::string& output_prefix,
                   const CommonOpts& common, ExperimentConfig config,
                   const std::vector<std::string>& strategies,
                   const std::vector<std::string>& heuristics, double m, int stride) {
    const auto label = common.label_column.empty()
                           ? std::nullopt
                           : std::optional<std::string>(common.label_column);
    const Dataset data = load_csv(data_path, label);

    for (const std::string& s : strategies) {
        const Strategy strategy = strategy_from_name(s);
        if (strategy == Strategy::RandomTrees) {
            config.cells.push_back(CellSpec{strategy, std::nullopt});
            continue;
        }
        for (const std::string& h : heuristics)
            config.cells.push_back(CellSpec{strategy, heuristic_from_name(h, m)});
    }
    config.seed = common.seed;
    config.threads = common.threads;

    const ExperimentResult result = run_experiment(data, config);
    write_json_file(output_prefix + ".json", experiment_to_json(result));
    write_text_file(output_prefix + ".csv", experiment_to_csv(result, stride));
    std::cout << "folds: " << config.k_folds << ", trees: " << config.n_trees << ", cells: "
              << config.cells.size() << "\n"
              << "mean baseline accuracy: " << result.mean_baseline_accuracy << "\n"
              << "written to " << output_prefix << ".json and " << output_prefix << ".csv\n";
    return 0;
}

int cmd_synthesize(const std::string& output_prefix, const CommonOpts& common, int n_red,
                   int n_blue, double noise_sd, const std::string& strategy,
                   const std::string& heuristic, double m, int n_rules, int trees,
                   int grid_resolution) {
    const Dataset data = generate_synthetic(n_red, n_blue, noise_sd, common.seed);
    write_csv(data, output_prefix + ".csv");
    std::cout << "synthetic dataset: " << data.n_rows() << " rows written to "
              << output_prefix << ".csv\n";
    if (strategy.empty()) return 0;

    const Forest forest =
        train_forest(data, trees, mix_seed(common.seed, 1), 0, common.threads);
    const RuleSet ruleset = extract_rules(forest);

    SelectionConfig config;
    config.strategy = strategy_from_name(strategy);
    config.heuristic = heuristic_from_name(heuristic, m);
    config.n = n_rules;
    config.seed = mix_seed(common.seed, 2);
    const RuleSubset subset =
        select_rules(ruleset, data, coverage_matrix(ruleset, data, common.threads), config);

    const SyntheticDump dump = synthetic_rule_dump(ruleset, subset, grid_resolution);
    write_json_file(output_prefix + "_rules.json", synthetic_dump_to_json(dump, config));
    write_text_file(output_prefix + "_rules.txt", rules_as_text(ruleset, subset));
    std::cout << "selected " << subset.size() << " of " << ruleset.size() << " rules; grid "
              << "coverage " << dump.covered_fraction << "\n"
              << "written to " << output_prefix << "_rules.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random forest rule extraction and subset selection"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string data_path, forest_path, subset_path, output, output_prefix;
    int trees = 100;
    int features_per_node = 0;
    double m = kDefaultM;

    const auto add_common = [&](CLI::App* cmd, bool with_label = true) {
        cmd->add_option("--seed", common.seed, "Seed for every random stream");
        cmd->add_option("--threads", common.threads, "Worker cap (never changes results)");
        if (with_label)
            cmd->add_option("--label-column", common.label_column,
                            "Label column name (default: last column)");
    };

    auto* train = app.add_subcommand("train", "Train a random forest and save it as JSON");
    train->add_option("--data", data_path, "Training CSV")->required();
    train->add_option("--output", output, "Forest JSON path")->required();
    train->add_option("--trees", trees, "Number of trees", true);
    train->add_option("--features-per-node", features_per_node,
                      "Candidate features per node (0 = ceil(sqrt(columns)))", true);
    add_common(train);

    SelectionConfig sel;
    std::string strategy = "weighted-covering";
    std::string heuristic = "m-estimate";
    int n_rules = 20;
    auto* select = app.add_subcommand("select", "Select a rule subset from a saved forest");
    select->add_option("--forest", forest_path, "Forest JSON from `train`")->required();
    select->add_option("--data", data_path, "Training CSV the scores are computed on")
        ->required();
    select->add_option("--output-prefix", output_prefix, "Writes <prefix>.json and <prefix>.txt")
        ->required();
    select->add_option("--strategy", strategy, "best | weighted-covering | random-trees", true);
    select->add_option("--heuristic", heuristic, "precision | recall | m-estimate", true);
    select->add_option("--m", m, "m-estimate smoothing strength", true);
    select->add_option("--n", n_rules, "Subset size (cap for random-trees)", true);
    select->add_option("--min-weight", sel.min_weight,
                       "Weight floor for weighted covering", true);
    add_common(select);

    std::string uncovered_mode = "default-class";
    auto* evaluate =
        app.add_subcommand("evaluate", "Accuracy/uncovered of a saved subset on a test CSV");
    evaluate->add_option("--forest", forest_path, "Forest JSON")->required();
    evaluate->add_option("--subset", subset_path, "Subset JSON from `select`")->required();
    evaluate->add_option("--data", data_path, "Test CSV")->required();
    evaluate->add_option("--uncovered", uncovered_mode, "default-class | error", true)
        ->check(CLI::IsMember({"default-class", "error"}));
    evaluate->add_option("--output", output, "Optional metrics JSON path");
    add_common(evaluate);

    ExperimentConfig exp;
    std::vector<std::string> strategies{"best", "weighted-covering", "random-trees"};
    std::vector<std::string> heuristics{"precision", "recall", "m-estimate"};
    int stride = 1;
    auto* experiment =
        app.add_subcommand("experiment", "Cross-validated accuracy curves for rule subsets");
    experiment->add_option("--data", data_path, "Dataset CSV")->required();
    experiment->add_option("--output-prefix", output_prefix,
                           "Writes <prefix>.json and <prefix>.csv")
        ->required();
    experiment->add_option("--folds", exp.k_folds, "Cross-validation folds", true);
    experiment->add_option("--trees", exp.n_trees, "Trees per forest", true);
    experiment->add_option("--features-per-node", exp.n_candidate_features,
                           "Candidate features per node (0 = ceil(sqrt(columns)))", true);
    experiment->add_option("--n-max", exp.n_max, "Curve length (0 = all rules)", true);
    experiment->add_option("--strategy", strategies, "Strategies to evaluate (repeatable)")
        ->delimiter(',');
    experiment->add_option("--heuristic", heuristics, "Heuristics to evaluate (repeatable)")
        ->delimiter(',');
    experiment->add_option("--m", m, "m-estimate smoothing strength", true);
    experiment->add_option("--min-weight", exp.min_weight,
                           "Weight floor for weighted covering", true);
    experiment->add_option("--stride", stride, "Thin CSV curve rows to every k-th n", true);
    std::string exp_uncovered = "default-class";
    experiment->add_option("--uncovered", exp_uncovered, "default-class | error", true)
        ->check(CLI::IsMember({"default-class", "error"}));
    add_common(experiment);

    int n_red = 800, n_blue = 200, grid_resolution = 100, synth_rules = 30, synth_trees = 100;
    double noise_sd = 0.05;
    std::string synth_strategy, synth_heuristic = "m-estimate";
    auto* synthesize = app.add_subcommand(
        "synthesize", "Generate the two-class diagonal dataset; optionally select rules on it");
    synthesize->add_option("--output-prefix", output_prefix, "Writes <prefix>.csv")->required();
    synthesize->add_option("--n-red", n_red, "Instances around y = x - 0.2", true);
    synthesize->add_option("--n-blue", n_blue, "Instances around y = x + 0.2", true);
    synthesize->add_option("--noise-sd", noise_sd, "Perpendicular noise sd", true);
    synthesize->add_option("--strategy", synth_strategy,
                           "When set, also train/select and dump rule rectangles");
    synthesize->add_option("--heuristic", synth_heuristic, "precision | recall | m-estimate",
                           true);
    synthesize->add_option("--m", m, "m-estimate smoothing strength", true);
    synthesize->add_option("--n", synth_rules, "Subset size", true);
    synthesize->add_option("--trees", synth_trees, "Trees for the synthetic forest", true);
    synthesize->add_option("--grid", grid_resolution, "Net-vote grid resolution", true);
    add_common(synthesize, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(data_path, output, common, trees, features_per_node);
        if (select->parsed()) {
            sel.strategy = strategy_from_name(strategy);
            sel.heuristic = heuristic_from_name(heuristic, m);
            sel.n = n_rules;
            sel.seed = common.seed;
            return cmd_select(forest_path, data_path, output_prefix, common, sel);
        }
        if (evaluate->parsed())
            return cmd_evaluate(forest_path, subset_path, data_path, common, uncovered_mode,
                                output);
        if (experiment->parsed()) {
            exp.uncovered = exp_uncovered == "error" ? UncoveredMode::Error
                                                     : UncoveredMode::DefaultClass;
            return cmd_experiment(data_path, output_prefix, common, exp, strategies, heuristics,
                                  m, stride);
        }
        if (synthesize->parsed())
            return cmd_synthesize(output_prefix, common, n_red, n_blue, noise_sd, synth_strategy,
                                  synth_heuristic, m, synth_rules, synth_trees, grid_resolution);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
