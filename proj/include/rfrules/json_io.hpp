#pragma once

#include <string>

#include <json.hpp>

#include "rfrules/evaluation.hpp"
#include "rfrules/forest.hpp"
#include "rfrules/rules.hpp"
#include "rfrules/selection.hpp"

namespace rfrules {

/// All documents carry {"format_version": 1, "kind": "..."} and serialize
/// with sorted keys, so identical inputs produce identical bytes.
inline constexpr int kFormatVersion = 1;

nlohmann::json forest_to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& doc);

nlohmann::json ruleset_to_json(const RuleSet& ruleset);
RuleSet ruleset_from_json(const nlohmann::json& doc);

nlohmann::json subset_to_json(const RuleSubset& subset, const SelectionConfig& config,
                              const RuleSet& ruleset);
/// Returns the subset plus the selection config it was produced with;
/// validates the recorded rule count d against `ruleset`.
std::pair<RuleSubset, SelectionConfig> subset_from_json(const nlohmann::json& doc,
                                                        const RuleSet& ruleset);

nlohmann::json experiment_to_json(const ExperimentResult& result);

/// Long-format curve table: fold,strategy,heuristic,n,accuracy,uncovered.
/// Per-fold rows carry the fold index, aggregate rows the literal "mean";
/// the forest baseline appears as strategy "forest-baseline" with n = 0.
/// stride thins the per-curve rows but always keeps the last point.
std::string experiment_to_csv(const ExperimentResult& result, int stride = 1);

nlohmann::json synthetic_dump_to_json(const SyntheticDump& dump, const SelectionConfig& config);

void write_text_file(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace rfrules
