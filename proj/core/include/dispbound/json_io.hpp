#pragma once

#include <string>
#include <vector>

#include "dispbound/convexity.hpp"
#include "dispbound/hyperbolic.hpp"
#include "dispbound/minimax.hpp"
#include "dispbound/relations.hpp"

#include <json.hpp>

namespace dispbound {

inline constexpr const char* kVersion = "0.1.0";

// Standard output envelope: {"meta": {...}, ...}. The timestamp is the only
// field allowed to differ between identical runs.
nlohmann::json run_metadata(const std::string& subcommand, const nlohmann::json& config_echo);

// Strips the volatile fields so byte comparison across runs is meaningful.
nlohmann::json without_timestamp(nlohmann::json doc);

nlohmann::json relation_to_json(const Relation& rel);
nlohmann::json census_to_json(const RelationCensus& census);
RelationCensus census_from_json(const nlohmann::json& doc);
std::string census_to_csv(const RelationCensus& census);

nlohmann::json result_to_json(const MinimaxResult& result);
nlohmann::json uniform_report_to_json(const UniformValueReport& report);
nlohmann::json pd_report_to_json(const PdScanReport& report);
nlohmann::json bound_report_to_json(const BoundReport& report);

// Family listing: one record per member with tag, numerator set, target and
// the value at x.
nlohmann::json family_values_to_json(const FunctionFamily& family, const SimplexPoint& x);
std::string family_values_to_csv(const FunctionFamily& family, const SimplexPoint& x);

// A golden relation record as transcribed into tables/*.json: words as
// strings, S as a list of word strings.
struct GoldenRelation {
  std::string gamma;
  std::string s;
  std::vector<std::string> S;
};

std::vector<GoldenRelation> load_golden_table(const std::string& path);

// Set comparison after word-string normalization; returns human-readable
// diff lines, empty when the records agree exactly.
std::vector<std::string> diff_against_golden(const std::vector<Relation>& relations,
                                             const SphereIndexing& indexing,
                                             const std::vector<GoldenRelation>& golden);

}  // namespace dispbound
