#include "dispbound/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace dispbound {

using nlohmann::json;

json run_metadata(const std::string& subcommand, const json& config_echo) {
  json meta;
  meta["version"] = kVersion;
  meta["subcommand"] = subcommand;
  meta["config"] = config_echo;
  meta["timestamp"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  return meta;
}

json without_timestamp(json doc) {
  if (doc.contains("meta") && doc["meta"].contains("timestamp")) doc["meta"].erase("timestamp");
  return doc;
}

json relation_to_json(const Relation& rel) {
  return json{{"gamma", word_to_string(rel.gamma)},
              {"s", word_to_string(rel.s_gamma)},
              {"S", rel.S},
              {"j", rel.product_length}};
}

json census_to_json(const RelationCensus& census) {
  json doc;
  doc["n"] = census.rank;
  doc["k"] = census.radius;
  doc["total"] = census.total();
  json by_j = json::object();
  for (const auto& [j, count] : census.count_by_product_length) by_j[std::to_string(j)] = count;
  doc["count_by_product_length"] = by_j;
  doc["relations"] = json::array();
  for (const Relation& rel : census.relations) doc["relations"].push_back(relation_to_json(rel));
  return doc;
}

RelationCensus census_from_json(const nlohmann::json& doc) {
  RelationCensus census;
  census.rank = doc.at("n").get<int>();
  census.radius = doc.at("k").get<int>();
  for (const auto& rec : doc.at("relations")) {
    Relation rel;
    rel.gamma = word_from_string(census.rank, rec.at("gamma").get<std::string>());
    rel.s_gamma = word_from_string(census.rank, rec.at("s").get<std::string>());
    rel.S = rec.at("S").get<std::vector<int>>();
    rel.product_length = rec.at("j").get<int>();
    ++census.count_by_product_length[rel.product_length];
    census.relations.push_back(std::move(rel));
  }
  return census;
}

std::string census_to_csv(const RelationCensus& census) {
  std::ostringstream out;
  out << "gamma,s,j,S\n";
  for (const Relation& rel : census.relations) {
    out << word_to_string(rel.gamma) << ',' << word_to_string(rel.s_gamma) << ','
        << rel.product_length << ',';
    for (std::size_t i = 0; i < rel.S.size(); ++i) out << (i ? " " : "") << rel.S[i];
    out << '\n';
  }
  return out.str();
}

json result_to_json(const MinimaxResult& result) {
  return json{{"alpha_star", result.alpha_star},
              {"x_star", result.x_star},
              {"iterations", result.iterations},
              {"restarts", result.restarts},
              {"best_restart", result.best_restart},
              {"tie_set", result.tie_set},
              {"converged", result.converged},
              {"residuals",
               {{"max_deviation_from_uniform", result.max_deviation_from_uniform},
                {"relative_gap_to_closed_form", result.relative_gap_to_closed_form},
                {"kkt_projected_norm", result.kkt_residual}}},
              {"stage_best", result.stage_best}};
}

json uniform_report_to_json(const UniformValueReport& report) {
  json strata = json::array();
  for (const auto& [m, vs] : report.g_strata)
    strata.push_back({{"product_length", m}, {"value", vs.first}, {"relative_spread", vs.second}});
  return json{{"alpha", report.alpha},
              {"closed_form", report.closed_form},
              {"max_F_relative_spread", report.max_F_relative_spread},
              {"F_matches_closed_form", report.F_matches_closed_form},
              {"g_strata", strata},
              {"g_dominated", report.g_dominated}};
}

json pd_report_to_json(const PdScanReport& report) {
  return json{{"region", report.region == RegionKind::Cf ? "cf" : "cg"},
              {"seed", report.seed},
              {"samples_inside", report.samples_inside},
              {"pd_inside", report.pd_inside},
              {"indeterminate_inside", report.indeterminate_inside},
              {"min_minor_inside", report.min_minor_inside},
              {"samples_outside", report.samples_outside},
              {"pd_failures_outside", report.pd_failures_outside},
              {"all_pd_inside", report.all_pd_inside()}};
}

json bound_report_to_json(const BoundReport& report) {
  return json{{"k", report.radius},
              {"max_displacement", report.max_displacement},
              {"bound", report.bound},
              {"margin", report.margin},
              {"argmax_word", report.argmax_word},
              {"hypothesis_certified", report.hypothesis_certified}};
}

json family_values_to_json(const FunctionFamily& family, const SimplexPoint& x) {
  json arr = json::array();
  for (const auto& f : family.G)
    arr.push_back({{"tag", tag_string(f)},
                   {"A", f.A},
                   {"t", f.t},
                   {"value", eval_function(f, x)}});
  return arr;
}

std::string family_values_to_csv(const FunctionFamily& family, const SimplexPoint& x) {
  std::ostringstream out;
  out << "tag,t,value,A\n";
  for (const auto& f : family.G) {
    out << tag_string(f) << ',' << f.t << ',' << json(eval_function(f, x)).dump() << ',';
    for (std::size_t i = 0; i < f.A.size(); ++i) out << (i ? " " : "") << f.A[i];
    out << '\n';
  }
  return out.str();
}

std::vector<GoldenRelation> load_golden_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden table " + path);
  json doc = json::parse(in);
  std::vector<GoldenRelation> out;
  for (const auto& rec : doc) {
    GoldenRelation g;
    g.gamma = rec.at("gamma").get<std::string>();
    g.s = rec.at("s").get<std::string>();
    for (const auto& w : rec.at("S")) g.S.push_back(w.get<std::string>());
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::string> diff_against_golden(const std::vector<Relation>& relations,
                                             const SphereIndexing& indexing,
                                             const std::vector<GoldenRelation>& golden) {
  auto normalize = [&](const std::string& gamma, const std::string& s,
                       std::vector<std::string> S) {
    std::sort(S.begin(), S.end());
    std::string key = gamma + "|" + s + "|";
    for (const auto& w : S) key += w + " ";
    return key;
  };

  std::set<std::string> ours;
  for (const Relation& rel : relations) {
    std::vector<std::string> S;
    S.reserve(rel.S.size());
    for (int idx : rel.S) S.push_back(word_to_string(indexing.word_at(idx)));
    ours.insert(normalize(word_to_string(rel.gamma), word_to_string(rel.s_gamma), std::move(S)));
  }
  std::set<std::string> theirs;
  for (const GoldenRelation& g : golden) {
    // Words in the table files are re-parsed so formatting differences
    // cannot produce spurious diffs.
    std::vector<std::string> S;
    S.reserve(g.S.size());
    for (const auto& w : g.S)
      S.push_back(word_to_string(word_from_string(indexing.rank(), w)));
    theirs.insert(normalize(word_to_string(word_from_string(indexing.rank(), g.gamma)),
                            word_to_string(word_from_string(indexing.rank(), g.s)), std::move(S)));
  }

  std::vector<std::string> diffs;
  for (const auto& k : ours)
    if (!theirs.count(k)) diffs.push_back("enumerated but not in table: " + k);
  for (const auto& k : theirs)
    if (!ours.count(k)) diffs.push_back("in table but not enumerated: " + k);
  return diffs;
}

}  // namespace dispbound
