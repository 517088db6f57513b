#include "fwland/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <sstream>

namespace fwland {

using nlohmann::json;

namespace {

json sorted_labels(const Model& model, std::vector<int> states) {
  std::vector<std::string> labels;
  for (int s : states) labels.push_back(model.label(s));
  std::sort(labels.begin(), labels.end());
  return json(labels);
}

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json cycle_json(const Model& model, const CycleTree& tree, int node) {
  const Cycle& c = tree.nodes[node].cycle;
  json out;
  out["members"] = sorted_labels(model, c.members);
  out["bottom_energy"] = rational_to_string(c.bottom_energy);
  out["exit_level"] = c.exit_level.str();
  out["depth"] = c.depth.str();
  out["principal_boundary"] = sorted_labels(model, c.principal_boundary);
  json children = json::array();
  std::vector<int> kids = tree.nodes[node].children;
  std::sort(kids.begin(), kids.end(), [&](int a, int b) {
    return tree.nodes[a].cycle.members < tree.nodes[b].cycle.members;
  });
  for (int k : kids) children.push_back(cycle_json(model, tree, k));
  out["children"] = children;
  return out;
}

}  // namespace

json make_report(const std::string& command, const json& parameters,
                 const Model& model, json payload, bool with_timestamp) {
  json doc;
  doc["tool"] = "fwland";
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["parameters"] = parameters;
  doc["model_digest"] = model_digest(model);
  if (with_timestamp) doc["created_at"] = utc_now();
  doc["payload"] = std::move(payload);
  return doc;
}

json validation_json(const Model& model, const ValidationReport& report) {
  json out;
  out["irreducible"] = report.irreducible;
  json pairs = json::array();
  for (auto [x, y] : report.unreachable_pairs)
    pairs.push_back({model.label(x), model.label(y)});
  out["unreachable_pairs"] = pairs;
  out["warnings"] = report.warnings;
  out["states"] = model.labels();
  return out;
}

json analysis_json(const Model& model, const Landscape& land, const CycleTree& tree,
                   const std::vector<StabilityRecord>& records,
                   const MetaSets& meta) {
  json out;
  out["states"] = model.labels();
  json energy = json::object();
  for (int s = 0; s < model.size(); ++s)
    energy[model.label(s)] = rational_to_string(land.energy[s]);
  out["energy"] = energy;

  json heights = json::object();
  for (int x = 0; x < model.size(); ++x) {
    json row = json::object();
    for (int y = 0; y < model.size(); ++y)
      row[model.label(y)] = land.heights(x, y).str();
    heights[model.label(x)] = row;
  }
  out["heights"] = heights;
  out["cycle_tree"] = cycle_json(model, tree, tree.root);

  json stability = json::object();
  for (int s = 0; s < model.size(); ++s)
    stability[model.label(s)] = json{{"level", records[s].level.str()},
                                     {"below", sorted_labels(model, records[s].below_set)}};
  out["stability"] = stability;
  out["stable"] = sorted_labels(model, meta.stable);
  if (meta.degenerate) {
    out["v_max"] = nullptr;
    out["metastable"] = json::array();
    out["note"] = "every state is stable; V_max is undefined";
  } else {
    out["v_max"] = meta.vmax.str();
    out["metastable"] = sorted_labels(model, meta.metastable);
  }
  json levels = json::object();
  for (const auto& [a, xa] : meta.level_sets)
    levels[rational_to_string(a)] = sorted_labels(model, xa);
  out["level_sets"] = levels;
  return out;
}

json gates_json(const Model& model, const GateAnalysis& analysis) {
  json out;
  out["pair"] = {model.label(analysis.pair.first), model.label(analysis.pair.second)};
  out["enclosing_cycle"] = sorted_labels(model, analysis.enclosing.members);
  json decomposition = json::array();
  for (const Cycle& c : analysis.decomposition)
    decomposition.push_back(
        {{"members", sorted_labels(model, c.members)},
         {"principal_boundary", sorted_labels(model, c.principal_boundary)}});
  out["decomposition"] = decomposition;
  out["saddles"] = sorted_labels(model, analysis.saddle_set);
  json paths = json::array();
  for (const PathRecord& p : analysis.paths.paths) {
    json states = json::array();
    for (int s : p.states) states.push_back(model.label(s));
    paths.push_back({{"states", states}, {"elevation", p.elevation.str()}});
  }
  out["optimal_paths"] = paths;
  out["optimal_paths_truncated"] = analysis.paths.truncated;
  json gates = json::array();
  std::vector<json> gate_rows;
  for (const auto& gate : analysis.minimal_gates)
    gate_rows.push_back(sorted_labels(model, gate));
  std::sort(gate_rows.begin(), gate_rows.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  for (auto& g : gate_rows) gates.push_back(g);
  out["minimal_gates"] = gates;
  out["minimal_gates_truncated"] = analysis.gates_truncated;
  out["gate_union"] = sorted_labels(model, analysis.gate_union);
  out["notes"] = analysis.notes;
  return out;
}

json experiment_json(const ExperimentReport& report) {
  json out;
  out["experiment"] = report.name;
  out["parameters"] = report.parameters;
  out["results"] = report.results;
  out["pass"] = report.pass;
  if (report.inconclusive) out["inconclusive"] = true;
  out["notes"] = report.notes;
  return out;
}

std::string csv_text(const std::vector<std::array<std::string, 4>>& rows) {
  std::ostringstream out;
  out << "beta,statistic,value,stderr\n";
  for (const auto& row : rows)
    out << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << '\n';
  return out.str();
}

}  // namespace fwland
