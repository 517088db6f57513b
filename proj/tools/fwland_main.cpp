#include "fwland/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using fwland::Model;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitAnalysisFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCriterionFailed = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fwland::ModelFormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << doc.dump(2) << "\n";
  }
}

std::vector<double> parse_beta_list(const std::string& text) {
  std::vector<double> betas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    betas.push_back(std::stod(item));
    if (!(betas.back() > 0)) throw CLI::ValidationError("--beta entries must be positive");
  }
  if (betas.empty()) throw CLI::ValidationError("--beta needs at least one value");
  return betas;
}

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> labels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) labels.push_back(item);
  }
  return labels;
}

std::map<std::string, std::string> parse_caps(const std::vector<std::string>& kvs) {
  std::map<std::string, std::string> caps;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--caps entries must look like key=value");
    caps[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return caps;
}

int run_validate(const std::string& model_path) {
  Model model = fwland::parse_model(slurp(model_path));
  fwland::ValidationReport report = fwland::check_irreducible(model);
  json doc = fwland::make_report("validate", {{"model", model_path}}, model,
                                 fwland::validation_json(model, report));
  emit(doc, "");
  return report.irreducible ? kExitOk : kExitAnalysisFailure;
}

int run_analyze(const std::string& model_path, const std::string& out_path,
                const std::string& levels_text) {
  Model model = fwland::parse_model(slurp(model_path));
  fwland::Landscape land = fwland::analyze_landscape(model);
  fwland::CycleTree tree = fwland::cycle_tree(model, land);
  auto records = fwland::stability_levels(model, land);
  std::vector<fwland::Rat> levels;
  for (const auto& item : split_labels(levels_text))
    levels.push_back(fwland::parse_rational(item));
  fwland::MetaSets meta = fwland::meta_sets(records, land.energy, levels);
  json doc = fwland::make_report(
      "analyze", {{"model", model_path}, {"levels", levels_text}}, model,
      fwland::analysis_json(model, land, tree, records, meta));
  emit(doc, out_path);
  return kExitOk;
}

int run_gates(const std::string& model_path, const std::string& out_path,
              const std::string& pair_text, bool include_endpoints,
              const std::map<std::string, std::string>& caps) {
  auto labels = split_labels(pair_text);
  if (labels.size() != 2) throw CLI::ValidationError("--pair needs two labels: x,y");
  Model model = fwland::parse_model(slurp(model_path));
  int x = model.state(labels[0]);
  int y = model.state(labels[1]);
  if (x == y) throw CLI::ValidationError("--pair states must differ");

  fwland::GateOptions options;
  options.include_endpoints = include_endpoints;
  if (auto it = caps.find("paths"); it != caps.end())
    options.path_cap = std::stoull(it->second);
  if (auto it = caps.find("transversals"); it != caps.end())
    options.transversal_cap = std::stoull(it->second);

  fwland::Landscape land = fwland::analyze_landscape(model);
  fwland::CycleTree tree = fwland::cycle_tree(model, land);
  fwland::GateAnalysis analysis = fwland::gate_analysis(model, land, tree, x, y, options);
  json doc = fwland::make_report("gates",
                                 {{"model", model_path},
                                  {"pair", {labels[0], labels[1]}},
                                  {"include_endpoints", include_endpoints}},
                                 model, fwland::gates_json(model, analysis));
  emit(doc, out_path);
  return kExitOk;
}

struct SimulateArgs {
  std::string model_path, out_path, csv_path, experiment;
  std::string beta_text = "4";
  int replicas = 500;
  std::uint64_t seed = 1;
  std::string start, pair_text, gate_text, cycle_text;
  std::string level = "1", epsilon = "0.5", height = "1";
};

int run_simulate(const SimulateArgs& args) {
  Model model = fwland::parse_model(slurp(args.model_path));
  auto betas = parse_beta_list(args.beta_text);
  const double beta0 = betas.front();

  auto state_of = [&](const std::string& label) { return model.state(label); };
  auto pair_states = [&]() {
    auto labels = split_labels(args.pair_text);
    if (labels.size() != 2) throw CLI::ValidationError("--pair needs two labels: x,y");
    return std::pair<int, int>{state_of(labels[0]), state_of(labels[1])};
  };

  fwland::ExperimentReport rep;
  if (args.experiment == "escape-scaling") {
    if (args.start.empty()) throw CLI::ValidationError("escape-scaling needs --start");
    rep = fwland::experiment_escape_scaling(model, state_of(args.start), betas,
                                            args.replicas, args.seed,
                                            std::stod(args.epsilon));
  } else if (args.experiment == "exponential-law") {
    if (args.start.empty()) throw CLI::ValidationError("exponential-law needs --start");
    rep = fwland::experiment_exponential_law(model, state_of(args.start), beta0,
                                             args.replicas, args.seed);
  } else if (args.experiment == "gate-crossing") {
    auto [x, y] = pair_states();
    std::vector<int> gate;
    for (const auto& label : split_labels(args.gate_text)) gate.push_back(state_of(label));
    if (gate.empty()) throw CLI::ValidationError("gate-crossing needs --gate");
    rep = fwland::experiment_gate_crossing(model, x, y, gate, betas, args.replicas,
                                           args.seed);
  } else if (args.experiment == "tube-probability") {
    auto [x, y] = pair_states();
    rep = fwland::experiment_tube_probability(model, x, y, betas, args.replicas,
                                              args.seed);
  } else if (args.experiment == "recurrence") {
    rep = fwland::experiment_recurrence(model, fwland::parse_rational(args.level),
                                        std::stod(args.epsilon), betas, args.replicas,
                                        args.seed);
  } else if (args.experiment == "excursion") {
    if (args.start.empty()) throw CLI::ValidationError("excursion needs --start");
    rep = fwland::experiment_excursion(model, state_of(args.start),
                                       fwland::parse_rational(args.height),
                                       fwland::parse_rational(args.epsilon), beta0,
                                       args.replicas, args.seed);
  } else if (args.experiment == "exit-distribution") {
    if (args.start.empty()) throw CLI::ValidationError("exit-distribution needs --start");
    std::vector<int> members;
    for (const auto& label : split_labels(args.cycle_text))
      members.push_back(state_of(label));
    if (members.empty()) throw CLI::ValidationError("exit-distribution needs --cycle");
    rep = fwland::experiment_exit_distribution(model, members, state_of(args.start),
                                               betas, args.replicas, args.seed);
  } else {
    throw CLI::ValidationError("unknown experiment '" + args.experiment + "'");
  }

  json doc = fwland::make_report("simulate", rep.parameters, model,
                                 fwland::experiment_json(rep));
  emit(doc, args.out_path);
  if (!args.csv_path.empty()) {
    std::ofstream out(args.csv_path);
    if (!out) throw std::runtime_error("cannot write '" + args.csv_path + "'");
    out << fwland::csv_text(rep.csv);
  }
  if (rep.inconclusive) return kExitOk;
  return rep.pass ? kExitOk : kExitCriterionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-landscape analysis of Markov chains with rare transitions"};
  app.require_subcommand(1);

  std::string model_path, out_path, levels_text, pair_text;
  bool include_endpoints = false;
  std::vector<std::string> caps_kv;

  auto* validate = app.add_subcommand("validate", "parse a model and check irreducibility");
  validate->add_option("--model", model_path, "model file")->required();

  auto* analyze = app.add_subcommand("analyze", "full landscape analysis");
  analyze->add_option("--model", model_path, "model file")->required();
  analyze->add_option("--out", out_path, "report path (stdout when absent)");
  analyze->add_option("--levels", levels_text, "comma-separated levels a for X_a");

  auto* gates = app.add_subcommand("gates", "saddles, minimal gates, optimal paths");
  gates->add_option("--model", model_path, "model file")->required();
  gates->add_option("--out", out_path, "report path (stdout when absent)");
  gates->add_option("--pair", pair_text, "x,y")->required();
  gates->add_flag("--include-endpoints", include_endpoints,
                  "keep x and y in gate traces");
  gates->add_option("--caps", caps_kv, "caps as key=value (paths, transversals)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a named experiment");
  simulate->add_option("--model", sim.model_path, "model file")->required();
  simulate->add_option("--experiment", sim.experiment, "experiment name")->required();
  simulate->add_option("--out", sim.out_path, "report path (stdout when absent)");
  simulate->add_option("--csv", sim.csv_path, "CSV path for per-beta statistics");
  simulate->add_option("--beta", sim.beta_text, "comma-separated beta grid");
  simulate->add_option("--replicas", sim.replicas, "replica count");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--start", sim.start, "starting state label");
  simulate->add_option("--pair", sim.pair_text, "x,y for gate/tube experiments");
  simulate->add_option("--gate", sim.gate_text, "gate states (comma-separated)");
  simulate->add_option("--cycle", sim.cycle_text, "cycle members (comma-separated)");
  simulate->add_option("--level", sim.level, "level a for recurrence");
  simulate->add_option("--epsilon", sim.epsilon, "epsilon parameter");
  simulate->add_option("--height", sim.height, "excursion height h");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(model_path);
    if (analyze->parsed()) return run_analyze(model_path, out_path, levels_text);
    if (gates->parsed())
      return run_gates(model_path, out_path, pair_text, include_endpoints,
                       parse_caps(caps_kv));
    if (simulate->parsed()) return run_simulate(sim);
  } catch (const fwland::ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysisFailure;
  }
  return kExitUsage;
}
