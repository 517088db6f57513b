#include "fwland/experiments.hpp"

#include "fwland/solve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace fwland {

using nlohmann::json;

std::string number_string(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::uint64_t default_step_cap(double beta, double vmax) {
  double cap = std::ceil(100.0 * std::exp(beta * (vmax + 1.0)));
  if (!(cap >= 1)) cap = 1;
  if (cap > 1e9) cap = 1e9;
  return static_cast<std::uint64_t>(cap);
}

namespace {

struct SeedBook {
  std::uint64_t master;
  int replicas;
  std::uint64_t counter = 0;
  json per_beta = json::array();

  std::vector<std::uint64_t> draw_block() {
    std::vector<std::uint64_t> seeds(replicas);
    json block = json::array();
    for (int r = 0; r < replicas; ++r) {
      seeds[r] = replica_seed(master, counter++);
      block.push_back(seeds[r]);
    }
    per_beta.push_back(std::move(block));
    return seeds;
  }
};

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double m = mean_of(v), ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(v.size()) - 1) /
                   static_cast<double>(v.size()));
}

double binom_se(double p, int n) {
  return std::sqrt(std::max(p * (1 - p), 0.0) / std::max(n, 1));
}

json wilson_interval(int hits, int n, double z) {
  double phat = n > 0 ? static_cast<double>(hits) / n : 0;
  double z2 = z * z;
  double denom = 1 + z2 / n;
  double center = (phat + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return json{{"low", std::max(0.0, center - half)},
              {"high", std::min(1.0, center + half)}};
}

void add_csv(ExperimentReport& rep, double beta, const std::string& stat, double value,
             double se) {
  rep.csv.push_back({number_string(beta), stat, number_string(value),
                     number_string(se)});
}

// Agreement of a simulated frequency with an exact probability: three
// standard errors plus a two-count Poisson slack.
bool freq_consistent(double freq, double exact, int n) {
  return std::abs(freq - exact) <= 3 * binom_se(exact, n) + 2.0 / std::max(n, 1);
}

std::vector<bool> index_mask(int n, const std::vector<int>& states) {
  std::vector<bool> mask(n, false);
  for (int s : states) mask.at(s) = true;
  return mask;
}

}  // namespace

ExperimentReport experiment_escape_scaling(const Model& model, int x_start,
                                           const std::vector<double>& betas,
                                           int replicas, std::uint64_t master_seed,
                                           double epsilon,
                                           std::optional<std::uint64_t> step_cap) {
  if (betas.empty()) throw std::invalid_argument("escape_scaling: empty beta grid");
  Landscape land = analyze_landscape(model);
  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();
  auto target_mask = index_mask(model.size(), meta.stable);

  ExperimentReport rep;
  rep.name = "escape-scaling";
  SeedBook seeds{master_seed, replicas};
  rep.results["per_beta"] = json::array();

  std::vector<double> log_sim, log_solve, used_betas;
  for (double beta : betas) {
    const std::uint64_t cap = step_cap ? *step_cap : default_step_cap(beta, vmax);
    auto p = transition_matrix_hp(model, beta);
    std::vector<bool> target(model.size());
    for (int i = 0; i < model.size(); ++i) target[i] = target_mask[i];
    Real solve_value = expected_hitting_hp(p, target)[x_start];

    TransitionMatrix tm = transition_matrix(model, beta);
    auto block = seeds.draw_block();
    std::vector<double> samples;
    int timeouts = 0, early = 0, late = 0;
    const double early_edge = std::exp(beta * (vmax - epsilon));
    const double late_edge = std::exp(beta * (vmax + epsilon));
    for (int r = 0; r < replicas; ++r) {
      ChainSampler sampler(tm, block[r]);
      HittingSample s = sampler.hit(x_start, target_mask, cap);
      if (s.timed_out) {
        ++timeouts;
        continue;
      }
      samples.push_back(static_cast<double>(s.steps));
      if (static_cast<double>(s.steps) < early_edge) ++early;
      if (static_cast<double>(s.steps) > late_edge) ++late;
    }
    double m = mean_of(samples), se = stderr_of(samples);
    double solve_d = static_cast<double>(solve_value);
    json row{{"beta", beta},
             {"step_cap", cap},
             {"mean_steps_sim", m},
             {"stderr", se},
             {"mean_steps_solve", solve_d},
             {"timeouts", timeouts},
             {"p_early", static_cast<double>(early) / replicas},
             {"p_late", static_cast<double>(late) / replicas}};
    bool agree = timeouts == 0 && std::abs(m - solve_d) <= 3 * se + 1e-9;
    row["sim_solve_agree"] = agree;
    if (!agree) rep.pass = false;
    rep.results["per_beta"].push_back(row);
    add_csv(rep, beta, "mean_steps_sim", m, se);
    add_csv(rep, beta, "mean_steps_solve", solve_d, 0);
    add_csv(rep, beta, "p_early", static_cast<double>(early) / replicas, 0);
    add_csv(rep, beta, "p_late", static_cast<double>(late) / replicas, 0);
    if (timeouts > 0) rep.notes.push_back("timeouts at beta " + number_string(beta));
    if (solve_d > 0 && m > 0) {
      log_solve.push_back(std::log(solve_d));
      log_sim.push_back(std::log(m));
      used_betas.push_back(beta);
    }
  }
  if (used_betas.size() >= 2) {
    rep.results["slope_solve"] = ols_slope(used_betas, log_solve);
    rep.results["slope_sim"] = ols_slope(used_betas, log_sim);
  }
  rep.results["v_max"] = meta.degenerate ? json() : json(meta.vmax.str());
  rep.parameters = {{"experiment", rep.name},
                    {"start", model.label(x_start)},
                    {"betas", betas},
                    {"replicas", replicas},
                    {"epsilon", epsilon},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_exponential_law(const Model& model, int x0, double beta,
                                            int replicas, std::uint64_t master_seed,
                                            double ks_threshold, double ratio_lo,
                                            double ratio_hi) {
  Landscape land = analyze_landscape(model);
  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();
  auto target_mask = index_mask(model.size(), meta.stable);
  const std::uint64_t cap = default_step_cap(beta, vmax);

  ExperimentReport rep;
  rep.name = "exponential-law";
  SeedBook seeds{master_seed, replicas};
  auto block = seeds.draw_block();

  TransitionMatrix tm = transition_matrix(model, beta);
  std::vector<double> taus;
  int timeouts = 0;
  for (int r = 0; r < replicas; ++r) {
    ChainSampler sampler(tm, block[r]);
    HittingSample s = sampler.hit(x0, target_mask, cap);
    if (s.timed_out)
      ++timeouts;
    else
      taus.push_back(static_cast<double>(s.steps));
  }
  if (taus.empty()) throw std::runtime_error("exponential_law: every replica timed out");

  std::sort(taus.begin(), taus.end());
  const double n = static_cast<double>(taus.size());
  const double mean = mean_of(taus);
  if (mean == 0)
    throw std::invalid_argument("exponential_law: start is already a stable state");
  double ks = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    double f = 1.0 - std::exp(-taus[i] / mean);
    double below = f - static_cast<double>(i) / n;
    double above = (static_cast<double>(i) + 1.0) / n - f;
    ks = std::max(ks, std::max(below, above));
  }

  // Empirical (1 - 1/e) quantile.
  const double q = 1.0 - std::exp(-1.0);
  std::size_t idx = static_cast<std::size_t>(std::ceil(q * n)) - 1;
  idx = std::min(idx, taus.size() - 1);
  const double t_beta = taus[idx];
  const double ratio = mean / t_beta;

  rep.results = {{"beta", beta},          {"mean_steps", mean},
                 {"ks_distance", ks},     {"t_beta", t_beta},
                 {"mean_over_t", ratio},  {"timeouts", timeouts},
                 {"ks_threshold", ks_threshold}};
  add_csv(rep, beta, "ks_distance", ks, 0);
  add_csv(rep, beta, "mean_steps", mean, stderr_of(taus));
  add_csv(rep, beta, "mean_over_t", ratio, 0);

  if (replicas < 100) {
    rep.inconclusive = true;
    rep.notes.push_back("sample size too small for a distribution test; inconclusive");
  } else {
    rep.pass = ks <= ks_threshold && ratio >= ratio_lo && ratio <= ratio_hi &&
               timeouts == 0;
  }
  rep.parameters = {{"experiment", rep.name},   {"start", model.label(x0)},
                    {"beta", beta},             {"replicas", replicas},
                    {"master_seed", master_seed}, {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_gate_crossing(const Model& model, int x, int y,
                                          const std::vector<int>& gate,
                                          const std::vector<double>& betas,
                                          int replicas, std::uint64_t master_seed,
                                          double miss_threshold) {
  if (x == y) throw std::invalid_argument("gate_crossing: x and y must differ");
  if (gate.empty()) throw std::invalid_argument("gate_crossing: empty gate");
  Landscape land = analyze_landscape(model);
  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();

  auto gate_mask = index_mask(model.size(), gate);
  std::vector<int> absorb = gate;
  if (!gate_mask[y]) absorb.push_back(y);
  auto absorb_mask = index_mask(model.size(), absorb);

  ExperimentReport rep;
  rep.name = "gate-crossing";
  SeedBook seeds{master_seed, replicas};
  rep.results["per_beta"] = json::array();

  double prev_exact = 1.0;
  double last_freq = 0.0;
  bool monotone = true, consistent = true;
  for (double beta : betas) {
    double exact = 0.0;
    if (!gate_mask[y] && !gate_mask[x]) {
      auto p = transition_matrix_hp(model, beta);
      std::vector<bool> target(absorb_mask.begin(), absorb_mask.end());
      auto probs = absorption_probabilities_hp(p, target);
      exact = static_cast<double>(probs[x][y]);
    }
    const std::uint64_t cap = default_step_cap(beta, vmax);
    TransitionMatrix tm = transition_matrix(model, beta);
    auto block = seeds.draw_block();
    int miss = 0, timeouts = 0;
    for (int r = 0; r < replicas; ++r) {
      if (gate_mask[x]) break;  // gate already hit at the start
      ChainSampler sampler(tm, block[r]);
      HittingSample s = sampler.hit(x, absorb_mask, cap);
      if (s.timed_out)
        ++timeouts;
      else if (s.exit_state == y && !gate_mask[y])
        ++miss;
    }
    double freq = static_cast<double>(miss) / replicas;
    last_freq = freq;
    bool row_ok = freq_consistent(freq, exact, replicas);
    consistent = consistent && row_ok && timeouts == 0;
    monotone = monotone && exact <= prev_exact + 1e-15;
    prev_exact = exact;
    json row{{"beta", beta},
             {"p_y_before_gate_exact", exact},
             {"p_y_before_gate_sim", freq},
             {"wilson", wilson_interval(miss, replicas, 3.0)},
             {"timeouts", timeouts},
             {"consistent", row_ok}};
    rep.results["per_beta"].push_back(row);
    add_csv(rep, beta, "p_y_before_gate_sim", freq, binom_se(freq, replicas));
    add_csv(rep, beta, "p_y_before_gate_exact", exact, 0);
  }
  rep.pass = consistent && monotone && last_freq <= miss_threshold;
  rep.results["exact_probabilities_decay"] = monotone;
  rep.parameters = {{"experiment", rep.name},
                    {"x", model.label(x)},
                    {"y", model.label(y)},
                    {"gate", [&] {
                       json g = json::array();
                       for (int w : gate) g.push_back(model.label(w));
                       return g;
                     }()},
                    {"betas", betas},
                    {"replicas", replicas},
                    {"miss_threshold", miss_threshold},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_tube_probability(const Model& model, int x, int y,
                                             const std::vector<double>& betas,
                                             int replicas, std::uint64_t master_seed,
                                             double nonmember_threshold) {
  if (x == y) throw std::invalid_argument("tube_probability: x and y must differ");
  Landscape land = analyze_landscape(model);
  CycleTree tree = cycle_tree(model, land);
  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();
  std::vector<bool> target(model.size(), false);
  target[y] = true;

  ExperimentReport rep;
  rep.name = "tube-probability";
  SeedBook seeds{master_seed, replicas};
  rep.results["per_beta"] = json::array();

  double prev = 1.0;
  bool shrinking = true;
  double last = 0.0;
  for (double beta : betas) {
    const std::uint64_t cap = default_step_cap(beta, vmax);
    TransitionMatrix tm = transition_matrix(model, beta);
    auto block = seeds.draw_block();
    int nonmember = 0, timeouts = 0, completed = 0;
    std::map<int, int> clause_counts;
    for (int r = 0; r < replicas; ++r) {
      ChainSampler sampler(tm, block[r]);
      std::vector<int> jumps{x};
      HittingSample s = sampler.hit_visit(x, target, cap,
                                          [&](int, int to, std::uint64_t) {
                                            jumps.push_back(to);
                                            return true;
                                          });
      if (s.timed_out) {
        ++timeouts;
        continue;
      }
      ++completed;
      TubeVerdict v = tube_membership(model, land, tree, jumps, x, y);
      if (!v.member) {
        ++nonmember;
        ++clause_counts[v.violated_clause];
      }
    }
    double frac = completed > 0 ? static_cast<double>(nonmember) / completed : 0.0;
    double se = binom_se(frac, completed);
    shrinking = shrinking && frac <= prev + 3 * se + 1e-12;
    prev = frac;
    last = frac;
    json row{{"beta", beta},
             {"nonmember_fraction", frac},
             {"completed", completed},
             {"timeouts", timeouts}};
    json clauses = json::object();
    for (auto [clause, count] : clause_counts)
      clauses[std::to_string(clause)] = count;
    row["violations_by_clause"] = clauses;
    rep.results["per_beta"].push_back(row);
    add_csv(rep, beta, "nonmember_fraction", frac, se);
    if (timeouts > 0) rep.notes.push_back("timeouts at beta " + number_string(beta));
  }
  rep.pass = shrinking && last <= nonmember_threshold;
  rep.parameters = {{"experiment", rep.name},
                    {"x", model.label(x)},
                    {"y", model.label(y)},
                    {"betas", betas},
                    {"replicas", replicas},
                    {"nonmember_threshold", nonmember_threshold},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_recurrence(const Model& model, const Rat& level_a,
                                       double epsilon,
                                       const std::vector<double>& betas, int replicas,
                                       std::uint64_t master_seed,
                                       double exceed_threshold) {
  Landscape land = analyze_landscape(model);
  auto records = stability_levels(model, land);
  std::vector<int> xa;
  for (int s = 0; s < model.size(); ++s)
    if (records[s].level > Rate(level_a)) xa.push_back(s);
  if (xa.empty()) throw std::runtime_error("recurrence: X_a is empty");
  auto xa_mask = index_mask(model.size(), xa);
  const double a_d = Rate(level_a).to_double();

  ExperimentReport rep;
  rep.name = "recurrence";
  SeedBook seeds{master_seed, replicas};
  rep.results["per_beta"] = json::array();
  json xa_labels = json::array();
  for (int s : xa) xa_labels.push_back(model.label(s));
  rep.results["level_set"] = xa_labels;

  for (double beta : betas) {
    double horizon = std::floor(std::exp(beta * (a_d + epsilon)));
    std::uint64_t cap = horizon < 1 ? 1 : static_cast<std::uint64_t>(horizon);
    TransitionMatrix tm = transition_matrix(model, beta);
    double worst = 0;
    json per_start = json::array();
    for (int start = 0; start < model.size(); ++start) {
      auto block = seeds.draw_block();
      int exceed = 0;
      for (int r = 0; r < replicas; ++r) {
        ChainSampler sampler(tm, block[r]);
        HittingSample s = sampler.hit(start, xa_mask, cap);
        if (s.timed_out) ++exceed;
      }
      double freq = static_cast<double>(exceed) / replicas;
      worst = std::max(worst, freq);
      per_start.push_back({{"start", model.label(start)}, {"exceed_freq", freq}});
    }
    json row{{"beta", beta},
             {"horizon_steps", cap},
             {"per_start", per_start},
             {"max_exceed_freq", worst}};
    rep.results["per_beta"].push_back(row);
    add_csv(rep, beta, "max_exceed_freq", worst, 0);
    if (worst > exceed_threshold) rep.pass = false;
  }
  rep.parameters = {{"experiment", rep.name},
                    {"level", rational_to_string(level_a)},
                    {"epsilon", epsilon},
                    {"betas", betas},
                    {"replicas", replicas},
                    {"exceed_threshold", exceed_threshold},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_excursion(const Model& model, int x, const Rat& height,
                                      const Rat& epsilon, double beta, int replicas,
                                      std::uint64_t master_seed) {
  if (!(epsilon > 0) || !(Rat(0) < height))
    throw std::invalid_argument("excursion: height and epsilon must be positive");
  if (!(epsilon < height))
    throw std::invalid_argument("excursion: epsilon must be below the height");
  Landscape land = analyze_landscape(model);
  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();
  const double h_d = Rate(height).to_double();
  const double eps_d = Rate(epsilon).to_double();

  const Rate threshold1 = Rate(land.energy[x] + height);
  double window = std::floor(std::exp(beta * (h_d - eps_d)));
  if (window < 1) window = 1;
  bool clamped = window > 1e9;
  const std::uint64_t bound1 =
      clamped ? 1000000000ull : static_cast<std::uint64_t>(window);

  // Bottom-of-cycle variant: the largest proper cycle whose bottom holds x.
  CycleTree tree = cycle_tree(model, land);
  int node = tree.find(std::vector<int>{x});
  while (tree.nodes[node].parent != -1 && tree.nodes[node].parent != tree.root) {
    const Cycle& up = tree.nodes[tree.nodes[node].parent].cycle;
    if (land.energy[x] != up.bottom_energy) break;
    node = tree.nodes[node].parent;
  }
  const Cycle& cyc = tree.nodes[node].cycle;
  const Rate threshold2 = cyc.exit_level + Rate(epsilon);
  std::vector<bool> outside(model.size(), true);
  for (int s : cyc.members) outside[s] = false;

  ExperimentReport rep;
  rep.name = "excursion";
  SeedBook seeds{master_seed, replicas};
  if (clamped)
    rep.notes.push_back("observation window clamped to 1e9 steps");

  TransitionMatrix tm = transition_matrix(model, beta);
  auto block1 = seeds.draw_block();
  int reached = 0;
  std::vector<bool> no_target(model.size(), false);
  for (int r = 0; r < replicas; ++r) {
    ChainSampler sampler(tm, block1[r]);
    bool event = false;
    sampler.hit_visit(x, no_target, bound1, [&](int from, int to, std::uint64_t) {
      Rate elev = Rate(land.energy[from]) + model.delta(from, to);
      if (threshold1 <= elev) {
        event = true;
        return false;
      }
      return true;
    });
    if (event) ++reached;
  }
  double freq1 = static_cast<double>(reached) / replicas;

  // A high step seen before the cap already decides the event; capped runs
  // without one are censored (the pre-exit tail went unobserved).
  const std::uint64_t cap2 = default_step_cap(beta, vmax);
  auto block2 = seeds.draw_block();
  int high_exit = 0, censored = 0;
  for (int r = 0; r < replicas; ++r) {
    ChainSampler sampler(tm, block2[r]);
    bool event = false;
    HittingSample s =
        sampler.hit_visit(x, outside, cap2, [&](int from, int to, std::uint64_t) {
          Rate elev = Rate(land.energy[from]) + model.delta(from, to);
          if (threshold2 < elev) event = true;
          return true;
        });
    if (event)
      ++high_exit;
    else if (s.timed_out)
      ++censored;
  }
  const int observed = replicas - censored;
  double freq2 = observed > 0 ? static_cast<double>(high_exit) / observed : 0.0;
  if (censored > 0)
    rep.notes.push_back("exit not reached within the step cap in " +
                        std::to_string(censored) + " replicas (censored)");

  const double bound_freq1 = 4.0 * std::exp(-beta * eps_d / 2.0);
  const double bound_freq2 = std::exp(-beta * eps_d / 4.0);
  rep.results = {{"beta", beta},
                 {"window_steps", bound1},
                 {"early_reach_freq", freq1},
                 {"early_reach_bound", bound_freq1},
                 {"cycle", [&] {
                    json m = json::array();
                    for (int s : cyc.members) m.push_back(model.label(s));
                    return m;
                  }()},
                 {"exit_excursion_freq", freq2},
                 {"exit_excursion_bound", bound_freq2},
                 {"censored", censored}};
  add_csv(rep, beta, "early_reach_freq", freq1, binom_se(freq1, replicas));
  add_csv(rep, beta, "exit_excursion_freq", freq2, binom_se(freq2, observed));
  rep.pass = freq1 <= bound_freq1 + 3 * binom_se(bound_freq1, replicas) &&
             freq2 <= bound_freq2 + 3 * binom_se(bound_freq2, observed) &&
             censored * 2 < replicas;
  rep.parameters = {{"experiment", rep.name},
                    {"start", model.label(x)},
                    {"height", rational_to_string(height)},
                    {"epsilon", rational_to_string(epsilon)},
                    {"beta", beta},
                    {"replicas", replicas},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

ExperimentReport experiment_exit_distribution(const Model& model,
                                              const std::vector<int>& cycle_members,
                                              int x, const std::vector<double>& betas,
                                              int replicas,
                                              std::uint64_t master_seed) {
  Landscape land = analyze_landscape(model);
  Cycle cyc = make_cycle(model, land, cycle_members);
  if (!std::binary_search(cyc.members.begin(), cyc.members.end(), x))
    throw std::invalid_argument("exit_distribution: x not in the cycle");
  if (static_cast<int>(cyc.members.size()) == model.size())
    throw std::invalid_argument("exit_distribution: the full space has no exterior");

  int x2 = -1;
  for (int s : cyc.members)
    if (s != x) {
      x2 = s;
      break;
    }

  std::vector<bool> outside(model.size(), true);
  for (int s : cyc.members) outside[s] = false;

  auto records = stability_levels(model, land);
  MetaSets meta = meta_sets(records, land.energy, {});
  const double vmax = meta.degenerate ? 0.0 : meta.vmax.to_double();

  ExperimentReport rep;
  rep.name = "exit-distribution";
  SeedBook seeds{master_seed, replicas};
  rep.results["per_beta"] = json::array();
  json costs = json::object();
  for (const auto& [y, cost] : cyc.exit_costs) costs[model.label(y)] = cost.str();
  rep.results["exit_costs"] = costs;

  std::map<int, std::vector<double>> exact_logs;
  std::vector<double> used_betas;
  bool ok = true;
  for (double beta : betas) {
    auto p = transition_matrix_hp(model, beta);
    std::vector<bool> target(outside.begin(), outside.end());
    auto probs = absorption_probabilities_hp(p, target);

    const std::uint64_t cap = default_step_cap(beta, vmax);
    TransitionMatrix tm = transition_matrix(model, beta);
    json starts_row = json::array();
    std::map<int, double> freq_by_start[2];
    int starts[2] = {x, x2};
    for (int si = 0; si < (x2 == -1 ? 1 : 2); ++si) {
      auto block = seeds.draw_block();
      std::map<int, int> counts;
      int timeouts = 0;
      for (int r = 0; r < replicas; ++r) {
        ChainSampler sampler(tm, block[r]);
        HittingSample s = sampler.hit(starts[si], outside, cap);
        if (s.timed_out)
          ++timeouts;
        else
          ++counts[s.exit_state];
      }
      json dist = json::object();
      for (auto [state, count] : counts) {
        double freq = static_cast<double>(count) / replicas;
        freq_by_start[si][state] = freq;
        double exact = static_cast<double>(probs[starts[si]][state]);
        bool row_ok = freq_consistent(freq, exact, replicas);
        ok = ok && row_ok && timeouts == 0;
        json entry{{"freq", freq}, {"exact", exact}, {"consistent", row_ok}};
        if (freq > 0) entry["log_freq_exponent"] = -std::log(freq) / beta;
        dist[model.label(state)] = entry;
        add_csv(rep, beta, "exit_freq_" + model.label(state) + "_from_" +
                              model.label(starts[si]),
                freq, binom_se(freq, replicas));
      }
      starts_row.push_back({{"start", model.label(starts[si])},
                            {"distribution", dist},
                            {"timeouts", timeouts}});
    }
    // Start independence within sampling error.
    if (x2 != -1) {
      std::set<int> keys;
      for (auto& m : freq_by_start)
        for (auto& [state, f] : m) keys.insert(state);
      for (int state : keys) {
        double f1 = freq_by_start[0].count(state) ? freq_by_start[0][state] : 0;
        double f2 = freq_by_start[1].count(state) ? freq_by_start[1][state] : 0;
        double pooled = (f1 + f2) / 2;
        if (std::abs(f1 - f2) > 3 * binom_se(pooled, replicas) * 1.4142 + 2.0 / replicas)
          ok = false;
      }
    }
    for (int ystate = 0; ystate < model.size(); ++ystate)
      if (outside[ystate] && probs[x][ystate] > 0)
        exact_logs[ystate].push_back(-static_cast<double>(log(probs[x][ystate])));
    used_betas.push_back(beta);
    rep.results["per_beta"].push_back(
        {{"beta", beta}, {"starts", starts_row}});
  }
  if (used_betas.size() >= 2) {
    json fits = json::object();
    for (auto& [ystate, logs] : exact_logs)
      if (logs.size() == used_betas.size())
        fits[model.label(ystate)] = ols_slope(used_betas, logs);
    rep.results["exact_exponent_fits"] = fits;
  }
  rep.pass = ok;
  rep.parameters = {{"experiment", rep.name},
                    {"cycle", [&] {
                       json m = json::array();
                       for (int s : cyc.members) m.push_back(model.label(s));
                       return m;
                     }()},
                    {"x", model.label(x)},
                    {"second_start", x2 == -1 ? json() : json(model.label(x2))},
                    {"betas", betas},
                    {"replicas", replicas},
                    {"master_seed", master_seed},
                    {"replica_seeds", seeds.per_beta}};
  return rep;
}

}  // namespace fwland
