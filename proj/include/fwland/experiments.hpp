#pragma once

#include "fwland/metastability.hpp"
#include "fwland/simulate.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fwland {

/// Outcome of one experiment: parameters (with all seeds), per-beta results,
/// a pass verdict against the experiment's stated criterion, and the CSV rows
/// (beta, statistic, value, stderr).
struct ExperimentReport {
  std::string name;
  nlohmann::json parameters;
  nlohmann::json results;
  bool pass = true;
  bool inconclusive = false;
  std::vector<std::string> notes;
  std::vector<std::array<std::string, 4>> csv;
};

/// Deterministic shortest round-trip decimal form of a double.
std::string number_string(double v);

/// step cap heuristic: 100 e^{beta (V^m + 1)} clamped to [1, 1e9].
std::uint64_t default_step_cap(double beta, double vmax);

/// Escape time to X^s: per-beta exact solves and simulated means, slope fits,
/// and the early/late tail probabilities at the given epsilon.
ExperimentReport experiment_escape_scaling(const Model& model, int x_start,
                                           const std::vector<double>& betas,
                                           int replicas, std::uint64_t master_seed,
                                           double epsilon = 0.5,
                                           std::optional<std::uint64_t> step_cap = {});

/// Rescaled escape-time law against the unit-mean exponential:
/// Kolmogorov-Smirnov distance and the mean/T_beta ratio.
ExperimentReport experiment_exponential_law(const Model& model, int x0, double beta,
                                            int replicas, std::uint64_t master_seed,
                                            double ks_threshold = 0.08,
                                            double ratio_lo = 0.8,
                                            double ratio_hi = 1.25);

/// Frequency of hitting y strictly before the gate W, against exact
/// absorption probabilities; decays in beta when W gates the pair.
ExperimentReport experiment_gate_crossing(const Model& model, int x, int y,
                                          const std::vector<int>& gate,
                                          const std::vector<double>& betas,
                                          int replicas, std::uint64_t master_seed,
                                          double miss_threshold = 0.05);

/// Fraction of sampled x->y trajectories outside the typical tube.
ExperimentReport experiment_tube_probability(const Model& model, int x, int y,
                                             const std::vector<double>& betas,
                                             int replicas, std::uint64_t master_seed,
                                             double nonmember_threshold = 0.1);

/// Recurrence to X_a within e^{beta(a+epsilon)} steps, worst case over all
/// starting states.
ExperimentReport experiment_recurrence(const Model& model, const Rat& level_a,
                                       double epsilon,
                                       const std::vector<double>& betas, int replicas,
                                       std::uint64_t master_seed,
                                       double exceed_threshold = 0.05);

/// Early high excursions: reaching elevation H(x)+h within e^{beta(h-eps)}
/// steps, plus the bottom-of-cycle variant (exceeding the exit level by eps
/// before leaving the cycle).
ExperimentReport experiment_excursion(const Model& model, int x, const Rat& height,
                                      const Rat& epsilon, double beta, int replicas,
                                      std::uint64_t master_seed);

/// Exit-state distribution of a cycle against its exit costs, run from two
/// starts to check start-independence.
ExperimentReport experiment_exit_distribution(const Model& model,
                                              const std::vector<int>& cycle_members,
                                              int x, const std::vector<double>& betas,
                                              int replicas, std::uint64_t master_seed);

}  // namespace fwland
