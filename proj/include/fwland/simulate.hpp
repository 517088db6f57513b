#pragma once

#include "fwland/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fwland {

struct ChainConfig {
  double beta = 1;
  std::uint64_t seed = 1;
  std::uint64_t step_cap = 1000000000;
};

/// Finite-beta chain: p(x,y) = e^{-beta delta(x,y)}/n off-diagonal, lazy
/// remainder on the diagonal (at least 1/n). Row sums are 1 up to rounding.
struct TransitionMatrix {
  double beta = 0;
  std::vector<std::vector<double>> p;

  int size() const { return static_cast<int>(p.size()); }
};

TransitionMatrix transition_matrix(const Model& model, double beta);

std::uint64_t splitmix64(std::uint64_t x);

/// Stream seed for one replica: a counter-based split of the master seed, so
/// replicas are independent of execution order.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index);

struct HittingSample {
  int start = 0;
  std::uint64_t steps = 0;
  bool timed_out = false;
  int exit_state = -1;  // first target state hit, -1 when timed out
};

/// Walks the jump chain with geometrically distributed sojourns; the law of
/// (hitting time, hitting state) is exactly that of the per-step chain.
class ChainSampler {
 public:
  ChainSampler(const TransitionMatrix& tm, std::uint64_t seed);

  /// Simulate from `start` until some state of `target` is hit or the step
  /// budget runs out.
  HittingSample hit(int start, const std::vector<bool>& target,
                    std::uint64_t step_cap);

  /// As `hit`, invoking visit(from, to, steps_so_far) at every real jump;
  /// visit returning false stops the run early (reported as timed out).
  template <class Visitor>
  HittingSample hit_visit(int start, const std::vector<bool>& target,
                          std::uint64_t step_cap, Visitor&& visit) {
    HittingSample out;
    out.start = start;
    if (target[start]) {
      out.exit_state = start;
      return out;
    }
    int state = start;
    while (true) {
      std::uint64_t sojourn = sojourn_steps(state);
      if (sojourn > step_cap - out.steps) {
        out.steps = step_cap;
        out.timed_out = true;
        return out;
      }
      out.steps += sojourn;
      int next = jump_target(state);
      if (!visit(state, next, out.steps)) {
        out.timed_out = true;
        return out;
      }
      state = next;
      if (target[state]) {
        out.exit_state = state;
        return out;
      }
    }
  }

 private:
  double uniform();                 // strictly inside (0,1)
  std::uint64_t sojourn_steps(int state);  // steps until the chain leaves `state`
  int jump_target(int state);

  const TransitionMatrix* tm_;
  std::mt19937_64 rng_;
  std::vector<double> leave_;                   // off-diagonal mass per state
  std::vector<std::vector<double>> cdf_;        // cumulative jump masses
  std::vector<std::vector<int>> jump_states_;
};

HittingSample sample_hitting(const Model& model, const ChainConfig& config, int start,
                             const std::vector<int>& target);

}  // namespace fwland
