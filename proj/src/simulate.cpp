#include "fwland/simulate.hpp"

#include <cmath>
#include <limits>

namespace fwland {

TransitionMatrix transition_matrix(const Model& model, double beta) {
  if (beta <= 0) throw std::invalid_argument("transition_matrix: beta must be positive");
  const int n = model.size();
  TransitionMatrix tm;
  tm.beta = beta;
  tm.p.assign(n, std::vector<double>(n, 0.0));
  for (int x = 0; x < n; ++x) {
    double off = 0;
    for (int y : model.finite_successors(x)) {
      tm.p[x][y] = std::exp(-beta * model.delta(x, y).to_double()) / n;
      off += tm.p[x][y];
    }
    tm.p[x][x] = 1.0 - off;
  }
  return tm;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + index);
}

ChainSampler::ChainSampler(const TransitionMatrix& tm, std::uint64_t seed)
    : tm_(&tm), rng_(seed) {
  const int n = tm.size();
  leave_.resize(n);
  cdf_.resize(n);
  jump_states_.resize(n);
  for (int x = 0; x < n; ++x) {
    double acc = 0;
    for (int y = 0; y < n; ++y) {
      if (y == x || tm.p[x][y] <= 0) continue;
      acc += tm.p[x][y];
      cdf_[x].push_back(acc);
      jump_states_[x].push_back(y);
    }
    leave_[x] = acc;
  }
}

double ChainSampler::uniform() {
  return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t ChainSampler::sojourn_steps(int state) {
  const double q = leave_[state];
  if (q <= 0) return std::numeric_limits<std::uint64_t>::max();
  if (q >= 1) return 1;
  // Geometric with success probability q: 1 + floor(log U / log(1-q)).
  double draws = std::floor(std::log(uniform()) / std::log1p(-q));
  if (draws >= 9e18) return std::numeric_limits<std::uint64_t>::max();
  return 1 + static_cast<std::uint64_t>(draws);
}

int ChainSampler::jump_target(int state) {
  const auto& cdf = cdf_[state];
  const double v = uniform() * leave_[state];
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (v <= cdf[i]) return jump_states_[state][i];
  return jump_states_[state].back();
}

HittingSample ChainSampler::hit(int start, const std::vector<bool>& target,
                                std::uint64_t step_cap) {
  return hit_visit(start, target, step_cap, [](int, int, std::uint64_t) { return true; });
}

HittingSample sample_hitting(const Model& model, const ChainConfig& config, int start,
                             const std::vector<int>& target) {
  if (target.empty()) throw std::invalid_argument("sample_hitting: empty target set");
  TransitionMatrix tm = transition_matrix(model, config.beta);
  ChainSampler sampler(tm, config.seed);
  std::vector<bool> is_target(model.size(), false);
  for (int t : target) is_target.at(t) = true;
  return sampler.hit(start, is_target, config.step_cap);
}

}  // namespace fwland
