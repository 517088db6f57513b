#pragma once

#include "fwland/energy.hpp"
#include "fwland/model.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

// Brute-force reference computations, kept independent of the library's
// search code: heights come from exhaustive simple-path enumeration, cycles
// from the defining inequality, reachability from matrix closure.
namespace oracles {

using fwland::EnergyTable;
using fwland::Model;
using fwland::Rat;
using fwland::Rate;

inline Rate oracle_comm_height(const Model& m, const EnergyTable& energy, int x,
                               int y) {
  if (x == y) return Rate(energy[x]);
  Rate best = Rate::infinity();
  std::vector<bool> visited(m.size(), false);
  visited[x] = true;
  auto dfs = [&](auto&& self, int u, Rate elevation) -> void {
    for (int v : m.finite_successors(u)) {
      if (visited[v]) continue;
      Rate step = max(elevation, Rate(energy[u]) + m.delta(u, v));
      if (v == y) {
        best = min(best, step);
        continue;
      }
      visited[v] = true;
      self(self, v, step);
      visited[v] = false;
    }
  };
  dfs(dfs, x, Rate(energy[x]));
  return best;
}

inline std::vector<std::vector<Rate>> oracle_heights(const Model& m,
                                                     const EnergyTable& energy) {
  std::vector<std::vector<Rate>> phi(m.size(), std::vector<Rate>(m.size()));
  for (int x = 0; x < m.size(); ++x)
    for (int y = 0; y < m.size(); ++y) phi[x][y] = oracle_comm_height(m, energy, x, y);
  return phi;
}

/// Energy-cycle test straight from the definition, on oracle heights.
inline bool oracle_is_cycle(const Model& m, const std::vector<std::vector<Rate>>& phi,
                            const std::vector<int>& subset) {
  if (subset.size() <= 1) return true;
  std::vector<bool> in(m.size(), false);
  for (int s : subset) in[s] = true;
  Rate internal(0);
  bool first = true;
  for (int a : subset)
    for (int b : subset) {
      if (a == b) continue;
      internal = first ? phi[a][b] : max(internal, phi[a][b]);
      first = false;
    }
  Rate exit = Rate::infinity();
  for (int a : subset)
    for (int b = 0; b < m.size(); ++b)
      if (!in[b]) exit = min(exit, phi[a][b]);
  return internal < exit;
}

inline std::vector<std::vector<bool>> oracle_reachability(const Model& m) {
  const int n = m.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int x = 0; x < n; ++x) {
    reach[x][x] = true;
    for (int y : m.finite_successors(x)) reach[x][y] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  return reach;
}

/// Minimum-cost in-forest by raw enumeration of parent assignments.
inline Rate oracle_min_forest(const Model& m, const std::vector<bool>& is_root) {
  const int n = m.size();
  std::vector<int> free_states;
  for (int v = 0; v < n; ++v)
    if (!is_root[v]) free_states.push_back(v);
  std::vector<int> parent(n, -1);
  Rate best = Rate::infinity();
  auto valid = [&]() {
    for (int v : free_states) {
      int u = v, steps = 0;
      while (parent[u] != -1) {
        u = parent[u];
        if (++steps > n) return false;
      }
      if (!is_root[u]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i, Rat cost) -> void {
    if (i == free_states.size()) {
      if (valid() && Rate(cost) < best) best = Rate(cost);
      return;
    }
    int v = free_states[i];
    for (int u : m.finite_successors(v)) {
      parent[v] = u;
      self(self, i + 1, cost + m.delta(v, u).finite());
      parent[v] = -1;
    }
  };
  rec(rec, 0, Rat(0));
  return best;
}

/// As oracle_min_forest, restricted to assignments whose chain from `from`
/// ends at the root `to`.
inline Rate oracle_min_forest_constrained(const Model& m,
                                          const std::vector<bool>& is_root, int from,
                                          int to) {
  const int n = m.size();
  std::vector<int> free_states;
  for (int v = 0; v < n; ++v)
    if (!is_root[v]) free_states.push_back(v);
  std::vector<int> parent(n, -1);
  Rate best = Rate::infinity();
  auto valid = [&]() {
    for (int v : free_states) {
      int u = v, steps = 0;
      while (parent[u] != -1) {
        u = parent[u];
        if (++steps > n) return false;
      }
      if (!is_root[u]) return false;
      if (v == from && u != to) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i, Rat cost) -> void {
    if (i == free_states.size()) {
      if (valid() && Rate(cost) < best) best = Rate(cost);
      return;
    }
    int v = free_states[i];
    for (int u : m.finite_successors(v)) {
      parent[v] = u;
      self(self, i + 1, cost + m.delta(v, u).finite());
      parent[v] = -1;
    }
  };
  rec(rec, 0, Rat(0));
  return best;
}

// ---- seeded random model generators ----

struct ModelGen {
  std::mt19937_64 rng;

  explicit ModelGen(std::uint64_t seed) : rng(seed) {}

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Rat pick_rate() {
    switch (uniform_int(0, 3)) {
      case 0: return Rat(0);
      case 1: return Rat(1, 2);
      case 2: return Rat(1);
      default: return Rat(2);
    }
  }

  std::vector<std::string> labels(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
    return out;
  }

  /// Random irreducible model, rates in {0, 1/2, 1, 2, inf}. A random
  /// directed Hamiltonian cycle guarantees irreducibility; other edges are
  /// finite with probability ~1/2.
  Model irreducible(int n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<Rate>> delta(n, std::vector<Rate>(n, Rate::infinity()));
    for (int i = 0; i < n; ++i) delta[order[i]][order[(i + 1) % n]] = Rate(pick_rate());
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && !delta[x][y].is_finite() && uniform_int(0, 1) == 0)
          delta[x][y] = Rate(pick_rate());
    return Model(labels(n), delta);
  }

  std::vector<std::vector<bool>> connected_support(int n) {
    std::vector<std::vector<bool>> q(n, std::vector<bool>(n, false));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < n; ++i) {
      int anchor = order[uniform_int(0, i - 1)];
      q[order[i]][anchor] = q[anchor][order[i]] = true;
    }
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (!q[x][y] && uniform_int(0, 2) == 0) q[x][y] = q[y][x] = true;
    return q;
  }

  std::vector<Rat> potential(int n) {
    std::vector<Rat> u(n);
    for (int i = 0; i < n; ++i) u[i] = Rat(uniform_int(0, 8), 2);
    return u;
  }

  Model metropolis(int n) {
    return fwland::build_metropolis(labels(n), potential(n), connected_support(n));
  }

  /// Weak reversibility by construction: a symmetric saddle elevation
  /// E(x,y) >= max(U(x), U(y)) gives delta(x,y) = E(x,y) - U(x).
  Model weak_reversible(int n, std::vector<Rat>* potential_out = nullptr) {
    auto u = potential(n);
    auto q = connected_support(n);
    std::vector<std::vector<Rate>> delta(n, std::vector<Rate>(n, Rate::infinity()));
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        if (!q[x][y]) continue;
        Rat saddle = std::max(u[x], u[y]) + Rat(uniform_int(0, 2), 2);
        delta[x][y] = Rate(saddle - u[x]);
        delta[y][x] = Rate(saddle - u[y]);
      }
    if (potential_out) *potential_out = u;
    return Model(labels(n), delta, fwland::RateMode::Explicit, u);
  }
};

}  // namespace oracles
