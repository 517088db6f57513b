#include "fwland/energy.hpp"

#include "fwland/solve.hpp"

#include <algorithm>
#include <cmath>

namespace fwland {

EnergyTable virtual_energy(const Model& model) {
  if (!check_irreducible(model).irreducible)
    throw std::invalid_argument("virtual_energy: model is not irreducible");
  const int n = model.size();
  std::vector<Rat> raw(n);
  for (int x = 0; x < n; ++x) raw[x] = min_arborescence(model, {x}).total_cost.finite();
  Rat ground = *std::min_element(raw.begin(), raw.end());
  for (Rat& v : raw) v -= ground;
  return EnergyTable{std::move(raw)};
}

EnergyTable reconstruct_potential(const Model& model) {
  const int n = model.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && model.delta(x, y).is_finite() != model.delta(y, x).is_finite())
        throw std::runtime_error("reconstruct_potential: support symmetry violated on " +
                                 model.label(x) + " <-> " + model.label(y));
  if (!check_irreducible(model).irreducible)
    throw std::invalid_argument("reconstruct_potential: model is not irreducible");

  // Spanning tree from the first declared state; W by telescoping.
  std::vector<Rat> w(n);
  std::vector<int> tree_parent(n, -1);
  std::vector<bool> seen(n, false);
  std::vector<int> order{0};
  seen[0] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int u = order[head];
    for (int v : model.finite_successors(u))
      if (!seen[v]) {
        seen[v] = true;
        tree_parent[v] = u;
        w[v] = w[u] + model.delta(u, v).finite() - model.delta(v, u).finite();
        order.push_back(v);
      }
  }

  // Path independence over the fundamental cycles: every non-tree edge must
  // telescope consistently.
  for (int u = 0; u < n; ++u)
    for (int v : model.finite_successors(u)) {
      if (tree_parent[v] == u || tree_parent[u] == v) continue;
      Rat along = w[u] + model.delta(u, v).finite() - model.delta(v, u).finite();
      if (along != w[v]) {
        std::string cycle = model.label(v);
        for (int t = u; t != -1; t = tree_parent[t]) cycle = model.label(t) + " -> " + cycle;
        throw std::runtime_error(
            "reconstruct_potential: path dependence detected on cycle closing edge " +
            model.label(u) + " -> " + model.label(v) + " (tree path " + cycle + ")");
      }
    }

  Rat ground = *std::min_element(w.begin(), w.end());
  for (Rat& v : w) v -= ground;
  return EnergyTable{std::move(w)};
}

ExitOracle exit_exponent_oracle(const Model& model, const std::vector<int>& domain,
                                int x, const std::vector<double>& betas) {
  if (betas.size() < 2)
    throw std::invalid_argument("exit_exponent_oracle: need at least two betas");
  const int n = model.size();
  std::vector<bool> in_domain(n, false);
  for (int d : domain) in_domain.at(d) = true;
  if (!in_domain[x]) throw std::invalid_argument("exit_exponent_oracle: x not in domain");
  if (static_cast<int>(domain.size()) == n)
    throw std::invalid_argument("exit_exponent_oracle: domain has no exterior");

  std::vector<bool> target(n);
  for (int v = 0; v < n; ++v) target[v] = !in_domain[v];

  std::vector<double> log_time;
  std::map<int, std::vector<double>> log_prob;
  for (double beta : betas) {
    auto p = transition_matrix_hp(model, beta);
    auto h = expected_hitting_hp(p, target);
    log_time.push_back(static_cast<double>(log(h[x])));
    auto probs = absorption_probabilities_hp(p, target);
    for (int y = 0; y < n; ++y)
      if (target[y] && probs[x][y] > 0)
        log_prob[y].push_back(static_cast<double>(-log(probs[x][y])));
  }

  ExitOracle oracle;
  oracle.gamma = ols_slope(betas, log_time);
  for (auto& [y, values] : log_prob)
    if (values.size() == betas.size()) oracle.delta_exit[y] = ols_slope(betas, values);
  return oracle;
}

ExitExponents exit_exponents_graph(const Model& model, const std::vector<int>& domain,
                                   int x, int cap,
                                   const std::vector<double>& oracle_betas,
                                   double oracle_tolerance) {
  const int n = model.size();
  if (n > cap)
    throw std::invalid_argument("exit_exponents_graph: state count exceeds cap");
  std::vector<bool> in_domain(n, false);
  for (int d : domain) in_domain.at(d) = true;
  if (!in_domain[x]) throw std::invalid_argument("exit_exponents_graph: x not in domain");
  if (static_cast<int>(domain.size()) == n)
    throw std::invalid_argument("exit_exponents_graph: domain has no exterior");

  std::vector<bool> exterior(n);
  for (int v = 0; v < n; ++v) exterior[v] = !in_domain[v];

  Rate base = min_forest_cost(model, exterior);
  if (!base.is_finite())
    throw std::runtime_error(
        "exit_exponents_graph: domain cannot reach its exterior through finite rates");

  ExitExponents out;
  // Exit time: roots grown by the starting state itself.
  std::vector<bool> with_x = exterior;
  with_x[x] = true;
  out.gamma = base - min_forest_cost(model, with_x);

  bool some_zero = false;
  for (int y = 0; y < n; ++y) {
    if (!exterior[y]) continue;
    Rate constrained = min_forest_cost_constrained(model, exterior, x, y);
    if (constrained.is_finite()) {
      Rate d = constrained - base;
      some_zero = some_zero || d == Rate(0);
      out.delta_exit[y] = d;
    }
  }
  if (!some_zero)
    throw std::logic_error("exit_exponents_graph: no zero exit exponent found");

  ExitOracle oracle = exit_exponent_oracle(model, domain, x, oracle_betas);
  out.oracle_gamma = oracle.gamma;
  out.oracle_delta = oracle.delta_exit;
  out.oracle_agrees =
      std::abs(oracle.gamma - out.gamma.to_double()) <= oracle_tolerance;
  for (const auto& [y, d] : out.delta_exit) {
    auto it = oracle.delta_exit.find(y);
    if (it == oracle.delta_exit.end()) continue;
    if (std::abs(it->second - d.to_double()) > oracle_tolerance) out.oracle_agrees = false;
  }
  return out;
}

}  // namespace fwland
