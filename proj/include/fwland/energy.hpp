#pragma once

#include "fwland/graphs.hpp"
#include "fwland/model.hpp"

#include <map>
#include <vector>

namespace fwland {

/// Virtual energy per state, normalized so the minimum is zero.
struct EnergyTable {
  std::vector<Rat> h;

  const Rat& operator[](int x) const { return h.at(x); }
  int size() const { return static_cast<int>(h.size()); }
};

/// H(x) from the minimum spanning in-forest costs over G({x}), normalized to
/// min 0. Requires an irreducible model.
EnergyTable virtual_energy(const Model& model);

/// Stepwise potential reconstruction: W(x) accumulates
/// delta(u,v) - delta(v,u) along any finite-rate path from the first declared
/// state. Requires symmetric support (delta(x,y) finite iff delta(y,x)
/// finite); throws when path-independence fails, naming an offending cycle.
EnergyTable reconstruct_potential(const Model& model);

/// Escape exponents of a domain D: gamma is the exit-time exponent, and
/// delta_exit[y] the exit-location exponent of each exterior state reachable
/// by some exit graph (infinite for the rest). Exact values come from the
/// spanning-forest formulas; the finite-beta oracle cross-checks them and
/// oracle_agrees records the outcome.
struct ExitExponents {
  Rate gamma;
  std::map<int, Rate> delta_exit;
  double oracle_gamma = 0;
  std::map<int, double> oracle_delta;
  bool oracle_agrees = true;
};

struct ExitOracle {
  double gamma = 0;
  std::map<int, double> delta_exit;
};

/// Exit exponents for x in D by exact linear solves at each beta, fitted by
/// least squares. Needs at least two betas.
ExitOracle exit_exponent_oracle(const Model& model, const std::vector<int>& domain,
                                int x, const std::vector<double>& betas);

/// Graph-formula exponents, cross-checked against exit_exponent_oracle at
/// `oracle_betas`. The state count must not exceed `cap` (the constrained
/// enumeration refuses to approximate beyond it).
ExitExponents exit_exponents_graph(const Model& model, const std::vector<int>& domain,
                                   int x, int cap = 12,
                                   const std::vector<double>& oracle_betas = {4, 6, 8},
                                   double oracle_tolerance = 0.25);

}  // namespace fwland
