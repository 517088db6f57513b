#pragma once

#include "fwland/model.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <vector>

namespace fwland {

/// Working precision of the finite-beta oracles (~166-bit significand);
/// stationary masses reach e^{-40} on the desk models, far beyond double.
using Real = boost::multiprecision::cpp_bin_float_50;

/// Row-stochastic chain at inverse temperature beta:
/// p(x,y) = e^{-beta delta(x,y)} / n off-diagonal, lazy remainder on the
/// diagonal (always >= 1/n).
std::vector<std::vector<Real>> transition_matrix_hp(const Model& model, double beta);

/// Stationary distribution of an irreducible row-stochastic matrix via GTH
/// elimination (subtraction-free, entrywise relative accuracy). Checks the
/// residual ||muP - mu||_inf <= 1e-12.
std::vector<Real> stationary_distribution_hp(const std::vector<std::vector<Real>>& p);

/// mu_beta of the model's chain.
std::vector<Real> stationary_solve(const Model& model, double beta);

/// Expected steps to reach `target` from every state (0 on targets), solving
/// (I - Q) h = 1 on the complement. Relative residual <= 1e-10 enforced.
std::vector<Real> expected_hitting_hp(const std::vector<std::vector<Real>>& p,
                                      const std::vector<bool>& target);

/// probs[u][t] = P[first target state hit is t | start u] for absorbing set
/// `target`; rows of target states are unit vectors.
std::vector<std::vector<Real>> absorption_probabilities_hp(
    const std::vector<std::vector<Real>>& p, const std::vector<bool>& target);

/// Ordinary least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fwland
