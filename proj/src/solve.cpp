#include "fwland/solve.hpp"

#include <algorithm>
#include <cmath>

namespace fwland {

namespace {

Real to_real(const Rat& q) {
  return Real(boost::multiprecision::numerator(q)) /
         Real(boost::multiprecision::denominator(q));
}

// LU factorization with partial pivoting, in place. Returns the pivot
// permutation; throws on a (numerically) singular matrix.
std::vector<int> lu_factor(std::vector<std::vector<Real>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[pivot][k])) pivot = i;
    if (a[pivot][k] == 0) throw std::runtime_error("singular restricted system");
    std::swap(a[k], a[pivot]);
    std::swap(perm[k], perm[pivot]);
    for (int i = k + 1; i < n; ++i) {
      a[i][k] /= a[k][k];
      for (int j = k + 1; j < n; ++j) a[i][j] -= a[i][k] * a[k][j];
    }
  }
  return perm;
}

std::vector<Real> lu_solve(const std::vector<std::vector<Real>>& lu,
                           const std::vector<int>& perm, const std::vector<Real>& b) {
  const int n = static_cast<int>(lu.size());
  std::vector<Real> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu[i][j] * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu[i][j] * x[j];
    x[i] /= lu[i][i];
  }
  return x;
}

// I - Q on the transient states, assembled from off-diagonal masses so the
// diagonal needs no cancellation-prone 1 - p(x,x).
std::vector<std::vector<Real>> transient_system(const std::vector<std::vector<Real>>& p,
                                                const std::vector<int>& transient) {
  const int n = static_cast<int>(p.size());
  const int m = static_cast<int>(transient.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < m; ++i) pos[transient[i]] = i;
  std::vector<std::vector<Real>> a(m, std::vector<Real>(m, Real(0)));
  for (int i = 0; i < m; ++i) {
    const int u = transient[i];
    Real leave(0);
    for (int y = 0; y < n; ++y)
      if (y != u) leave += p[u][y];
    a[i][i] = leave;
    for (int y = 0; y < n; ++y)
      if (y != u && pos[y] >= 0) a[i][pos[y]] = -p[u][y];
  }
  return a;
}

}  // namespace

std::vector<std::vector<Real>> transition_matrix_hp(const Model& model, double beta) {
  const int n = model.size();
  std::vector<std::vector<Real>> p(n, std::vector<Real>(n, Real(0)));
  const Real b(beta);
  for (int x = 0; x < n; ++x) {
    Real off(0);
    for (int y : model.finite_successors(x)) {
      p[x][y] = exp(-b * to_real(model.delta(x, y).finite())) / n;
      off += p[x][y];
    }
    p[x][x] = Real(1) - off;
  }
  return p;
}

std::vector<Real> stationary_distribution_hp(const std::vector<std::vector<Real>>& p) {
  const int n = static_cast<int>(p.size());
  std::vector<std::vector<Real>> a = p;
  for (int k = n - 1; k >= 1; --k) {
    Real s(0);
    for (int j = 0; j < k; ++j) s += a[k][j];
    if (s == 0) throw std::runtime_error("stationary solve: chain is reducible");
    for (int i = 0; i < k; ++i) a[i][k] /= s;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (j != i) a[i][j] += a[i][k] * a[k][j];
  }
  std::vector<Real> mu(n);
  mu[0] = 1;
  for (int k = 1; k < n; ++k) {
    mu[k] = 0;
    for (int j = 0; j < k; ++j) mu[k] += mu[j] * a[j][k];
  }
  Real total(0);
  for (const Real& m : mu) total += m;
  for (Real& m : mu) m /= total;

  Real residual(0);
  for (int y = 0; y < n; ++y) {
    Real s(0);
    for (int x = 0; x < n; ++x) s += mu[x] * p[x][y];
    residual = std::max(residual, abs(s - mu[y]));
  }
  if (residual > Real(1e-12))
    throw std::runtime_error("stationary solve: residual exceeds 1e-12");
  return mu;
}

std::vector<Real> stationary_solve(const Model& model, double beta) {
  if (beta <= 0) throw std::invalid_argument("stationary_solve: beta must be positive");
  return stationary_distribution_hp(transition_matrix_hp(model, beta));
}

std::vector<Real> expected_hitting_hp(const std::vector<std::vector<Real>>& p,
                                      const std::vector<bool>& target) {
  const int n = static_cast<int>(p.size());
  std::vector<int> transient;
  for (int x = 0; x < n; ++x)
    if (!target[x]) transient.push_back(x);
  std::vector<Real> h(n, Real(0));
  if (transient.empty()) return h;

  auto a = transient_system(p, transient);
  const auto saved = a;
  auto perm = lu_factor(a);
  std::vector<Real> ones(transient.size(), Real(1));
  auto x = lu_solve(a, perm, ones);

  Real hmax(1), res(0);
  for (const Real& v : x) hmax = std::max(hmax, abs(v));
  for (std::size_t i = 0; i < x.size(); ++i) {
    Real r(-1);
    for (std::size_t j = 0; j < x.size(); ++j) r += saved[i][j] * x[j];
    res = std::max(res, abs(r));
  }
  if (res / hmax > Real(1e-10))
    throw std::runtime_error("hitting solve: residual exceeds 1e-10");

  for (std::size_t i = 0; i < transient.size(); ++i) h[transient[i]] = x[i];
  return h;
}

std::vector<std::vector<Real>> absorption_probabilities_hp(
    const std::vector<std::vector<Real>>& p, const std::vector<bool>& target) {
  const int n = static_cast<int>(p.size());
  std::vector<int> transient;
  for (int x = 0; x < n; ++x)
    if (!target[x]) transient.push_back(x);
  std::vector<std::vector<Real>> probs(n, std::vector<Real>(n, Real(0)));
  for (int t = 0; t < n; ++t)
    if (target[t]) probs[t][t] = 1;
  if (transient.empty()) return probs;

  auto a = transient_system(p, transient);
  auto perm = lu_factor(a);
  for (int t = 0; t < n; ++t) {
    if (!target[t]) continue;
    std::vector<Real> b(transient.size());
    for (std::size_t i = 0; i < transient.size(); ++i) b[i] = p[transient[i]][t];
    auto x = lu_solve(a, perm, b);
    for (std::size_t i = 0; i < transient.size(); ++i) probs[transient[i]][t] = x[i];
  }
  return probs;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ols_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0) throw std::invalid_argument("ols_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / det;
}

}  // namespace fwland
