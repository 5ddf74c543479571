#include "dunes/linear_solver.hpp"

#include <cmath>

namespace dunes {

namespace {

double dot_fixed(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return pairwise_sum(prod);
}

}  // namespace

CgResult pcg(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        apply,
    const std::vector<double>& rhs, std::vector<double>& x,
    const std::vector<double>& inv_diag, double tol_rel, int max_iter) {
  const std::size_t n = rhs.size();
  CgResult res;

  std::vector<double> r(n), z(n), p(n), Ap(n);
  apply(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];

  const double rhs_norm = std::sqrt(dot_fixed(rhs, rhs));
  const double stop = tol_rel * (rhs_norm > 0.0 ? rhs_norm : 1.0);

  double rnorm = std::sqrt(dot_fixed(r, r));
  res.history.push_back(rhs_norm > 0.0 ? rnorm / rhs_norm : rnorm);
  if (rnorm <= stop) {
    res.converged = true;
    res.rel_residual = res.history.back();
    return res;
  }

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot_fixed(r, z);

  for (int it = 0; it < max_iter; ++it) {
    apply(p, Ap);
    const double pAp = dot_fixed(p, Ap);
    if (!(pAp > 0.0)) {
      // Operator not positive definite on this vector (or exact zero);
      // bail out with the current iterate.
      res.iterations = it;
      res.rel_residual = rnorm / (rhs_norm > 0.0 ? rhs_norm : 1.0);
      res.converged = rnorm <= stop;
      return res;
    }
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    rnorm = std::sqrt(dot_fixed(r, r));
    res.history.push_back(rhs_norm > 0.0 ? rnorm / rhs_norm : rnorm);
    res.iterations = it + 1;
    if (rnorm <= stop) {
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot_fixed(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.rel_residual = rnorm / (rhs_norm > 0.0 ? rhs_norm : 1.0);
  return res;
}

}  // namespace dunes
