#pragma once

#include <functional>
#include <vector>

#include "dunes/common.hpp"

namespace dunes {

struct CgResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  std::vector<double> history;  // relative residual per iteration
};

/// Preconditioned conjugate gradient, matrix-free. `apply` must implement a
/// symmetric positive definite operator; `inv_diag` is the Jacobi
/// preconditioner. Converges when ||r|| <= tol_rel * ||rhs||. Deterministic:
/// single-threaded with fixed accumulation order.
CgResult pcg(
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        apply,
    const std::vector<double>& rhs, std::vector<double>& x,
    const std::vector<double>& inv_diag, double tol_rel, int max_iter);

}  // namespace dunes
