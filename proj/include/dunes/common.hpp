#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dunes {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Bad input / bad configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (non-convergence, NaN). The CLI maps this to exit code 1.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what,
                       std::vector<double> residual_history = {})
      : std::runtime_error(what),
        residual_history_(std::move(residual_history)) {}
  const std::vector<double>& residual_history() const {
    return residual_history_;
  }

 private:
  std::vector<double> residual_history_;
};

/// Cascade summation with a fixed reduction tree. All norms and quadratures
/// go through this so results do not depend on traversal or worker count.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = v[0];
    for (std::size_t i = 1; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Wraps a phase onto [0,1). Keeps periodic evaluations well conditioned for
/// large arguments such as t/epsilon.
inline double wrap_unit(double s) { return s - std::floor(s); }

}  // namespace dunes
