#pragma once

#include <functional>
#include <vector>

#include "dunes/common.hpp"

namespace dunes {

enum class BoundaryKind { Robin, Dirichlet };

/// Uniform cell-centered grid on the rectangle [0,lx] x [0,ly].
struct Grid {
  int nx = 32;
  int ny = 32;
  double lx = 1.0;
  double ly = 1.0;
  BoundaryKind boundary = BoundaryKind::Robin;

  Grid() = default;
  Grid(int nx_, int ny_, double lx_, double ly_,
       BoundaryKind bk = BoundaryKind::Robin);

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_area() const { return hx() * hy(); }
  Vec2 center(int i, int j) const {
    return {(i + 0.5) * hx(), (j + 0.5) * hy()};
  }
  Vec2 xface(int i, int j) const { return {i * hx(), (j + 0.5) * hy()}; }
  Vec2 yface(int i, int j) const { return {(i + 0.5) * hx(), j * hy()}; }
  std::size_t cells() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  bool same_shape(const Grid& o) const {
    return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
};

/// Cell-centered scalar field. Value type; cheap to copy at desk scale.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid_(g), v_(g.cells(), fill) {}

  const Grid& grid() const { return grid_; }
  double& at(int i, int j) { return v_[idx(i, j)]; }
  double at(int i, int j) const { return v_[idx(i, j)]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  void fill(std::function<double(Vec2)> f) {
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) at(i, j) = f(grid_.center(i, j));
  }

  /// Throws SolverError if any entry is NaN or infinite.
  void check_finite(const char* what) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * grid_.nx + i;
  }
  Grid grid_;
  std::vector<double> v_;
};

/// Face-normal flux arrays: x-faces (nx+1) x ny, y-faces nx x (ny+1).
struct FluxField {
  Grid grid;
  std::vector<double> xf;  // value at x-face (i,j), i in [0,nx]
  std::vector<double> yf;  // value at y-face (i,j), j in [0,ny]

  FluxField() = default;
  explicit FluxField(const Grid& g, double fill = 0.0)
      : grid(g),
        xf(static_cast<std::size_t>(g.nx + 1) * g.ny, fill),
        yf(static_cast<std::size_t>(g.nx) * (g.ny + 1), fill) {}

  double& x_at(int i, int j) {
    return xf[static_cast<std::size_t>(j) * (grid.nx + 1) + i];
  }
  double x_at(int i, int j) const {
    return xf[static_cast<std::size_t>(j) * (grid.nx + 1) + i];
  }
  double& y_at(int i, int j) {
    return yf[static_cast<std::size_t>(j) * grid.nx + i];
  }
  double y_at(int i, int j) const {
    return yf[static_cast<std::size_t>(j) * grid.nx + i];
  }

  void fill_x(std::function<double(Vec2)> f) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i <= grid.nx; ++i) x_at(i, j) = f(grid.xface(i, j));
  }
  void fill_y(std::function<double(Vec2)> f) {
    for (int j = 0; j <= grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) y_at(i, j) = f(grid.yface(i, j));
  }
};

/// Boundary data g(t, x) evaluated at boundary face midpoints.
using BoundaryFunc = std::function<double(double t, Vec2 x)>;

inline BoundaryFunc zero_boundary() {
  return [](double, Vec2) { return 0.0; };
}
inline BoundaryFunc constant_boundary(double k) {
  return [k](double, Vec2) { return k; };
}

}  // namespace dunes
