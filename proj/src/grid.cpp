#include "dunes/grid.hpp"

#include <cmath>

namespace dunes {

Grid::Grid(int nx_, int ny_, double lx_, double ly_, BoundaryKind bk)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), boundary(bk) {
  if (nx < 8 || ny < 8) throw ConfigError("grid: nx, ny must be >= 8");
  if (!(lx > 0.0 && ly > 0.0))
    throw ConfigError("grid: extents must be positive");
}

void ScalarField::check_finite(const char* what) const {
  for (double x : v_)
    if (!std::isfinite(x))
      throw SolverError(std::string("non-finite value in ") + what);
}

}  // namespace dunes
