#include "dunes/operators.hpp"

#include <cmath>

namespace dunes {

namespace {

void check_nonnegative(const FluxField& A) {
  for (double v : A.xf)
    if (v < 0.0)
      throw SolverError("diffusive operator: negative face diffusivity");
  for (double v : A.yf)
    if (v < 0.0)
      throw SolverError("diffusive operator: negative face diffusivity");
}

// Outward diffusive flux coefficient at a boundary face: flux = A*c*(g - z_c).
// Robin ghost elimination gives c = 1/(1 + h/2); Dirichlet gives c = 2/h.
double boundary_coeff(BoundaryKind bk, double h) {
  return bk == BoundaryKind::Robin ? 1.0 / (1.0 + 0.5 * h) : 2.0 / h;
}

}  // namespace

ScalarField apply_diffusion_homogeneous(const FluxField& A,
                                        const ScalarField& z) {
  check_nonnegative(A);
  const Grid& g = z.grid();
  const double hx = g.hx(), hy = g.hy();
  const double cx = boundary_coeff(g.boundary, hx);
  const double cy = boundary_coeff(g.boundary, hy);
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      // oriented fluxes, +x / +y
      double fw, fe, fs, fn;
      fw = (i == 0) ? -A.x_at(0, j) * cx * (0.0 - z.at(0, j))
                    : A.x_at(i, j) * (z.at(i, j) - z.at(i - 1, j)) / hx;
      fe = (i == g.nx - 1)
               ? A.x_at(g.nx, j) * cx * (0.0 - z.at(i, j))
               : A.x_at(i + 1, j) * (z.at(i + 1, j) - z.at(i, j)) / hx;
      fs = (j == 0) ? -A.y_at(i, 0) * cy * (0.0 - z.at(i, 0))
                    : A.y_at(i, j) * (z.at(i, j) - z.at(i, j - 1)) / hy;
      fn = (j == g.ny - 1)
               ? A.y_at(i, g.ny) * cy * (0.0 - z.at(i, j))
               : A.y_at(i, j + 1) * (z.at(i, j + 1) - z.at(i, j)) / hy;
      out.at(i, j) = (fe - fw) / hx + (fn - fs) / hy;
    }
  }
  return out;
}

ScalarField diffusion_boundary_source(const FluxField& A,
                                      const BoundaryFunc& gfun, double t) {
  const Grid& g = A.grid;
  const double hx = g.hx(), hy = g.hy();
  const double cx = boundary_coeff(g.boundary, hx);
  const double cy = boundary_coeff(g.boundary, hy);
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j) {
    out.at(0, j) += A.x_at(0, j) * cx * gfun(t, g.xface(0, j)) / hx;
    out.at(g.nx - 1, j) +=
        A.x_at(g.nx, j) * cx * gfun(t, g.xface(g.nx, j)) / hx;
  }
  for (int i = 0; i < g.nx; ++i) {
    out.at(i, 0) += A.y_at(i, 0) * cy * gfun(t, g.yface(i, 0)) / hy;
    out.at(i, g.ny - 1) +=
        A.y_at(i, g.ny) * cy * gfun(t, g.yface(i, g.ny)) / hy;
  }
  return out;
}

ScalarField divergence_of_diffusive_flux(const FluxField& A,
                                         const ScalarField& z,
                                         const BoundaryFunc& g, double t) {
  ScalarField out = apply_diffusion_homogeneous(A, z);
  const ScalarField src = diffusion_boundary_source(A, g, t);
  for (std::size_t k = 0; k < out.data().size(); ++k)
    out.data()[k] += src.data()[k];
  return out;
}

ScalarField divergence_of_drift(const FluxField& C) {
  const Grid& g = C.grid;
  const double hx = g.hx(), hy = g.hy();
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.at(i, j) = (C.x_at(i + 1, j) - C.x_at(i, j)) / hx +
                     (C.y_at(i, j + 1) - C.y_at(i, j)) / hy;
  return out;
}

double boundary_flux_integral(const FluxField& A, const ScalarField& z,
                              const BoundaryFunc& gfun, double t,
                              const FluxField& C) {
  check_nonnegative(A);
  const Grid& g = z.grid();
  const double hx = g.hx(), hy = g.hy();
  const double cx = boundary_coeff(g.boundary, hx);
  const double cy = boundary_coeff(g.boundary, hy);
  std::vector<double> terms;
  terms.reserve(2 * (g.nx + g.ny));
  for (int j = 0; j < g.ny; ++j) {
    const double west =
        A.x_at(0, j) * cx * (gfun(t, g.xface(0, j)) - z.at(0, j)) -
        C.x_at(0, j);
    const double east =
        A.x_at(g.nx, j) * cx *
            (gfun(t, g.xface(g.nx, j)) - z.at(g.nx - 1, j)) +
        C.x_at(g.nx, j);
    terms.push_back(west * hy);
    terms.push_back(east * hy);
  }
  for (int i = 0; i < g.nx; ++i) {
    const double south =
        A.y_at(i, 0) * cy * (gfun(t, g.yface(i, 0)) - z.at(i, 0)) -
        C.y_at(i, 0);
    const double north =
        A.y_at(i, g.ny) * cy *
            (gfun(t, g.yface(i, g.ny)) - z.at(i, g.ny - 1)) +
        C.y_at(i, g.ny);
    terms.push_back(south * hx);
    terms.push_back(north * hx);
  }
  return pairwise_sum(terms);
}

double l2_norm(const ScalarField& z) {
  std::vector<double> sq(z.data().size());
  for (std::size_t k = 0; k < sq.size(); ++k)
    sq[k] = z.data()[k] * z.data()[k];
  return std::sqrt(pairwise_sum(sq) * z.grid().cell_area());
}

double h1_seminorm(const ScalarField& z) {
  const Grid& g = z.grid();
  const double hx = g.hx(), hy = g.hy();
  std::vector<double> sq;
  sq.reserve(g.cells() * 2);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      const double dzdx = (z.at(i, j) - z.at(i - 1, j)) / hx;
      sq.push_back(dzdx * dzdx);
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double dzdy = (z.at(i, j) - z.at(i, j - 1)) / hy;
      sq.push_back(dzdy * dzdy);
    }
  return std::sqrt(pairwise_sum(sq) * g.cell_area());
}

double mass(const ScalarField& z) {
  return pairwise_sum(z.data()) * z.grid().cell_area();
}

double l2_distance(const ScalarField& a, const ScalarField& b) {
  std::vector<double> sq(a.data().size());
  for (std::size_t k = 0; k < sq.size(); ++k) {
    const double d = a.data()[k] - b.data()[k];
    sq[k] = d * d;
  }
  return std::sqrt(pairwise_sum(sq) * a.grid().cell_area());
}

ScalarField diffusion_diagonal(const FluxField& A) {
  const Grid& g = A.grid;
  const double hx = g.hx(), hy = g.hy();
  const double cx = boundary_coeff(g.boundary, hx);
  const double cy = boundary_coeff(g.boundary, hy);
  ScalarField diag(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double dsum = 0.0;
      dsum += (i == 0) ? A.x_at(0, j) * cx / hx : A.x_at(i, j) / (hx * hx);
      dsum += (i == g.nx - 1) ? A.x_at(g.nx, j) * cx / hx
                              : A.x_at(i + 1, j) / (hx * hx);
      dsum += (j == 0) ? A.y_at(i, 0) * cy / hy : A.y_at(i, j) / (hy * hy);
      dsum += (j == g.ny - 1) ? A.y_at(i, g.ny) * cy / hy
                              : A.y_at(i, j + 1) / (hy * hy);
      diag.at(i, j) = dsum;
    }
  return diag;
}

}  // namespace dunes
