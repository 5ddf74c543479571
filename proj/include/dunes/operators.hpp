#pragma once

#include "dunes/grid.hpp"

namespace dunes {

/// div(A grad z) with the boundary data folded in through the Robin (or
/// Dirichlet) ghost elimination. Equals apply_diffusion_homogeneous(A, z) +
/// diffusion_boundary_source(A, g, t). Throws on negative face diffusivity.
ScalarField divergence_of_diffusive_flux(const FluxField& A_faces,
                                         const ScalarField& z,
                                         const BoundaryFunc& g, double t);

/// The g-independent part of the diffusive divergence (boundary data = 0).
ScalarField apply_diffusion_homogeneous(const FluxField& A_faces,
                                        const ScalarField& z);

/// The boundary-data contribution of the diffusive divergence.
ScalarField diffusion_boundary_source(const FluxField& A_faces,
                                      const BoundaryFunc& g, double t);

/// Conservative face-difference divergence of a drift flux; boundary faces
/// carry the physical C·n value stored in the FluxField.
ScalarField divergence_of_drift(const FluxField& C);

/// Discrete surface integral matching the cell sum of the two divergences
/// exactly (discrete Green identity).
double boundary_flux_integral(const FluxField& A_faces, const ScalarField& z,
                              const BoundaryFunc& g, double t,
                              const FluxField& C);

double l2_norm(const ScalarField& z);
double h1_seminorm(const ScalarField& z);
double mass(const ScalarField& z);
double l2_distance(const ScalarField& a, const ScalarField& b);

/// Diagonal of -apply_diffusion_homogeneous, for Jacobi preconditioning.
ScalarField diffusion_diagonal(const FluxField& A_faces);

}  // namespace dunes
