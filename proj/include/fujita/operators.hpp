#pragma once

#include "fujita/core.hpp"
#include "fujita/grid.hpp"
#include "fujita/tridiagonal.hpp"

namespace fujita {

/// Discrete radial Laplacian u_rr + (n-1)/r u_r. Central differences in the interior,
/// n*u_rr via the ghost node u_{-1} = u_1 at the center, one-sided second order at r = L.
Field laplacian(const Field& f);

/// |∂_r f| with central differences, zero at the center, one-sided second order at r = L.
Field gradient_magnitude(const Field& f);

/// Monotone upwind |∂_r f|: max(D⁺f, -D⁻f, 0) with the ghost node f_{-1} = f_1 at the
/// center and the one-sided backward difference at r = L. First order, but the resulting
/// reaction term is nondecreasing in every neighbour, so the stepper keeps a discrete
/// comparison principle and does not oscillate around sharp peaks.
Field upwind_gradient_magnitude(const Field& f);

/// Reaction part of the equation: use_source*|u|^p + use_gradient*b*|∂_r u|^q + h,
/// with |∂_r u| from upwind_gradient_magnitude.
Field rhs(const Field& u, const ProblemParams& params, const Field* forcing = nullptr);

/// Rows 0..M of the discrete Laplacian (the boundary row is not included);
/// the coupling of row M to the boundary node is upper[M].
Tridiagonal laplacian_matrix(const RadialGrid& grid);

/// Principal Dirichlet eigenpair of -Δ on the ball B_R, phi normalized to unit mass.
struct Eigenpair {
    double lambda = 0.0;
    Field phi;
    double R = 0.0;
    int iterations = 0;
    double residual = 0.0;  // ||Δ_h φ + λφ||_∞ / ||φ||_∞ over interior nodes
};

/// Inverse power iteration on the discrete radial Laplacian of B_R with M interior nodes.
/// Throws std::runtime_error if the iteration does not converge.
Eigenpair principal_eigenpair(int n, double R, int M);

/// Eigenpair on the sub-ball of `grid` whose radius is the node nearest to R, so that
/// its nodes coincide with a prefix of `grid`'s nodes.
Eigenpair principal_eigenpair_on(const RadialGrid& grid, double R);

}  // namespace fujita
