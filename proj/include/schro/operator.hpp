#pragma once

#include <cstddef>
#include <vector>

#include "schro/grid.hpp"
#include "schro/potential.hpp"

namespace schro {

// Symmetric tridiagonal discretization of -d2/dx2 + q with Dirichlet ends.
struct OperatorMatrix {
    GridPtr grid;
    std::vector<double> diag;     // size m
    std::vector<double> offdiag;  // size m-1

    std::size_t dim() const { return diag.size(); }
    // Infinity-norm bound used to scale residual tolerances.
    double norm_bound() const;
};

// Builds the operator matrix.
//
// DirectQ: diag_i = 2/h^2 + q(x_i), offdiag = -1/h^2 (second-order stencil,
// equivalently mass-lumped linear finite elements).
//
// WeakNu: the potential term of the bilinear form, integral of q*y*z, is
// replaced by -integral of nu*(y*z)' (integration by parts; boundary terms
// vanish). With hat functions and one midpoint sample of nu per element the
// element integrals of (e_i e_j)' are +-1 or 0, so the potential contributes
// (nu_mid[i] - nu_mid[i-1]) to the diagonal entry of node i and nothing off
// the diagonal; mass lumping divides by h.
OperatorMatrix assemble(const PotentialSpec& potential, GridPtr grid);

// Number of eigenvalues strictly below lam, by the signed Sturm recurrence
// with the standard tiny-pivot guard. Total over finite matrices.
int sturm_count(const OperatorMatrix& matrix, double lam);

}  // namespace schro
