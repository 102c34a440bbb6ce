#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "schro/grid.hpp"
#include "schro/operator.hpp"
#include "schro/parallel.hpp"
#include "schro/potential.hpp"

namespace schro {

// One eigenpair of the discrete operator. phi is L2-normalized (trapezoid)
// with the first extremum positive; index is 1-based.
struct EigenPair {
    int index = 0;
    double lambda = 0.0;
    std::vector<double> phi;
};

// Lowest-N eigenbasis of -d2/dx2 + q on a grid.
struct SpectralBasis {
    GridPtr grid;
    PotentialSpec potential;
    std::vector<EigenPair> pairs;
    std::uint64_t fingerprint = 0;

    std::size_t n_modes() const { return pairs.size(); }
    double lambda(std::size_t n) const { return pairs[n].lambda; }  // 0-based
    double lambda_max() const { return pairs.empty() ? 0.0 : pairs.back().lambda; }
    // Largest off-diagonal Gram entry |<phi_m, phi_n>|, m != n.
    double gram_defect() const;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

// n_modes smallest eigenpairs. Eigenvalues by Sturm-count bisection refined
// to relative width 1e-12; eigenvectors by inverse iteration (at most 5
// solves, residual <= 1e-10 relative to the matrix scale), re-orthogonalized
// against earlier modes when the eigenvalue gap drops below 1e-6 * lambda.
std::vector<EigenPair> solve_eigen(const OperatorMatrix& matrix, std::size_t n_modes,
                                   Exec exec = Exec::Parallel);
std::vector<EigenPair> solve_eigen_serial(const OperatorMatrix& matrix, std::size_t n_modes);

// assemble + solve_eigen + normalization, with the accuracy guard
// n_modes <= m/16 and a fingerprint of the inputs for cache keying.
SpectralBasis build_basis(const PotentialSpec& potential, GridPtr grid, std::size_t n_modes,
                          Exec exec = Exec::Parallel);
BasisPtr build_basis_ptr(const PotentialSpec& potential, GridPtr grid, std::size_t n_modes,
                         Exec exec = Exec::Parallel);

// Checks of the spectral asymptotics: lambda_n / (pi n)^2 ratios, L2
// distances to sqrt(2) sin(n pi x), and the fitted envelope constant C in
// |ratio_n - 1| <= C/n over the lower half of the computed modes.
struct AsymptoticsReport {
    std::vector<double> lambda_ratios;       // lambda_n / (pi n)^2
    std::vector<double> eigfun_distances;    // ||phi_n - sqrt2 sin(n pi .)||_L2
    double envelope_C = 0.0;                 // max over reliable range of n*|ratio-1|
    double fitted_C = 0.0;                   // least-squares fit of |ratio-1| ~ C/n
    std::size_t reliable_modes = 0;
};

AsymptoticsReport asymptotics_report(const SpectralBasis& basis);

// FNV-1a over raw bytes; used for basis fingerprints and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace schro
