#pragma once

#include <vector>

#include "schro/eigensolve.hpp"
#include "schro/grid.hpp"
#include "schro/parallel.hpp"

namespace schro {

// Coefficient vector D_n against a specific SpectralBasis. Coefficients are
// never comparable across bases; ops check the fingerprint and refuse mixes.
struct SpectralCoeffs {
    BasisPtr basis;
    std::vector<cplx> coeffs;

    SpectralCoeffs() = default;
    SpectralCoeffs(BasisPtr b, std::vector<cplx> c);

    std::size_t size() const { return coeffs.size(); }
};

// D_n = <f, phi_n> for every basis mode.
SpectralCoeffs analyze(const SampledFunction& f, BasisPtr basis);

// Pointwise sum of D_n phi_n(x_i); linear in the coefficients.
SampledFunction synthesize(const SpectralCoeffs& c, Exec exec = Exec::Parallel);
SampledFunction synthesize_serial(const SpectralCoeffs& c);

// Spectral Sobolev norm (sum of lambda_n^k |D_n|^2)^(1/2). k = 0 is the
// plain coefficient l2 norm; k < 0 requires lambda_1 > 0.
double sobolev_norm(const SpectralCoeffs& c, double k);

// D_n -> lambda_n^s D_n.
SpectralCoeffs apply_operator_power(const SpectralCoeffs& c, double s);

// l2 norm of the raw coefficient vector.
double coeff_norm(const std::vector<cplx>& coeffs);

}  // namespace schro
