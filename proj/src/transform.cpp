#include "schro/transform.hpp"

#include <cmath>

#include "schro/errors.hpp"

namespace schro {

SpectralCoeffs::SpectralCoeffs(BasisPtr b, std::vector<cplx> c)
    : basis(std::move(b)), coeffs(std::move(c)) {
    if (!basis) throw invalid_input("SpectralCoeffs: null basis");
    if (coeffs.size() != basis->n_modes())
        throw invalid_input("SpectralCoeffs: coefficient count must match the basis");
}

SpectralCoeffs analyze(const SampledFunction& f, BasisPtr basis) {
    if (!f.grid || !same_grid(*f.grid, *basis->grid))
        throw invalid_input("analyze: function grid differs from the basis grid");
    const double h = basis->grid->h;
    std::vector<cplx> c(basis->n_modes());
    for (std::size_t n = 0; n < basis->n_modes(); ++n) {
        const auto& phi = basis->pairs[n].phi;
        cplx sum(0.0, 0.0);
        for (std::size_t i = 0; i < phi.size(); ++i) sum += f.values[i] * phi[i];
        c[n] = h * sum;
    }
    return SpectralCoeffs(basis, std::move(c));
}

namespace {

SampledFunction synthesize_impl(const SpectralCoeffs& c, bool parallel) {
    const SpectralBasis& basis = *c.basis;
    const std::size_t m = basis.grid->m;
    const std::size_t N = c.size();
    std::vector<cplx> out(m, cplx(0.0, 0.0));

    auto point = [&](std::size_t i) {
        cplx sum(0.0, 0.0);
        for (std::size_t n = 0; n < N; ++n) sum += c.coeffs[n] * basis.pairs[n].phi[i];
        return sum;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i)
            out[static_cast<std::size_t>(i)] = point(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < m; ++i) out[i] = point(i);
    }
    return SampledFunction(basis.grid, std::move(out));
}

void require_positive_spectrum(const SpectralBasis& basis, double exponent) {
    if (exponent < 0.0 && !(basis.pairs.front().lambda > 0.0))
        throw invalid_input("negative operator powers need lambda_1 > 0");
}

}  // namespace

SampledFunction synthesize(const SpectralCoeffs& c, Exec exec) {
    return synthesize_impl(c, exec == Exec::Parallel);
}

SampledFunction synthesize_serial(const SpectralCoeffs& c) {
    return synthesize_impl(c, false);
}

double sobolev_norm(const SpectralCoeffs& c, double k) {
    require_positive_spectrum(*c.basis, k);
    double sum = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double w = (k == 0.0) ? 1.0 : std::pow(c.basis->pairs[n].lambda, k);
        sum += w * std::norm(c.coeffs[n]);
    }
    return std::sqrt(sum);
}

SpectralCoeffs apply_operator_power(const SpectralCoeffs& c, double s) {
    require_positive_spectrum(*c.basis, s);
    std::vector<cplx> out(c.size());
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double w = (s == 0.0) ? 1.0 : std::pow(c.basis->pairs[n].lambda, s);
        out[n] = w * c.coeffs[n];
    }
    return SpectralCoeffs(c.basis, std::move(out));
}

double coeff_norm(const std::vector<cplx>& coeffs) {
    double sum = 0.0;
    for (const cplx& v : coeffs) sum += std::norm(v);
    return std::sqrt(sum);
}

}  // namespace schro
