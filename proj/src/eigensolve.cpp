#include "schro/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {

constexpr double kBisectRelTol = 1e-12;
constexpr double kResidualTol = 1e-10;   // relative to the matrix scale
constexpr double kOrthoGapTol = 1e-6;    // gap < tol * lambda triggers re-orthogonalization
constexpr int kMaxInverseIterations = 5;

struct Bounds {
    double lo, hi;
};

Bounds gershgorin(const OperatorMatrix& A) {
    double lo = A.diag[0], hi = A.diag[0];
    const std::size_t m = A.dim();
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(A.offdiag[i - 1]);
        if (i + 1 < m) r += std::abs(A.offdiag[i]);
        lo = std::min(lo, A.diag[i] - r);
        hi = std::max(hi, A.diag[i] + r);
    }
    return {lo, hi};
}

// k-th smallest eigenvalue (1-based) by bisection on the Sturm count.
double bisect_eigenvalue(const OperatorMatrix& A, int k, Bounds b) {
    double lo = b.lo, hi = b.hi;
    while (hi - lo > kBisectRelTol * std::max({std::abs(lo), std::abs(hi), 1.0})) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at rounding limit
        if (sturm_count(A, mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// LU factorization of (A - shift*I) with partial pivoting; row swaps add a
// second superdiagonal of fill-in.
struct TriLU {
    std::vector<double> low;  // multipliers, low[i] eliminates row i+1
    std::vector<double> d;    // diagonal of U
    std::vector<double> u1;   // first superdiagonal of U
    std::vector<double> u2;   // second superdiagonal of U
    std::vector<char> swapped;
};

TriLU factor_shifted(const OperatorMatrix& A, double shift) {
    const std::size_t n = A.dim();
    TriLU f;
    f.low.assign(n, 0.0);
    f.d.assign(n, 0.0);
    f.u1.assign(n, 0.0);
    f.u2.assign(n, 0.0);
    f.swapped.assign(n, 0);

    std::vector<double> d(n), du(n, 0.0), dl(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = A.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        du[i] = A.offdiag[i];
        dl[i] = A.offdiag[i];  // subdiagonal entry eliminated at step i
    }

    const double tiny = std::numeric_limits<double>::min() * std::max(1.0, A.norm_bound());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            double piv = d[i];
            if (std::abs(piv) < tiny) piv = (piv < 0.0) ? -tiny : tiny;
            d[i] = piv;
            const double fact = dl[i] / piv;
            f.low[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            f.low[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < n) {
                f.u2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            f.swapped[i] = 1;
        }
        f.d[i] = d[i];
        f.u1[i] = du[i];
    }
    double last = d[n - 1];
    if (std::abs(last) < tiny) last = (last < 0.0) ? -tiny : tiny;
    f.d[n - 1] = last;
    return f;
}

void solve_lu(const TriLU& f, std::vector<double>& x) {
    const std::size_t n = f.d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (f.swapped[i]) std::swap(x[i], x[i + 1]);
        x[i + 1] -= f.low[i] * x[i];
    }
    x[n - 1] /= f.d[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - f.u1[n - 2] * x[n - 1]) / f.d[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;)
        x[ii] = (x[ii] - f.u1[ii] * x[ii + 1] - f.u2[ii] * x[ii + 2]) / f.d[ii];
}

// Deterministic pseudo-random start; a per-mode LCG avoids symmetric starts
// that would be orthogonal to the target eigenvector.
std::vector<double> start_vector(std::size_t m, int mode_index) {
    std::uint64_t state =
        0x9e3779b97f4a7c15ULL ^ (0x100000001b3ULL * static_cast<std::uint64_t>(mode_index + 1));
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
    }
    return v;
}

double residual_norm(const OperatorMatrix& A, double lambda, const std::vector<double>& v) {
    const std::size_t m = A.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = (A.diag[i] - lambda) * v[i];
        if (i > 0) r += A.offdiag[i - 1] * v[i - 1];
        if (i + 1 < m) r += A.offdiag[i] * v[i + 1];
        s += r * r;
    }
    return std::sqrt(s);
}

EigenPair compute_pair(const OperatorMatrix& A, int mode_1based, Bounds bounds, double h) {
    EigenPair p;
    p.index = mode_1based;
    p.lambda = bisect_eigenvalue(A, mode_1based, bounds);

    const std::size_t m = A.dim();
    const double scale = std::max(1.0, A.norm_bound());
    const TriLU lu = factor_shifted(A, p.lambda);
    std::vector<double> v = start_vector(m, mode_1based);
    bool converged = false;
    for (int it = 0; it < kMaxInverseIterations; ++it) {
        solve_lu(lu, v);
        const double mx = sup_norm(std::span<const double>(v));
        if (!(mx > 0.0) || !std::isfinite(mx))
            throw numeric_error("inverse iteration produced a degenerate vector", mode_1based);
        for (double& x : v) x /= mx;
        double n2 = 0.0;
        for (double x : v) n2 += x * x;
        n2 = std::sqrt(n2);
        for (double& x : v) x /= n2;
        if (residual_norm(A, p.lambda, v) <= kResidualTol * scale) {
            converged = true;
            break;
        }
    }
    if (!converged) throw numeric_error("inverse iteration failed to converge", mode_1based);

    // L2 normalization (trapezoid) and the sign convention: the first local
    // extremum of |phi| is made positive.
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    const double inv = 1.0 / std::sqrt(h * n2);
    for (double& x : v) x *= inv;
    const double peak = sup_norm(std::span<const double>(v));
    for (std::size_t i = 0; i < m; ++i) {
        const double prev = (i == 0) ? 0.0 : std::abs(v[i - 1]);
        const double next = (i + 1 == m) ? 0.0 : std::abs(v[i + 1]);
        const double cur = std::abs(v[i]);
        if (cur >= prev && cur >= next && cur > 0.1 * peak) {
            if (v[i] < 0.0)
                for (double& x : v) x = -x;
            break;
        }
    }
    p.phi = std::move(v);
    return p;
}

void reorthogonalize(std::vector<EigenPair>& pairs, double h) {
    for (std::size_t n = 1; n < pairs.size(); ++n) {
        const double gap = pairs[n].lambda - pairs[n - 1].lambda;
        if (gap < kOrthoGapTol * std::max(1.0, std::abs(pairs[n].lambda))) {
            for (std::size_t k = 0; k < n; ++k) {
                double dot = 0.0;
                for (std::size_t i = 0; i < pairs[n].phi.size(); ++i)
                    dot += pairs[n].phi[i] * pairs[k].phi[i];
                dot *= h;
                for (std::size_t i = 0; i < pairs[n].phi.size(); ++i)
                    pairs[n].phi[i] -= dot * pairs[k].phi[i];
            }
            double n2 = 0.0;
            for (double x : pairs[n].phi) n2 += x * x;
            n2 = std::sqrt(h * n2);
            if (!(n2 > 0.0))
                throw numeric_error("re-orthogonalization collapsed an eigenvector",
                                    pairs[n].index);
            for (double& x : pairs[n].phi) x /= n2;
        }
    }
}

std::vector<EigenPair> solve_impl(const OperatorMatrix& A, std::size_t n_modes, bool parallel) {
    if (n_modes > A.dim())
        throw invalid_input("solve_eigen: n_modes exceeds the matrix dimension");
    if (n_modes == 0) return {};
    const Bounds bounds = gershgorin(A);
    const double h = A.grid->h;

    std::vector<EigenPair> pairs(n_modes);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t n = 0; n < static_cast<std::int64_t>(n_modes); ++n)
            pairs[static_cast<std::size_t>(n)] =
                compute_pair(A, static_cast<int>(n) + 1, bounds, h);
    } else {
        for (std::size_t n = 0; n < n_modes; ++n)
            pairs[n] = compute_pair(A, static_cast<int>(n) + 1, bounds, h);
    }
    reorthogonalize(pairs, h);
    return pairs;
}

}  // namespace

std::vector<EigenPair> solve_eigen(const OperatorMatrix& matrix, std::size_t n_modes, Exec exec) {
    return solve_impl(matrix, n_modes, exec == Exec::Parallel);
}

std::vector<EigenPair> solve_eigen_serial(const OperatorMatrix& matrix, std::size_t n_modes) {
    return solve_impl(matrix, n_modes, false);
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= p[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

namespace {

std::uint64_t basis_fingerprint(const PotentialSpec& potential, const Grid& grid,
                                std::size_t n_modes) {
    std::uint64_t hash = fnv1a(&grid.m, sizeof(grid.m));
    hash = fnv1a(&n_modes, sizeof(n_modes), hash);
    const int kind = static_cast<int>(potential.kind);
    hash = fnv1a(&kind, sizeof(kind), hash);
    if (!potential.q.empty())
        hash = fnv1a(potential.q.data(), potential.q.size() * sizeof(double), hash);
    if (!potential.nu_mid.empty())
        hash = fnv1a(potential.nu_mid.data(), potential.nu_mid.size() * sizeof(double), hash);
    return hash;
}

}  // namespace

double SpectralBasis::gram_defect() const {
    double worst = 0.0;
    const double h = grid->h;
    for (std::size_t a = 0; a < pairs.size(); ++a) {
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < pairs[a].phi.size(); ++i)
                dot += pairs[a].phi[i] * pairs[b].phi[i];
            worst = std::max(worst, std::abs(h * dot));
        }
    }
    return worst;
}

SpectralBasis build_basis(const PotentialSpec& potential, GridPtr grid, std::size_t n_modes,
                          Exec exec) {
    const std::size_t cap = grid->m / 16;
    if (n_modes == 0) throw invalid_input("build_basis: need at least one mode");
    if (n_modes > cap)
        throw resolution_error("build_basis: n_modes must not exceed m/16 = " +
                               std::to_string(cap) + " on this grid");

    SpectralBasis basis;
    basis.grid = grid;
    basis.potential = potential;
    basis.pairs = solve_eigen(assemble(potential, grid), n_modes, exec);
    basis.fingerprint = basis_fingerprint(potential, *grid, n_modes);

    for (std::size_t n = 1; n < basis.pairs.size(); ++n) {
        if (!(basis.pairs[n].lambda > basis.pairs[n - 1].lambda))
            throw numeric_error("build_basis: eigenvalues are not strictly increasing",
                                static_cast<int>(n + 1));
    }
    return basis;
}

BasisPtr build_basis_ptr(const PotentialSpec& potential, GridPtr grid, std::size_t n_modes,
                         Exec exec) {
    return std::make_shared<const SpectralBasis>(build_basis(potential, grid, n_modes, exec));
}

AsymptoticsReport asymptotics_report(const SpectralBasis& basis) {
    if (basis.n_modes() < 4)
        throw invalid_input("asymptotics_report: need at least 4 modes");
    const double pi = std::numbers::pi;
    AsymptoticsReport rep;
    const std::size_t N = basis.n_modes();
    rep.lambda_ratios.resize(N);
    rep.eigfun_distances.resize(N);

    const Grid& grid = *basis.grid;
    for (std::size_t n = 0; n < N; ++n) {
        const double k = pi * static_cast<double>(n + 1);
        rep.lambda_ratios[n] = basis.pairs[n].lambda / (k * k);
        double s = 0.0;
        for (std::size_t i = 0; i < grid.m; ++i) {
            const double d = basis.pairs[n].phi[i] - std::sqrt(2.0) * std::sin(k * grid.nodes[i]);
            s += d * d;
        }
        rep.eigfun_distances[n] = std::sqrt(grid.h * s);
    }

    rep.reliable_modes = std::max<std::size_t>(2, N / 2);
    double num = 0.0, den = 0.0, env = 0.0;
    for (std::size_t n = 0; n < rep.reliable_modes; ++n) {
        const double x = 1.0 / static_cast<double>(n + 1);
        const double y = std::abs(rep.lambda_ratios[n] - 1.0);
        num += x * y;
        den += x * x;
        env = std::max(env, y * static_cast<double>(n + 1));
    }
    rep.fitted_C = (den > 0.0) ? num / den : 0.0;
    rep.envelope_C = env;
    return rep;
}

}  // namespace schro
