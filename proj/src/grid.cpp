#include "schro/grid.hpp"

#include <algorithm>
#include <cmath>

#include "schro/errors.hpp"

namespace schro {

std::shared_ptr<const Grid> Grid::make(std::size_t m) {
    if (m == 0) throw invalid_input("Grid: need at least one interior node");
    auto g = std::make_shared<Grid>();
    g->m = m;
    g->h = 1.0 / static_cast<double>(m + 1);
    g->nodes.resize(m);
    for (std::size_t i = 0; i < m; ++i) g->nodes[i] = static_cast<double>(i + 1) * g->h;
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    return a.m == b.m && a.h == b.h;
}

SampledFunction::SampledFunction(GridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw invalid_input("SampledFunction: null grid");
    if (values.size() != grid->m)
        throw invalid_input("SampledFunction: values.length must equal grid.m");
}

SampledFunction SampledFunction::zero(GridPtr g) {
    std::vector<cplx> v(g->m, cplx(0.0, 0.0));
    return SampledFunction(std::move(g), std::move(v));
}

SampledFunction SampledFunction::from_real(GridPtr g, std::span<const double> v) {
    if (v.size() != g->m) throw invalid_input("SampledFunction: size mismatch");
    std::vector<cplx> c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = cplx(v[i], 0.0);
    return SampledFunction(std::move(g), std::move(c));
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.m) throw invalid_input("trapezoid: size mismatch");
    double sum = 0.0;
    for (double v : values) sum += v;
    return grid.h * sum;  // endpoint terms vanish by the Dirichlet convention
}

cplx trapezoid_integrate(const SampledFunction& f) {
    if (!f.grid || f.grid->m == 0) throw invalid_input("trapezoid_integrate: empty grid");
    cplx sum(0.0, 0.0);
    for (const cplx& v : f.values) sum += v;
    return f.grid->h * sum;
}

cplx inner_product(const SampledFunction& f, const SampledFunction& g) {
    if (!f.grid || !g.grid || !same_grid(*f.grid, *g.grid))
        throw invalid_input("inner_product: grid mismatch");
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) sum += f.values[i] * std::conj(g.values[i]);
    return f.grid->h * sum;
}

double l2_norm(const SampledFunction& f) {
    double sum = 0.0;
    for (const cplx& v : f.values) sum += std::norm(v);
    return std::sqrt(f.grid->h * sum);
}

double l2_norm(const Grid& grid, std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(grid.h * sum);
}

double sup_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(std::span<const cplx> values) {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<cplx> dx_centered(const Grid& grid, std::span<const cplx> values) {
    const std::size_t m = grid.m;
    if (values.size() != m) throw invalid_input("dx_centered: size mismatch");
    std::vector<cplx> d(m);
    const double inv2h = 1.0 / (2.0 * grid.h);
    for (std::size_t i = 0; i < m; ++i) {
        const cplx left = (i == 0) ? cplx(0.0) : values[i - 1];
        const cplx right = (i + 1 == m) ? cplx(0.0) : values[i + 1];
        d[i] = (right - left) * inv2h;
    }
    return d;
}

std::vector<cplx> dxx_centered(const Grid& grid, std::span<const cplx> values) {
    const std::size_t m = grid.m;
    if (values.size() != m) throw invalid_input("dxx_centered: size mismatch");
    std::vector<cplx> d(m);
    const double invh2 = 1.0 / (grid.h * grid.h);
    for (std::size_t i = 0; i < m; ++i) {
        const cplx left = (i == 0) ? cplx(0.0) : values[i - 1];
        const cplx right = (i + 1 == m) ? cplx(0.0) : values[i + 1];
        d[i] = (right - 2.0 * values[i] + left) * invh2;
    }
    return d;
}

std::vector<double> dxx_centered(const Grid& grid, std::span<const double> values) {
    const std::size_t m = grid.m;
    if (values.size() != m) throw invalid_input("dxx_centered: size mismatch");
    std::vector<double> d(m);
    const double invh2 = 1.0 / (grid.h * grid.h);
    for (std::size_t i = 0; i < m; ++i) {
        const double left = (i == 0) ? 0.0 : values[i - 1];
        const double right = (i + 1 == m) ? 0.0 : values[i + 1];
        d[i] = (right - 2.0 * values[i] + left) * invh2;
    }
    return d;
}

TimeGrid TimeGrid::make(double t_end, std::size_t steps) {
    if (t_end <= 0.0 || steps == 0) throw invalid_input("TimeGrid: need t_end > 0 and steps >= 1");
    TimeGrid tg;
    tg.t_end = t_end;
    tg.steps = steps;
    tg.times.resize(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j)
        tg.times[j] = t_end * static_cast<double>(j) / static_cast<double>(steps);
    tg.times.back() = t_end;
    return tg;
}

TimeProfile::TimeProfile(TimeGrid tg, std::vector<double> a, double floor)
    : timegrid(std::move(tg)), a_values(std::move(a)), a_floor(floor) {
    if (a_values.size() != timegrid.times.size())
        throw invalid_input("TimeProfile: a_values must be sampled on every time node");
    if (!(a_floor > 0.0)) throw invalid_input("TimeProfile: a_floor must be positive");
    *this = cumulative_phase(std::move(*this));
}

double TimeProfile::max_a() const {
    double m = 0.0;
    for (double v : a_values) m = std::max(m, std::abs(v));
    return m;
}

TimeProfile cumulative_phase(TimeProfile profile) {
    for (double v : profile.a_values) {
        if (v < profile.a_floor)
            throw invalid_input("cumulative_phase: coefficient drops below its floor a0 > 0");
    }
    const std::size_t n = profile.a_values.size();
    profile.phase.assign(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double dt = profile.timegrid.times[j] - profile.timegrid.times[j - 1];
        profile.phase[j] =
            profile.phase[j - 1] + 0.5 * dt * (profile.a_values[j] + profile.a_values[j - 1]);
    }
    return profile;
}

}  // namespace schro
