#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace schro {

using cplx = std::complex<double>;

// Uniform grid of m interior nodes on (0,1), spacing h = 1/(m+1).
// Boundary values at x = 0 and x = 1 are never stored: homogeneous Dirichlet
// conditions are structural.
struct Grid {
    std::size_t m = 0;
    double h = 0.0;
    std::vector<double> nodes;  // x_i = i*h, i = 1..m

    static std::shared_ptr<const Grid> make(std::size_t m);
};

using GridPtr = std::shared_ptr<const Grid>;

// Returns true when f and g live on grids of identical geometry.
bool same_grid(const Grid& a, const Grid& b);

// Complex-valued function sampled at the interior nodes of a Grid.
// values[i] corresponds to nodes[i]; the value at both endpoints is 0.
struct SampledFunction {
    GridPtr grid;
    std::vector<cplx> values;

    SampledFunction() = default;
    SampledFunction(GridPtr g, std::vector<cplx> v);
    static SampledFunction zero(GridPtr g);
    static SampledFunction from_real(GridPtr g, std::span<const double> v);

    std::size_t size() const { return values.size(); }
};

// Composite trapezoid over [0,1] with the zero boundary convention.
double trapezoid(const Grid& grid, std::span<const double> values);
cplx trapezoid_integrate(const SampledFunction& f);

// <f, g> = integral of f * conj(g) over (0,1), by trapezoid.
cplx inner_product(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);
double l2_norm(const Grid& grid, std::span<const double> values);
double sup_norm(std::span<const double> values);
double sup_norm(std::span<const cplx> values);

// Centered differences with the structural zero at both endpoints.
std::vector<cplx> dx_centered(const Grid& grid, std::span<const cplx> values);
std::vector<cplx> dxx_centered(const Grid& grid, std::span<const cplx> values);
std::vector<double> dxx_centered(const Grid& grid, std::span<const double> values);

// Uniform time grid on [0, t_end] with steps+1 nodes.
struct TimeGrid {
    double t_end = 0.0;
    std::size_t steps = 0;
    std::vector<double> times;  // t_j = j * t_end/steps, j = 0..steps

    static TimeGrid make(double t_end, std::size_t steps);
    double dt() const { return steps ? t_end / static_cast<double>(steps) : 0.0; }
};

// Sampled propagation coefficient a(t) >= a_floor > 0 together with its
// cumulative phase A(t_j) = integral of a over [0, t_j] (cumulative trapezoid).
struct TimeProfile {
    TimeGrid timegrid;
    std::vector<double> a_values;
    double a_floor = 0.0;
    std::vector<double> phase;

    // Validates positivity against a_floor and fills the phase.
    TimeProfile(TimeGrid tg, std::vector<double> a, double floor);
    TimeProfile() = default;

    double max_a() const;
};

// Recomputes the phase field by cumulative trapezoid. Idempotent; throws
// invalid_input if any sample drops below a_floor.
TimeProfile cumulative_phase(TimeProfile profile);

}  // namespace schro
