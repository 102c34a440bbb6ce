#include "schro/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schro/errors.hpp"

namespace schro {

namespace {

double raw_bump(double x) {
    const double t = 1.0 - x * x;
    return (t > 0.0) ? std::exp(-1.0 / t) : 0.0;
}

constexpr double kNormFloor = 1e-300;

}  // namespace

double Mollifier::operator()(double x) const { return normalization * raw_bump(x); }

double Mollifier::primitive(double z) const {
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    const double step = 2.0 / static_cast<double>(resolution);
    const double pos = (z + 1.0) / step;
    std::size_t idx = static_cast<std::size_t>(pos);
    if (idx >= resolution) idx = resolution - 1;
    const double frac = pos - static_cast<double>(idx);
    // linear interpolation of the stored cumulative trapezoid
    return cdf[idx] + frac * (cdf[idx + 1] - cdf[idx]);
}

Mollifier make_mollifier(std::size_t resolution) {
    if (resolution < 64) throw invalid_input("make_mollifier: resolution must be at least 64");
    Mollifier psi;
    psi.resolution = resolution;
    psi.profile.resize(resolution + 1);
    const double step = 2.0 / static_cast<double>(resolution);
    for (std::size_t i = 0; i <= resolution; ++i)
        psi.profile[i] = raw_bump(-1.0 + step * static_cast<double>(i));

    double mass = 0.0;
    for (std::size_t i = 0; i < resolution; ++i)
        mass += 0.5 * step * (psi.profile[i] + psi.profile[i + 1]);
    psi.normalization = 1.0 / mass;
    for (double& v : psi.profile) v *= psi.normalization;

    psi.cdf.assign(resolution + 1, 0.0);
    for (std::size_t i = 0; i < resolution; ++i)
        psi.cdf[i + 1] = psi.cdf[i] + 0.5 * step * (psi.profile[i] + psi.profile[i + 1]);
    psi.cdf.back() = 1.0;

    psi.psi0 = psi.normalization * std::exp(-1.0);
    return psi;
}

void validate_spec(const NetSpec& spec, double t_end) {
    using Kind = NetSpec::Kind;
    using Role = NetSpec::Role;
    const bool time_role = spec.role == Role::TimeCoefficient;
    const bool time_kind =
        spec.kind == Kind::TimeConstant || spec.kind == Kind::TimeJump || spec.kind == Kind::TimeFunction;
    if (time_role != time_kind)
        throw invalid_input("NetSpec: time kinds and the time-coefficient role must pair up");

    if (spec.kind == Kind::Delta || spec.kind == Kind::HeavisideNu || spec.kind == Kind::PowerNu) {
        if (!(spec.x0 > 0.0 && spec.x0 < 1.0))
            throw invalid_input("NetSpec: x0 must lie inside (0,1)");
    }
    if (spec.kind == Kind::TimeJump) {
        if (!(spec.x0 > 0.0 && spec.x0 < t_end))
            throw invalid_input("NetSpec: jump time must lie inside (0,T)");
    }
    if (spec.kind == Kind::PowerNu) {
        if (!(spec.alpha > 0.0 && spec.alpha < 0.5))
            throw invalid_input("NetSpec: PowerNu needs alpha in (0, 1/2)");
        if (spec.role != Role::PotentialNu)
            throw invalid_input("NetSpec: PowerNu is only available as a weak potential");
    }
    if (spec.kind == Kind::HeavisideNu && spec.role != Role::PotentialNu)
        throw invalid_input("NetSpec: HeavisideNu is only available as a weak potential");
    if ((spec.kind == Kind::SmoothSample || spec.kind == Kind::TimeFunction) && !spec.sample)
        throw invalid_input("NetSpec: sampled kinds need a sample callable");
    if (spec.kind == Kind::Delta && spec.role == Role::PotentialNu)
        throw invalid_input("NetSpec: delta potentials enter weakly through HeavisideNu");
}

std::vector<double> default_epsilons(int j_min, int j_max) {
    std::vector<double> eps;
    for (int j = j_min; j <= j_max; ++j) eps.push_back(std::pow(2.0, -j));
    return eps;
}

namespace {

// z-quadrature resolution for convolutions evaluated off the grid; the bump
// is smooth with flat ends, so the trapezoid/midpoint sums converge faster
// than any power and 512 cells are already at rounding level.
constexpr std::size_t kConvResolution = 512;

// nu for the weak kinds, evaluated anywhere. HeavisideNu mollifies the pure
// jump (constant continuation at both ends), which keeps nu_eps monotone and
// the induced weak potential nonnegative. PowerNu mollifies the
// zero-extension by a midpoint-rule convolution against the bump.
double nu_eps_value(const NetSpec& spec, double eps, double x, const Mollifier& psi) {
    if (spec.kind == NetSpec::Kind::HeavisideNu) return psi.primitive((x - spec.x0) / eps);
    // PowerNu
    const double dz = 2.0 / static_cast<double>(kConvResolution);
    // A sample landing on the singularity is clamped to the cell half-width,
    // the midpoint-rule value of the integrable cell average.
    const double d_floor = 0.5 * eps * dz;
    double sum = 0.0;
    for (std::size_t l = 0; l < kConvResolution; ++l) {
        const double z = -1.0 + dz * (static_cast<double>(l) + 0.5);
        const double y = x - eps * z;
        if (y <= 0.0 || y >= 1.0) continue;  // zero extension
        const double d = std::max(std::abs(y - spec.x0), d_floor);
        sum += psi(z) * std::pow(d, -spec.alpha);
    }
    return sum * dz;
}

}  // namespace

SampledFunction mollify_space(const NetSpec& spec, double eps, GridPtr grid,
                              const Mollifier& psi, bool* clipped) {
    if (!(eps > 0.0)) throw invalid_input("mollify: eps must be positive");
    validate_spec(spec, 1.0);
    const std::size_t m = grid->m;
    std::vector<cplx> out(m);
    bool clip = false;

    switch (spec.kind) {
        case NetSpec::Kind::Delta: {
            // closed-form convolution of the delta
            for (std::size_t i = 0; i < m; ++i)
                out[i] = cplx(psi.scaled(grid->nodes[i] - spec.x0, eps), 0.0);
            clip = (spec.x0 < eps) || (spec.x0 > 1.0 - eps);
            break;
        }
        case NetSpec::Kind::SmoothSample: {
            if (!spec.mollify_member) {
                for (std::size_t i = 0; i < m; ++i)
                    out[i] = cplx(spec.sample(grid->nodes[i]), 0.0);
                break;
            }
            // z-quadrature of the convolution against the zero extension;
            // sampling the callable off-grid keeps the quadrature error far
            // below the mollification error even at the ladder's smallest eps
            const double dz = 2.0 / static_cast<double>(kConvResolution);
            std::vector<double> w(kConvResolution + 1);
            for (std::size_t l = 0; l <= kConvResolution; ++l)
                w[l] = psi(-1.0 + dz * static_cast<double>(l)) * dz;
            w.front() *= 0.5;
            w.back() *= 0.5;
            for (std::size_t i = 0; i < m; ++i) {
                double sum = 0.0;
                for (std::size_t l = 0; l <= kConvResolution; ++l) {
                    const double y = grid->nodes[i] - eps * (-1.0 + dz * static_cast<double>(l));
                    if (y <= 0.0 || y >= 1.0) continue;  // zero extension
                    sum += w[l] * spec.sample(y);
                }
                out[i] = cplx(sum, 0.0);
            }
            clip = true;  // the zero extension is always felt within eps of the ends
            break;
        }
        case NetSpec::Kind::HeavisideNu:
        case NetSpec::Kind::PowerNu: {
            // member = the induced weak potential (nu_mid[i+1]-nu_mid[i])/h
            const std::vector<double> numid = mollify_nu_midpoints(spec, eps, *grid, psi);
            for (std::size_t i = 0; i < m; ++i)
                out[i] = cplx((numid[i + 1] - numid[i]) / grid->h, 0.0);
            clip = (spec.x0 < eps) || (spec.x0 > 1.0 - eps);
            break;
        }
        default:
            throw invalid_input("mollify_space: time kinds need mollify_time");
    }
    if (clipped) *clipped = clip;
    return SampledFunction(grid, std::move(out));
}

std::vector<double> mollify_nu_midpoints(const NetSpec& spec, double eps, const Grid& grid,
                                         const Mollifier& psi) {
    if (spec.kind != NetSpec::Kind::HeavisideNu && spec.kind != NetSpec::Kind::PowerNu)
        throw invalid_input("mollify_nu_midpoints: spec is not a weak potential");
    std::vector<double> numid(grid.m + 1);
    for (std::size_t j = 0; j <= grid.m; ++j) {
        const double x = (static_cast<double>(j) + 0.5) * grid.h;
        numid[j] = nu_eps_value(spec, eps, x, psi);
    }
    return numid;
}

TimeProfile mollify_time(const NetSpec& spec, double eps, const TimeGrid& tg, double a_floor,
                         const Mollifier& psi) {
    if (!(eps > 0.0)) throw invalid_input("mollify: eps must be positive");
    validate_spec(spec, tg.t_end);
    std::vector<double> a(tg.times.size());
    switch (spec.kind) {
        case NetSpec::Kind::TimeConstant:
            for (double& v : a) v = spec.value;
            break;
        case NetSpec::Kind::TimeJump:
            // mollification of the pure jump: constant continuation keeps
            // a_eps within [min, max] of the two levels
            for (std::size_t j = 0; j < a.size(); ++j)
                a[j] = spec.value +
                       (spec.value2 - spec.value) * psi.primitive((tg.times[j] - spec.x0) / eps);
            break;
        case NetSpec::Kind::TimeFunction:
            for (std::size_t j = 0; j < a.size(); ++j) a[j] = spec.sample(tg.times[j]);
            break;
        default:
            throw invalid_input("mollify_time: space kinds need mollify_space");
    }
    return TimeProfile(tg, std::move(a), a_floor);
}

RegularizedNet build_space_net(const NetSpec& spec, std::span<const double> epsilons,
                               GridPtr grid, const Mollifier& psi) {
    RegularizedNet net;
    net.spec = spec;
    net.epsilons.assign(epsilons.begin(), epsilons.end());
    net.members.resize(epsilons.size());
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        NetMember& mem = net.members[k];
        mem.eps = epsilons[k];
        mem.space = mollify_space(spec, mem.eps, grid, psi, &mem.boundary_clipped);
        if (spec.kind == NetSpec::Kind::HeavisideNu || spec.kind == NetSpec::Kind::PowerNu)
            mem.nu_mid = mollify_nu_midpoints(spec, mem.eps, *grid, psi);
    }
    return net;
}

RegularizedNet build_time_net(const NetSpec& spec, std::span<const double> epsilons,
                              const TimeGrid& tg, double a_floor, const Mollifier& psi) {
    RegularizedNet net;
    net.spec = spec;
    net.epsilons.assign(epsilons.begin(), epsilons.end());
    net.members.resize(epsilons.size());
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        NetMember& mem = net.members[k];
        mem.eps = epsilons[k];
        mem.time = mollify_time(spec, mem.eps, tg, a_floor, psi);
    }
    return net;
}

PotentialSpec member_potential(const NetSpec& spec, const NetMember& member, const Grid& grid) {
    if (spec.role == NetSpec::Role::PotentialNu)
        return PotentialSpec::weak_nu(grid, member.nu_mid, spec.label);
    if (spec.role != NetSpec::Role::PotentialQ)
        throw invalid_input("member_potential: member does not target the potential");
    std::vector<double> q(member.space.values.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = member.space.values[i].real();
    return PotentialSpec::direct_q(grid, std::move(q), spec.label);
}

double weak_potential_mass(const PotentialSpec& pot) {
    if (!pot.has_nu()) throw invalid_input("weak_potential_mass: no nu samples");
    return pot.nu_mid.back() - pot.nu_mid.front();
}

bool potential_part_psd(const PotentialSpec& pot) {
    if (pot.kind == PotentialSpec::Kind::DirectQ) {
        for (double v : pot.q)
            if (v < 0.0) return false;
        return true;
    }
    for (std::size_t i = 0; i + 1 < pot.nu_mid.size(); ++i)
        if (pot.nu_mid[i + 1] - pot.nu_mid[i] < 0.0) return false;
    return true;
}

ScalingFit fit_scaling_exponent(std::span<const double> epsilons, std::span<const double> norms) {
    if (epsilons.size() != norms.size())
        throw invalid_input("fit_scaling_exponent: size mismatch");
    if (epsilons.size() < 4) throw invalid_input("fit_scaling_exponent: need at least 4 points");
    for (double e : epsilons)
        if (!(e > 0.0)) throw invalid_input("fit_scaling_exponent: eps must be positive");

    ScalingFit fit;
    double min_norm = norms[0];
    for (double v : norms) min_norm = std::min(min_norm, v);
    if (min_norm <= kNormFloor) {
        fit.negligible_at_machine = true;
        fit.N = -std::numeric_limits<double>::infinity();
        fit.C = 0.0;
        fit.fit_quality = 1.0;
        return fit;
    }

    const std::size_t n = epsilons.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(1.0 / epsilons[i]);
        ys[i] = std::log(norms[i]);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.N = sxy / sxx;
    fit.C = std::exp(my - fit.N * mx);
    if (syy <= 1e-12 * std::max(1.0, my * my)) {
        // constant norms: a perfect eps^0 law
        fit.fit_quality = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double pred = my + fit.N * (xs[i] - mx);
            ss_res += (ys[i] - pred) * (ys[i] - pred);
        }
        fit.fit_quality = 1.0 - ss_res / syy;
    }
    fit.power_law = fit.fit_quality >= 0.98;
    return fit;
}

double member_norm(const NetMember& member, NormKind kind, const Grid* grid) {
    if (member.time.has_value()) {
        // time-role nets are measured in the sup norm
        return member.time->max_a();
    }
    switch (kind) {
        case NormKind::LInf:
            return sup_norm(std::span<const cplx>(member.space.values));
        case NormKind::L2:
            return l2_norm(member.space);
        case NormKind::H2Pair:
            return l2_norm(SampledFunction(
                member.space.grid, dxx_centered(*grid, member.space.values)));
    }
    return 0.0;
}

ScalingFit fit_net(const RegularizedNet& net, NormKind kind) {
    const Grid* grid = net.members.empty() || !net.members[0].space.grid
                           ? nullptr
                           : net.members[0].space.grid.get();
    std::vector<double> norms(net.members.size());
    if (kind == NormKind::H2Pair) {
        // Definition of H2-moderateness: fit both the L2 norm and the L2 norm
        // of the second derivative, return the larger slope.
        std::vector<double> base(net.members.size()), second(net.members.size());
        for (std::size_t k = 0; k < net.members.size(); ++k) {
            base[k] = member_norm(net.members[k], NormKind::L2, grid);
            second[k] = member_norm(net.members[k], NormKind::H2Pair, grid);
        }
        const ScalingFit f0 = fit_scaling_exponent(net.epsilons, base);
        const ScalingFit f2 = fit_scaling_exponent(net.epsilons, second);
        return (f2.N > f0.N) ? f2 : f0;
    }
    for (std::size_t k = 0; k < net.members.size(); ++k)
        norms[k] = member_norm(net.members[k], kind, grid);
    return fit_scaling_exponent(net.epsilons, norms);
}

}  // namespace schro
