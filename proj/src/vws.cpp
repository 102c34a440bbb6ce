#include "schro/vws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {

constexpr double kExponentMatchTol = 0.1;
constexpr double kSlopeMargin = 0.5;  // uniqueness verdict: slope >= order - margin

double space_shape(const std::string& name, double x) {
    if (name == "sine") return std::sin(std::numbers::pi * x);
    if (name == "constant") return 1.0;
    if (name == "zero") return 0.0;
    throw invalid_input("unknown perturbation shape: " + name);
}

// primitive of the space shape, for perturbing weak potentials through nu
double space_shape_primitive(const std::string& name, double x) {
    if (name == "sine") return (1.0 - std::cos(std::numbers::pi * x)) / std::numbers::pi;
    if (name == "constant") return x;
    if (name == "zero") return 0.0;
    throw invalid_input("unknown perturbation shape: " + name);
}

double time_shape(const std::string& name, double t, double t_end) {
    if (name == "sine") return std::sin(std::numbers::pi * t / t_end);
    if (name == "constant") return 1.0;
    if (name == "zero") return 0.0;
    throw invalid_input("unknown perturbation shape: " + name);
}

// direct (unregularized) sample of a time-coefficient spec
double time_direct_sample(const NetSpec& spec, double t) {
    switch (spec.kind) {
        case NetSpec::Kind::TimeConstant:
            return spec.value;
        case NetSpec::Kind::TimeJump:
            return (t >= spec.x0) ? spec.value2 : spec.value;
        case NetSpec::Kind::TimeFunction:
            return spec.sample(t);
        default:
            throw invalid_input("time coefficient spec expected");
    }
}

struct MemberPerturbation {
    double amplitude = 0.0;  // eps^order
    std::string shape;
    bool on_q = false, on_a = false, on_u0 = false;
};

// The per-eps regularize -> assemble -> eigensolve -> evolve pipeline.
struct MemberSolve {
    double eps = 0.0;
    PotentialSpec pot;
    BasisPtr basis;
    TimeProfile a;
    SampledFunction u0;
    SpectralCoeffs d;
    EvolutionResult traj;
    bool clipped = false;
};

MemberSolve solve_member(const VwsConfig& cfg, double eps, GridPtr grid, const TimeGrid& tg,
                         const Mollifier& psi, const MemberPerturbation* tilde) {
    MemberSolve out;
    out.eps = eps;

    // potential
    if (cfg.potential.role == NetSpec::Role::PotentialNu) {
        std::vector<double> numid = mollify_nu_midpoints(cfg.potential, eps, *grid, psi);
        if (tilde && tilde->on_q) {
            for (std::size_t j = 0; j <= grid->m; ++j) {
                const double x = (static_cast<double>(j) + 0.5) * grid->h;
                numid[j] += tilde->amplitude * space_shape_primitive(tilde->shape, x);
            }
        }
        out.pot = PotentialSpec::weak_nu(*grid, std::move(numid), cfg.potential.label);
    } else {
        bool clip = false;
        SampledFunction qs = mollify_space(cfg.potential, eps, grid, psi, &clip);
        out.clipped = out.clipped || clip;
        std::vector<double> q(grid->m);
        for (std::size_t i = 0; i < grid->m; ++i) q[i] = qs.values[i].real();
        if (tilde && tilde->on_q) {
            for (std::size_t i = 0; i < grid->m; ++i)
                q[i] += tilde->amplitude * space_shape(tilde->shape, grid->nodes[i]);
        }
        out.pot = PotentialSpec::direct_q(*grid, std::move(q), cfg.potential.label);
    }

    // coefficient a
    TimeProfile a = mollify_time(cfg.a, eps, tg, cfg.a_floor, psi);
    if (tilde && tilde->on_a) {
        std::vector<double> av = a.a_values;
        for (std::size_t j = 0; j < av.size(); ++j)
            av[j] += tilde->amplitude * time_shape(tilde->shape, tg.times[j], tg.t_end);
        a = TimeProfile(tg, std::move(av), cfg.a_floor);
    }
    out.a = std::move(a);

    // initial datum
    bool clip_u0 = false;
    SampledFunction u0 = mollify_space(cfg.u0, eps, grid, psi, &clip_u0);
    out.clipped = out.clipped || clip_u0;
    if (tilde && tilde->on_u0) {
        for (std::size_t i = 0; i < grid->m; ++i)
            u0.values[i] += tilde->amplitude * space_shape(tilde->shape, grid->nodes[i]);
    }
    out.u0 = std::move(u0);

    out.basis = build_basis_ptr(out.pot, grid, cfg.n_modes, Exec::Serial);
    out.d = analyze(out.u0, out.basis);

    EvolutionProblem p;
    p.basis = out.basis;
    p.s = cfg.s;
    p.a = out.a;
    p.u0 = out.d;
    out.traj = evolve_homogeneous(p, Exec::Serial);
    return out;
}

}  // namespace

void validate_vws_config(const VwsConfig& cfg) {
    if (cfg.epsilons.size() < 4)
        throw config_error("vws: the eps ladder needs at least 4 rungs");
    double eps_min = cfg.epsilons[0];
    for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
        if (!(cfg.epsilons[k] > 0.0)) throw config_error("vws: eps must be positive");
        if (k > 0 && !(cfg.epsilons[k] < cfg.epsilons[k - 1]))
            throw config_error("vws: the eps ladder must be strictly decreasing");
        eps_min = std::min(eps_min, cfg.epsilons[k]);
    }
    const double h = 1.0 / static_cast<double>(cfg.m + 1);
    if (h > eps_min / 8.0)
        throw config_error("vws: grid too coarse for the ladder; need h <= eps_min/8 = " +
                           std::to_string(eps_min / 8.0));
    if (cfg.n_modes > cfg.m / 16)
        throw config_error("vws: n_modes must not exceed m/16 = " + std::to_string(cfg.m / 16));
    if (!(cfg.a_floor > 0.0)) throw config_error("vws: a_floor must be positive");
    if (!(cfg.t_end > 0.0) || cfg.steps < 2) throw config_error("vws: bad time grid");
    validate_spec(cfg.potential, cfg.t_end);
    validate_spec(cfg.a, cfg.t_end);
    validate_spec(cfg.u0, cfg.t_end);
    if (cfg.potential.role != NetSpec::Role::PotentialQ &&
        cfg.potential.role != NetSpec::Role::PotentialNu)
        throw config_error("vws: potential spec must target the potential");
    if (cfg.a.role != NetSpec::Role::TimeCoefficient)
        throw config_error("vws: coefficient spec must target the time coefficient");
    if (cfg.u0.role != NetSpec::Role::InitialDatum)
        throw config_error("vws: u0 spec must target the initial datum");
}

namespace {

template <typename Fn>
void for_each_eps(const std::vector<double>& epsilons, Exec exec, Fn&& fn) {
    const std::int64_t n = static_cast<std::int64_t>(epsilons.size());
    std::vector<std::string> failures(epsilons.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < n; ++k) {
            try {
                fn(static_cast<std::size_t>(k));
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(k)] = e.what();
            }
        }
    } else {
        for (std::int64_t k = 0; k < n; ++k) {
            try {
                fn(static_cast<std::size_t>(k));
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(k)] = e.what();
            }
        }
    }
    for (std::size_t k = 0; k < failures.size(); ++k) {
        if (!failures[k].empty())
            throw numeric_error("eps=" + std::to_string(epsilons[k]) + ": " + failures[k]);
    }
}

double sup_time_coeff_norm(const EvolutionResult& traj) {
    double sup = 0.0;
    for (std::size_t j = 0; j < traj.timegrid.times.size(); ++j) {
        double sum = 0.0;
        for (std::size_t n = 0; n < traj.n_modes; ++n) sum += std::norm(traj.at(j, n));
        sup = std::max(sup, std::sqrt(sum));
    }
    return sup;
}

}  // namespace

ExistenceReport run_existence(const VwsConfig& cfg, Exec exec) {
    validate_vws_config(cfg);
    const Mollifier psi = make_mollifier(cfg.mollifier_resolution);
    GridPtr grid = Grid::make(cfg.m);
    const TimeGrid tg = TimeGrid::make(cfg.t_end, cfg.steps);

    ExistenceReport rep;
    rep.config_hash = cfg.config_hash;
    rep.seed = cfg.seed;
    rep.rows.resize(cfg.epsilons.size());

    for_each_eps(cfg.epsilons, exec, [&](std::size_t k) {
        const double eps = cfg.epsilons[k];
        MemberSolve ms = solve_member(cfg, eps, grid, tg, psi, nullptr);
        ExistenceRow& row = rep.rows[k];
        row.eps = eps;
        row.clipped = ms.clipped;
        row.u0_l2 = l2_norm(ms.u0);
        row.u0_w2s = sobolev_norm(ms.d, 2.0 * cfg.s);
        row.a_sup = ms.a.max_a();
        row.lambda_max = ms.basis->lambda_max();
        // The solution equals the datum at t = 0, where the full sampled norm
        // is available; later nodes carry the modal representation.
        row.sup_u = std::max(row.u0_l2, sup_time_coeff_norm(ms.traj));
        double sup_dtu = 0.0;
        for (std::size_t j = 0; j < tg.times.size(); ++j) {
            double sum = 0.0;
            for (std::size_t n = 0; n < ms.traj.n_modes; ++n) {
                const double lam_s = std::pow(ms.basis->pairs[n].lambda, cfg.s);
                sum += std::norm(lam_s * ms.a.a_values[j] * ms.traj.at(j, n));
            }
            sup_dtu = std::max(sup_dtu, std::sqrt(sum));
        }
        row.sup_dtu = sup_dtu;
    });

    std::vector<double> sup_u(rep.rows.size()), sup_dtu(rep.rows.size()),
        u0_l2(rep.rows.size()), u0_w2s(rep.rows.size());
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        sup_u[k] = rep.rows[k].sup_u;
        sup_dtu[k] = rep.rows[k].sup_dtu;
        u0_l2[k] = rep.rows[k].u0_l2;
        u0_w2s[k] = rep.rows[k].u0_w2s;
    }
    rep.fit_sup_u = fit_scaling_exponent(cfg.epsilons, sup_u);
    rep.fit_sup_dtu = fit_scaling_exponent(cfg.epsilons, sup_dtu);
    rep.fit_u0_l2 = fit_scaling_exponent(cfg.epsilons, u0_l2);
    rep.fit_u0_w2s = fit_scaling_exponent(cfg.epsilons, u0_w2s);

    rep.exponents_finite = std::isfinite(rep.fit_sup_u.N) && std::isfinite(rep.fit_sup_dtu.N);
    rep.exponents_match =
        std::abs(rep.fit_sup_u.N - rep.fit_u0_l2.N) <= kExponentMatchTol &&
        std::abs(rep.fit_sup_dtu.N - rep.fit_u0_w2s.N) <= kExponentMatchTol;
    rep.verdict = rep.exponents_finite && rep.exponents_match;
    return rep;
}

namespace {

// sup over time nodes of the physical-space L2 difference of two runs; data
// samples are used at t = 0, the modal representation afterwards.
double sup_physical_difference(const MemberSolve& base, const MemberSolve& tilde) {
    const Grid& grid = *base.basis->grid;
    const std::size_t nt = base.traj.timegrid.times.size();
    double sup = 0.0;
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.m; ++i)
            sum += std::norm(base.u0.values[i] - tilde.u0.values[i]);
        sup = std::sqrt(grid.h * sum);
    }
    for (std::size_t j = 1; j < nt; ++j) {
        SpectralCoeffs cb(base.d.basis,
                          std::vector<cplx>(base.traj.row(j).begin(), base.traj.row(j).end()));
        SpectralCoeffs ct(tilde.d.basis,
                          std::vector<cplx>(tilde.traj.row(j).begin(), tilde.traj.row(j).end()));
        const SampledFunction sb = synthesize_serial(cb);
        const SampledFunction st = synthesize_serial(ct);
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.m; ++i) sum += std::norm(sb.values[i] - st.values[i]);
        sup = std::max(sup, std::sqrt(grid.h * sum));
    }
    return sup;
}

}  // namespace

UniquenessReport run_uniqueness(const VwsConfig& cfg, Exec exec) {
    validate_vws_config(cfg);
    if (!cfg.perturbation) throw config_error("vws uniqueness: perturbation spec required");
    const PerturbationSpec& pert = *cfg.perturbation;
    if (!(pert.order >= 1.0)) throw config_error("vws uniqueness: order must be >= 1");
    if (!pert.on_q && !pert.on_a && !pert.on_u0)
        throw config_error("vws uniqueness: select at least one perturbation target");

    const Mollifier psi = make_mollifier(cfg.mollifier_resolution);
    GridPtr grid = Grid::make(cfg.m);
    const TimeGrid tg = TimeGrid::make(cfg.t_end, cfg.steps);

    UniquenessReport rep;
    rep.order = pert.order;
    rep.shape = pert.shape;
    rep.config_hash = cfg.config_hash;
    rep.seed = cfg.seed;

    struct Target {
        std::string name;
        bool q, a, u0;
    };
    std::vector<Target> targets;
    if (pert.on_q) targets.push_back({"q", true, false, false});
    if (pert.on_a) targets.push_back({"a", false, true, false});
    if (pert.on_u0) targets.push_back({"u0", false, false, true});
    if (static_cast<int>(pert.on_q) + static_cast<int>(pert.on_a) +
            static_cast<int>(pert.on_u0) > 1)
        targets.push_back({"joint", pert.on_q, pert.on_a, pert.on_u0});

    // baselines are shared by every study
    std::vector<MemberSolve> baseline(cfg.epsilons.size());
    for_each_eps(cfg.epsilons, exec, [&](std::size_t k) {
        baseline[k] = solve_member(cfg, cfg.epsilons[k], grid, tg, psi, nullptr);
    });

    for (const Target& target : targets) {
        UniquenessStudy study;
        study.target = target.name;
        study.eps = cfg.epsilons;
        study.sup_diff.resize(cfg.epsilons.size());

        for_each_eps(cfg.epsilons, exec, [&](std::size_t k) {
            const double eps = cfg.epsilons[k];
            MemberPerturbation mp;
            mp.amplitude = std::pow(eps, pert.order);
            mp.shape = pert.shape;
            mp.on_q = target.q;
            mp.on_a = target.a;
            mp.on_u0 = target.u0;
            const MemberSolve tilde = solve_member(cfg, eps, grid, tg, psi, &mp);
            study.sup_diff[k] = sup_physical_difference(baseline[k], tilde);
        });

        bool all_floor = true;
        for (double v : study.sup_diff) all_floor = all_floor && (v <= 1e-13);
        if (all_floor) {
            // identical inputs: negligible at machine precision
            study.fit.negligible_at_machine = true;
            study.fit.N = -std::numeric_limits<double>::infinity();
            study.fit.fit_quality = 1.0;
            study.decay_slope = std::numeric_limits<double>::infinity();
            study.verdict = true;
        } else {
            study.fit = fit_scaling_exponent(study.eps, study.sup_diff);
            study.decay_slope = -study.fit.N;
            // moderate factors may eat into the transferred order
            study.verdict = study.decay_slope >= pert.order - kSlopeMargin;
        }
        rep.studies.push_back(std::move(study));
    }

    rep.verdict = true;
    for (const UniquenessStudy& s : rep.studies) rep.verdict = rep.verdict && s.verdict;
    return rep;
}

ConsistencyReport run_consistency(const VwsConfig& cfg, Exec exec) {
    validate_vws_config(cfg);
    if (cfg.potential.kind != NetSpec::Kind::SmoothSample ||
        cfg.potential.role != NetSpec::Role::PotentialQ)
        throw config_error("vws consistency: the reference problem needs a bounded sampled q");
    if (cfg.u0.kind != NetSpec::Kind::SmoothSample)
        throw config_error("vws consistency: the reference problem needs a sampled u0");
    if (cfg.reference_refine < 1) throw config_error("vws consistency: refine factor must be >= 1");

    const Mollifier psi = make_mollifier(cfg.mollifier_resolution);
    GridPtr grid = Grid::make(cfg.m);
    const TimeGrid tg = TimeGrid::make(cfg.t_end, cfg.steps);

    // Reference: the unregularized classical problem on a refine-times finer
    // grid with refine-times more modes; coarse nodes embed into fine ones.
    const std::size_t refine = cfg.reference_refine;
    const std::size_t m_ref = refine * (cfg.m + 1) - 1;
    const std::size_t n_ref = refine * cfg.n_modes;
    GridPtr grid_ref = Grid::make(m_ref);

    std::vector<double> q_ref(m_ref);
    for (std::size_t i = 0; i < m_ref; ++i) q_ref[i] = cfg.potential.sample(grid_ref->nodes[i]);
    const PotentialSpec pot_ref =
        PotentialSpec::direct_q(*grid_ref, std::move(q_ref), cfg.potential.label);
    BasisPtr basis_ref = build_basis_ptr(pot_ref, grid_ref, n_ref, exec);

    std::vector<double> a_ref(tg.times.size());
    for (std::size_t j = 0; j < a_ref.size(); ++j)
        a_ref[j] = time_direct_sample(cfg.a, tg.times[j]);
    const TimeProfile a_profile(tg, std::move(a_ref), cfg.a_floor);

    std::vector<cplx> u0_ref_fine(m_ref);
    for (std::size_t i = 0; i < m_ref; ++i)
        u0_ref_fine[i] = cplx(cfg.u0.sample(grid_ref->nodes[i]), 0.0);
    const SampledFunction u0_ref(grid_ref, std::move(u0_ref_fine));
    const SpectralCoeffs d_ref = analyze(u0_ref, basis_ref);

    EvolutionProblem p_ref;
    p_ref.basis = basis_ref;
    p_ref.s = cfg.s;
    p_ref.a = a_profile;
    p_ref.u0 = d_ref;
    const EvolutionResult traj_ref = evolve_homogeneous(p_ref, exec);

    // reference eigenvectors restricted to the coarse nodes
    std::vector<double> phi_ref_coarse(n_ref * cfg.m);
    for (std::size_t n = 0; n < n_ref; ++n)
        for (std::size_t i = 0; i < cfg.m; ++i)
            phi_ref_coarse[n * cfg.m + i] = basis_ref->pairs[n].phi[(i + 1) * refine - 1];
    std::vector<cplx> u0_ref_coarse(cfg.m);
    for (std::size_t i = 0; i < cfg.m; ++i)
        u0_ref_coarse[i] = u0_ref.values[(i + 1) * refine - 1];

    ConsistencyReport rep;
    rep.config_hash = cfg.config_hash;
    rep.seed = cfg.seed;
    rep.reference_m = m_ref;
    rep.reference_modes = n_ref;
    {
        double sum = 0.0;
        for (const cplx& v : u0_ref_coarse) sum += std::norm(v);
        rep.u0_norm = std::sqrt(grid->h * sum);
    }
    rep.tol_abs = cfg.tol_consistency_rel * rep.u0_norm;
    rep.rows.resize(cfg.epsilons.size());

    const double h = grid->h;
    for_each_eps(cfg.epsilons, exec, [&](std::size_t k) {
        const double eps = cfg.epsilons[k];
        const MemberSolve ms = solve_member(cfg, eps, grid, tg, psi, nullptr);

        double sup_l2 = 0.0, sup_w1 = 0.0;
        std::vector<cplx> diff(cfg.m);
        const std::size_t nt = tg.times.size();
        for (std::size_t j = 0; j < nt; ++j) {
            if (j == 0) {
                for (std::size_t i = 0; i < cfg.m; ++i)
                    diff[i] = u0_ref_coarse[i] - ms.u0.values[i];
            } else {
                for (std::size_t i = 0; i < cfg.m; ++i) {
                    cplx ref(0.0, 0.0);
                    for (std::size_t n = 0; n < n_ref; ++n)
                        ref += traj_ref.at(j, n) * phi_ref_coarse[n * cfg.m + i];
                    cplx mem(0.0, 0.0);
                    for (std::size_t n = 0; n < cfg.n_modes; ++n)
                        mem += ms.traj.at(j, n) * ms.basis->pairs[n].phi[i];
                    diff[i] = ref - mem;
                }
            }
            double sum = 0.0;
            for (const cplx& v : diff) sum += std::norm(v);
            sup_l2 = std::max(sup_l2, std::sqrt(h * sum));
            const std::vector<cplx> dd = dx_centered(*grid, diff);
            double sumd = 0.0;
            for (const cplx& v : dd) sumd += std::norm(v);
            sup_w1 = std::max(sup_w1, std::sqrt(h * sumd));
        }
        rep.rows[k] = ConsistencyRow{eps, sup_l2, sup_w1};
    });

    std::vector<double> e_l2(rep.rows.size()), e_w1(rep.rows.size());
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        e_l2[k] = rep.rows[k].err_l2;
        e_w1[k] = rep.rows[k].err_w1;
    }
    rep.fit_l2 = fit_scaling_exponent(cfg.epsilons, e_l2);
    rep.fit_w1 = fit_scaling_exponent(cfg.epsilons, e_w1);

    rep.monotone = true;
    double e_max = 0.0;
    for (double v : e_l2) e_max = std::max(e_max, v);
    for (std::size_t k = 0; k + 1 < e_l2.size(); ++k)
        rep.monotone = rep.monotone && (e_l2[k + 1] < e_l2[k] + 1e-14 * std::max(1.0, e_max));
    rep.small_enough = e_l2.back() <= rep.tol_abs;
    rep.verdict = rep.monotone && rep.small_enough;
    return rep;
}

}  // namespace schro
