#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schro/evolution.hpp"
#include "schro/mollify.hpp"
#include "schro/parallel.hpp"

namespace schro {

// Perturbation request for uniqueness runs: a tilde family offset by
// eps^order * shape in the selected data slots, separately and jointly.
struct PerturbationSpec {
    double order = 2.0;
    std::string shape = "sine";  // "sine" | "constant" | "zero"
    bool on_q = false;
    bool on_a = false;
    bool on_u0 = true;
};

struct VwsConfig {
    NetSpec potential;  // role PotentialQ or PotentialNu
    NetSpec a;          // time role
    NetSpec u0;         // initial datum
    double s = 1.0;
    double a_floor = 0.5;

    std::size_t m = 8191;
    std::size_t n_modes = 16;
    std::size_t steps = 400;
    double t_end = 1.0;
    std::vector<double> epsilons = default_epsilons();
    std::size_t mollifier_resolution = 2048;

    std::optional<PerturbationSpec> perturbation;

    double tol_consistency_rel = 1e-3;  // relative to ||u0||
    std::size_t reference_refine = 2;

    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

// Shared guards: h <= eps_min/8, n_modes within the m/16 cap, a_floor > 0.
void validate_vws_config(const VwsConfig& cfg);

struct ExistenceRow {
    double eps = 0.0;
    double u0_l2 = 0.0;    // data norm of the regularized initial datum
    double u0_w2s = 0.0;   // spectral W^{2s} norm in the eps-dependent basis
    double sup_u = 0.0;    // sup over time nodes of ||u_eps(t)||_{L2}
    double sup_dtu = 0.0;  // sup over time nodes of ||du_eps/dt||_{L2}
    double a_sup = 0.0;
    double lambda_max = 0.0;
    bool clipped = false;
};

struct ExistenceReport {
    std::vector<ExistenceRow> rows;
    ScalingFit fit_sup_u, fit_sup_dtu, fit_u0_l2, fit_u0_w2s;
    bool exponents_finite = false;
    bool exponents_match = false;  // solution exponents track data exponents to 0.1
    bool verdict = false;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

ExistenceReport run_existence(const VwsConfig& cfg, Exec exec = Exec::Parallel);

struct UniquenessStudy {
    std::string target;  // "q", "a", "u0", "joint"
    std::vector<double> eps;
    std::vector<double> sup_diff;
    ScalingFit fit;
    double decay_slope = 0.0;  // sup_diff ~ eps^decay_slope
    bool verdict = false;      // decay_slope >= order - 0.5
};

struct UniquenessReport {
    double order = 0.0;
    std::string shape;
    std::vector<UniquenessStudy> studies;
    bool verdict = false;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

UniquenessReport run_uniqueness(const VwsConfig& cfg, Exec exec = Exec::Parallel);

struct ConsistencyRow {
    double eps = 0.0;
    double err_l2 = 0.0;  // sup over time nodes of ||u - u_eps||_{L2}, common grid
    double err_w1 = 0.0;  // same for the first-difference seminorm (reported only)
};

struct ConsistencyReport {
    std::vector<ConsistencyRow> rows;
    ScalingFit fit_l2, fit_w1;
    double u0_norm = 0.0;
    double tol_abs = 0.0;
    std::size_t reference_m = 0;
    std::size_t reference_modes = 0;
    bool monotone = false;       // E(eps) strictly decreasing down the ladder
    bool small_enough = false;   // E(eps_min) <= tol
    bool verdict = false;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

ConsistencyReport run_consistency(const VwsConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace schro
