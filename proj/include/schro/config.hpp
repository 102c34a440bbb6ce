#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schro/report_io.hpp"
#include "schro/vws.hpp"

namespace schro {

// Validated, fully-defaulted run configuration. `effective` is the canonical
// echo of every parameter (including defaults) that goes into the manifest.
struct RunConfig {
    std::string command;  // eig | evolve | vws-existence | vws-uniqueness |
                          // vws-consistency | moderateness
    ordered_json effective;
    std::uint64_t config_hash = 0;

    // problem block
    ordered_json potential;  // descriptor object
    ordered_json a;
    ordered_json u0;
    ordered_json f;
    double s = 1.0;
    double t_end = 1.0;
    double a_floor = 0.5;

    // discretization block
    std::size_t m = 1999;
    std::size_t n_modes = 8;
    std::size_t steps = 400;

    // vws block
    std::vector<double> epsilons;
    std::optional<PerturbationSpec> perturbation;
    double tol_consistency_rel = 1e-3;
    std::size_t reference_refine = 2;
    std::size_t mollifier_resolution = 2048;

    // moderateness block: list of net descriptors
    std::vector<ordered_json> nets;

    // output block
    std::string out_dir = "out";
    bool emit_csv = true;
    bool emit_json = true;
    bool emit_svg = true;
    std::uint64_t seed = 20240101;
};

RunConfig parse_config_json(const ordered_json& input);
RunConfig parse_config(const std::string& path);

}  // namespace schro
