#pragma once

#include <string>
#include <vector>

#include "schro/config.hpp"
#include "schro/parallel.hpp"

namespace schro {

struct RunOutcome {
    int exit_code = 0;  // 0 pass, 1 verdict failure (2/3 are raised as exceptions)
    ordered_json manifest;
    std::vector<std::string> files;  // artifact paths written under out_dir
};

// Executes the configured command, writes every artifact atomically under
// cfg.out_dir, and returns the deterministic manifest (also written there as
// manifest.json). Throws config_error / numeric_error for the CLI to map to
// exit codes 2 / 3.
RunOutcome run(const RunConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace schro
