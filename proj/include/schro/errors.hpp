#pragma once

#include <stdexcept>
#include <string>

namespace schro {

// Configuration / validation problems. The CLI maps these to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments to library operations: grid mismatch, violated hypotheses
// (negative potential samples, non-positive propagation coefficient, ...).
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Numeric failures (non-convergent iteration, unresolvable oscillation).
// The CLI maps these to exit code 3. mode_index is -1 when not mode-specific.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what, int mode = -1)
        : std::runtime_error(what), mode_index(mode) {}
    int mode_index;
};

// Discretization guards: mode caps, step-refinement limits.
class resolution_error : public std::runtime_error {
public:
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schro
