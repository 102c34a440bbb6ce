#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schro/grid.hpp"

namespace schro {

// Potential of the operator -d2/dx2 + q on (0,1).
//
// DirectQ: q >= 0 sampled at the interior nodes.
// WeakNu:  q = nu' understood distributionally; nu is sampled at the m+1
//          element midpoints (the quantity the weak assembly consumes).
//
// Smooth catalogue potentials may carry both representations, which lets
// estimate checks that need ||q||_inf and ||nu|| norms at the same time
// evaluate every line; otherwise those lines are reported "not evaluable".
struct PotentialSpec {
    enum class Kind { DirectQ, WeakNu };

    Kind kind = Kind::DirectQ;
    std::vector<double> q;       // size m (DirectQ, or auxiliary for WeakNu)
    std::vector<double> nu_mid;  // size m+1 (WeakNu, or auxiliary for DirectQ)
    std::string label;

    static PotentialSpec direct_q(const Grid& grid, std::vector<double> q_samples,
                                  std::string label = "direct_q");
    static PotentialSpec weak_nu(const Grid& grid, std::vector<double> nu_midpoints,
                                 std::string label = "weak_nu");

    bool has_q() const { return !q.empty(); }
    bool has_nu() const { return !nu_mid.empty(); }

    double q_sup() const;                    // ||q||_inf over samples
    double nu_sup() const;                   // ||nu||_inf over midpoint samples
    double nu_l2(const Grid& grid) const;    // ||nu||_L2 by midpoint rule
};

}  // namespace schro
