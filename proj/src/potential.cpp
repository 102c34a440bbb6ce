#include "schro/potential.hpp"

#include <cmath>

#include "schro/errors.hpp"

namespace schro {

PotentialSpec PotentialSpec::direct_q(const Grid& grid, std::vector<double> q_samples,
                                      std::string label) {
    if (q_samples.size() != grid.m)
        throw invalid_input("PotentialSpec: q must be sampled at the interior nodes");
    for (double v : q_samples) {
        if (v < 0.0 || !std::isfinite(v))
            throw invalid_input("PotentialSpec: direct potential requires q >= 0");
    }
    PotentialSpec p;
    p.kind = Kind::DirectQ;
    p.q = std::move(q_samples);
    p.label = std::move(label);
    return p;
}

PotentialSpec PotentialSpec::weak_nu(const Grid& grid, std::vector<double> nu_midpoints,
                                     std::string label) {
    if (nu_midpoints.size() != grid.m + 1)
        throw invalid_input("PotentialSpec: nu must be sampled at the m+1 element midpoints");
    for (double v : nu_midpoints) {
        if (!std::isfinite(v)) throw invalid_input("PotentialSpec: nu samples must be finite");
    }
    PotentialSpec p;
    p.kind = Kind::WeakNu;
    p.nu_mid = std::move(nu_midpoints);
    p.label = std::move(label);
    return p;
}

double PotentialSpec::q_sup() const {
    double m = 0.0;
    for (double v : q) m = std::max(m, std::abs(v));
    return m;
}

double PotentialSpec::nu_sup() const {
    double m = 0.0;
    for (double v : nu_mid) m = std::max(m, std::abs(v));
    return m;
}

double PotentialSpec::nu_l2(const Grid& grid) const {
    double sum = 0.0;
    for (double v : nu_mid) sum += v * v;
    return std::sqrt(grid.h * sum);
}

}  // namespace schro
