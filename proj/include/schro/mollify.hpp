#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schro/grid.hpp"
#include "schro/potential.hpp"

namespace schro {

// Friedrichs mollifier: the standard bump exp(-1/(1-x^2)) on (-1,1),
// normalized so its integral is 1 (recomputed by trapezoid on the stored
// profile). psi_eps(x) = psi(x/eps)/eps.
struct Mollifier {
    std::size_t resolution = 0;        // intervals on [-1,1]
    std::vector<double> profile;       // normalized psi at resolution+1 points
    std::vector<double> cdf;           // cumulative integral at the same points
    double normalization = 0.0;        // multiplies the raw bump
    double psi0 = 0.0;                 // psi(0)

    double operator()(double x) const;     // psi(x), closed form
    double primitive(double z) const;      // integral of psi over (-inf, z]
    double scaled(double x, double eps) const { return (*this)(x / eps) / eps; }
};

Mollifier make_mollifier(std::size_t resolution = 2048);

// Symbolic catalogue of distributions/coefficients a net can regularize.
struct NetSpec {
    enum class Kind {
        Delta,         // delta at x0; roles: potential-q or initial datum
        HeavisideNu,   // nu = jump 0 -> 1 at x0, i.e. q = delta_{x0} weakly
        PowerNu,       // nu = |x-x0|^{-alpha}, 0 < alpha < 1/2
        SmoothSample,  // bounded function given by a callable
        TimeConstant,  // a(t) = value
        TimeJump,      // a jumps from value to value2 at time x0
        TimeFunction   // smooth a(t) given by a callable (never mollified)
    };
    enum class Role { PotentialQ, PotentialNu, InitialDatum, TimeCoefficient };

    Kind kind = Kind::SmoothSample;
    Role role = Role::InitialDatum;
    double x0 = 0.5;                           // location (space) or jump time
    double alpha = 0.0;                        // PowerNu exponent
    double value = 1.0;                        // TimeConstant level / TimeJump left level
    double value2 = 1.0;                       // TimeJump right level
    std::function<double(double)> sample;      // SmoothSample / TimeFunction
    bool mollify_member = true;                // false: members are eps-independent
    std::string label;
};

void validate_spec(const NetSpec& spec, double t_end);

// One regularized member. Space roles fill `space` (for PotentialNu this is
// the induced weak potential (nu_mid[i+1]-nu_mid[i])/h, the object whose
// norms the moderateness definitions address) and `nu_mid` carries what the
// weak assembly consumes. The time role fills `time`.
struct NetMember {
    double eps = 0.0;
    SampledFunction space;
    std::vector<double> nu_mid;
    std::optional<TimeProfile> time;
    bool boundary_clipped = false;
};

struct RegularizedNet {
    NetSpec spec;
    std::vector<double> epsilons;
    std::vector<NetMember> members;
};

// Default ladder 2^-j for j in [j_min, j_max].
std::vector<double> default_epsilons(int j_min = 3, int j_max = 10);

SampledFunction mollify_space(const NetSpec& spec, double eps, GridPtr grid,
                              const Mollifier& psi, bool* clipped = nullptr);
std::vector<double> mollify_nu_midpoints(const NetSpec& spec, double eps, const Grid& grid,
                                         const Mollifier& psi);
TimeProfile mollify_time(const NetSpec& spec, double eps, const TimeGrid& tg, double a_floor,
                         const Mollifier& psi);

RegularizedNet build_space_net(const NetSpec& spec, std::span<const double> epsilons,
                               GridPtr grid, const Mollifier& psi);
RegularizedNet build_time_net(const NetSpec& spec, std::span<const double> epsilons,
                              const TimeGrid& tg, double a_floor, const Mollifier& psi);

// PotentialSpec for one member, ready for assembly.
PotentialSpec member_potential(const NetSpec& spec, const NetMember& member, const Grid& grid);

// Total mass the assembled weak potential applies to the constant test
// vector: telescopes to nu_mid[m] - nu_mid[0].
double weak_potential_mass(const PotentialSpec& pot);

// True when the (diagonal) weak potential part is positive semidefinite.
bool potential_part_psd(const PotentialSpec& pot);

// Log-log regression of member norms against eps.
enum class NormKind { LInf, L2, H2Pair };

struct ScalingFit {
    double C = 0.0;            // intercept exp(c) of log(norm) = c + N log(1/eps)
    double N = 0.0;            // moderateness exponent (negative: negligibility order)
    double fit_quality = 0.0;  // coefficient of determination
    bool negligible_at_machine = false;  // every norm below the floating floor
    bool power_law = true;     // fit_quality >= 0.98
};

ScalingFit fit_scaling_exponent(std::span<const double> epsilons, std::span<const double> norms);
ScalingFit fit_net(const RegularizedNet& net, NormKind kind);
double member_norm(const NetMember& member, NormKind kind, const Grid* grid);

}  // namespace schro
