#pragma once

// Ground state Q of  -ΔQ + Q = Q^3  on R^3, computed by shooting on the
// reduced profile w(r) = r*Q(r):
//
//     w'' = w - w^3 / r^2,    w(0) = 0,  w'(0) = Q(0) = a.
//
// Shots with a below the critical slope drift toward the constant state
// u = 1 (w ~ r); shots above it cross zero.  Bisection on a pins the
// separatrix, and the exponentially decaying tail c*e^{-r} is grafted
// beyond the matching radius where bisection can no longer track it.

#include "nlslab/radial.hpp"

namespace nlslab {

enum class ShootOutcome { CrossesZero, StaysPositiveGrows, Decays };

struct ShootResult {
    ShootOutcome outcome;
    double r_event = 0.0;  // crossing/guard radius, or r_max when it survives
};

/// Integrates one shot with fixed-step RK4 (step = grid h) and classifies it.
ShootResult shoot(double a, const RadialGrid& grid);

struct GroundState {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> profile;   // w = r*Q
    std::vector<double> dprofile;  // w' carried by the ODE integration
    double a0 = 0.0;               // shooting slope w'(0) = Q(0)
    double match_radius = 0.0;     // start of the grafted e^{-r} tail
    NormSet norms;                 // computed from (profile, dprofile)

    /// The profile as a complex RadialField (v = w), e.g. for initial data.
    RadialField as_field(double scale = 1.0) const;
};

/// Bisects the shooting slope to width `tol` and assembles the profile.
/// Throws std::runtime_error("no sign change in shooting scan") if the
/// doubling scan a = 0.5, 1, 2, ... finds no bracket.
GroundState find_ground_state(double tol, std::shared_ptr<const RadialGrid> grid);

/// Pohozaev residuals |kinetic - 3 mass|/mass and |l4 - 4 mass|/mass.
std::pair<double, double> pohozaev_residuals(const GroundState& gs);

struct ThresholdConstants {
    double em_threshold = 0.0;  // E(Q) M(Q)
    double k_threshold = 0.0;   // ||grad Q||_2 ||Q||_2
    double gn_constant = 0.0;   // (4/3) / (||Q||_2 ||Q||_{H^1dot})
    double delta_prime = 0.0;   // coercivity margin, configured
    double rho = 0.0;           // coercivity constant rho(delta'), configured
};

ThresholdConstants thresholds(const GroundState& gs, double delta_prime = 0.1,
                              double rho = 0.01);

/// Sharp Gagliardo-Nirenberg ratio
///   ||f||_4^4 / [ gn_constant * ||f||_2 ||f||_{H^1dot} * ||f||_{H^1dot}^2 ]
/// (for radial f the Galilean infimum is attained at xi = 0).
/// The inequality asserts ratio <= 1, with equality on the Q family.
double gn_check(const RadialField& f, const ThresholdConstants& tc);

}  // namespace nlslab
