#pragma once

// Cutoff family for the Morawetz machinery:
//
//   chi  : smooth radial bump, 1 on [0, 1-eta], 0 beyond 1
//   phi  = (1/(w3 R^3)) chi^2(./R) * chi^2(./R)   (3D convolution)
//   phi1 = (1/(w3 R^3)) chi^2(./R) * chi^4(./R)
//   psi(r) = (1/r) ∫_0^r phi
//
// plus the primitives P0(W) = ∫_0^W psi w dw and P2(W) = ∫_0^W psi w^3 dw
// that reduce the interaction Morawetz double integral to table lookups.
//
// Everything is tabulated once at unit scale (R = 1) on rho in [0, 2] and
// rescaled on evaluation; beyond 2R, psi = C/r exactly (C = R ∫_0^2 phi)
// and the primitives continue analytically.

#include "nlslab/radial.hpp"

namespace nlslab {

struct CutoffFamily {
    double R = 0.0;
    double eta = 0.0;
    int n_tab = 0;

    // unit-scale tables; rho = r/R
    std::vector<double> rho;       // n_tab nodes on [0, 2]
    std::vector<double> chi_tab;   // chi on [0, 1] (n_tab nodes)
    std::vector<double> phi_tab;   // phi(rho)
    std::vector<double> phi1_tab;  // phi1(rho)
    std::vector<double> psi_tab;   // psi(rho)
    std::vector<double> p0_tab;    // ∫_0^rho psi s ds
    std::vector<double> p2_tab;    // ∫_0^rho psi s^3 ds
    double phi_integral = 0.0;     // C1 = ∫_0^2 phi(rho) drho

    /// chi at normalized radius (closed form, not the table).
    double chi(double rho_) const;

    // physical-radius evaluations (linear interpolation in the tables)
    double phi(double r) const;
    double phi1(double r) const;
    double psi(double r) const;  // C1*R/r beyond 2R
    double p0(double W) const;   // R^2 [ p0_u(W/R) ], analytic beyond 2R
    double p2(double W) const;   // R^4 [ p2_u(W/R) ], analytic beyond 2R

    /// chi_R of Lemma 4.1: 1 for r <= R/4, 0 for r >= R/2 (realized as
    /// chi(2r/R), whose plateau [0, (1-eta)R/2] contains [0, R/4]).
    double chi_ball_weight(double r) const { return chi(2.0 * r / R); }

    /// chi(r/R), the localization entering the Galilean parameter xi.
    double chi_loc(double r) const { return chi(r / R); }
};

/// Tabulates the family.  Requires R > 0, 0 < eta < 1/2, n_tab >= 256.
CutoffFamily build_cutoffs(double R, double eta, int n_tab);

/// sup over interior tabulated nodes of |r psi' - (phi - psi)| with psi'
/// by centered differences; the identity is exact in the continuum.
double gradient_identity_residual(const CutoffFamily& cf);

/// Pointwise product of f with chi_R centered at the origin.
RadialField chi_ball(const CutoffFamily& cf, const RadialField& f);

}  // namespace nlslab
