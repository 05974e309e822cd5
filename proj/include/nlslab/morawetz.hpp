#pragma once

// Morawetz action, its rate decomposition, boundary flux, and the
// interaction Morawetz quantity, all reduced to radial quadratures.
//
// With v = r u and m(r) = Im(v̄ v_r)/r^2 (the radial density of
// Im(ū ∇u)), the action is
//
//   M(t) = 2 Im ∫ psi(x) x·[ū ∇u] dx = 8 pi ∫ psi(r) r Im(v̄ v_r) dr
//
// and its exact rate splits into a coercive bulk term, a boundary-flux
// term (positive: the outward normal of the exterior domain points
// toward the origin, so x·n = -r0 on the obstacle sphere), and two
// cutoff error terms.  The angular term vanishes identically on radial
// fields and is carried as 0.

#include "nlslab/cutoffs.hpp"
#include "nlslab/radial.hpp"
#include "nlslab/series.hpp"

namespace nlslab {

struct SimState {
    double t = 0.0;
    int step_index = 0;
    RadialField field;
};

double action(const SimState& s, const CutoffFamily& cf);

struct ActionTerms {
    double bulk = 0.0;          // 4 ∫ [phi |grad u|^2 - (3/4) phi1 |u|^4]
    double boundary = 0.0;      // +2 r0 psi(r0) * flux
    double angular = 0.0;       // 4 ∫ (psi-phi) |angular grad u|^2 == 0 (radial)
    double quartic_err = 0.0;   // -∫ [3(phi-phi1)+2(psi-phi)] |u|^4
    double gradient_err = 0.0;  // ∫ grad[3phi+2(psi-phi)] · grad |u|^2
    double sum() const { return bulk + boundary + angular + quartic_err + gradient_err; }
};

ActionTerms action_rate_terms(const SimState& s, const CutoffFamily& cf);

/// ∫_{∂Ω} |∂_n u|^2 dS = 4 pi |v_r(r0)|^2, with one-sided second-order
/// differencing through v(r0) = 0.  Throws in free-space mode.
double boundary_flux(const SimState& s);

/// Best (largest) time-average of the flux over windows of length T0,
/// trapezoid in time over the sampled rows.  Throws if the series span
/// is shorter than T0.
double local_smoothing_average(const TimeSeries& series, double t0);

/// Interaction Morawetz
///   M_R(t) = 8 pi^2 ∬ m(r) |u|^2(s) s K(r,s) dr ds,
///   K(r,s) = (r^2-s^2)[P0(r+s)-P0(|r-s|)] + [P2(r+s)-P2(|r-s|)]
/// via the tabulated primitives (O(n^2)).
double interaction(const SimState& s, const CutoffFamily& cf);

/// Radial component of the Galilean parameter at center 0:
///   xi0 = -∫ chi^2(r/R) Im(v̄ v_r) dr / ∫ chi^2(r/R) |v|^2 dr
/// (0 when the localized mass is below 1e-12).
double xi(const SimState& s, const CutoffFamily& cf);

/// V(t) = ∫ |x|^2 |u|^2 dx = 4 pi ∫ r^2 |v|^2 dr.
double virial_value(const RadialField& f);

/// Boundary term of the dyadic-R averaged Morawetz rate:
///   (1/J) ∫_{R0}^{e^J R0} 2 r0 psi_R(r0) dR/R  x  best windowed flux mean.
/// Trapezoid over nR log-spaced scales.  Exterior mode only.
double dyadic_flux_average(const TimeSeries& series, const CutoffFamily& unit_cf,
                           double r0_obstacle, double r_scale0, double j_decades,
                           int n_r, double t0);

/// Assembles the full diagnostic row for a state (sponge band geometry is
/// needed for the edge-amplitude column).
DiagnosticRow make_row(const SimState& s, const CutoffFamily& cf,
                       double sponge_start);

}  // namespace nlslab
