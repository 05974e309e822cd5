#pragma once

// Threshold classification, coercivity tracking, windowed space-time
// norms, the scattering criterion, and the virial diagnostic.

#include "nlslab/cutoffs.hpp"
#include "nlslab/ground_state.hpp"
#include "nlslab/radial.hpp"
#include "nlslab/series.hpp"

#include <map>
#include <optional>
#include <string>

namespace nlslab {

enum class InitialClass { Below, Above, NearThreshold };

struct ClassifyResult {
    InitialClass cls = InitialClass::NearThreshold;
    double em_margin = 0.0;  // 1 - E(f)M(f)/[E(Q)M(Q)]
    double k_margin = 0.0;   // 1 - ||f||_2 ||grad f||_2 / k_threshold
};

/// Below iff both threshold conditions hold with relative margin > 1e-6;
/// Above iff the kinetic-mass product is above threshold with margin;
/// NearThreshold otherwise.
ClassifyResult classify_initial(const RadialField& f, const ThresholdConstants& tc);

struct TrackResult {
    double max_product = 0.0;          // max_t ||u||_2 ||grad u||_2
    double delta_prime_empirical = 0.0;  // 1 - max_product / k_threshold
};

TrackResult kinetic_mass_track(const TimeSeries& series, const ThresholdConstants& tc);

/// (kinetic - (3/4) l4) / (kinetic + l4).  Requires the (1 - delta')
/// product bound; throws "hypothesis violated" otherwise.
double coercivity_check(const RadialField& f, const ThresholdConstants& tc);

struct LocalizedCoercivity {
    bool holds = true;
    double ratio = 1.0;  // (kinetic_g - (3/4) l4_g) / kinetic_g for g = chi_R f
};

LocalizedCoercivity localized_coercivity(const RadialField& f, const CutoffFamily& cf,
                                         const ThresholdConstants& tc);

/// (∫_{t1}^{t2} ||u||_p^p dt)^{1/p} over the sampled rows, p in {3,4,5,10}.
double windowed_norm(const TimeSeries& series, int p, double t1, double t2);

/// lhs = L^5 windowed norm, rhs = L^3^{3/7} L^10^{4/7}; Hoelder gives
/// lhs <= rhs exactly on the sampled measure.
std::pair<double, double> interpolation_l5(const TimeSeries& series, double t1,
                                           double t2);

enum class VerdictKind { ScatteringConsistent, Blowup, Inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::map<std::string, double> evidence;
    bool has_window = false;
    double window_start = 0.0, window_end = 0.0, eps = 0.0;
};

const char* to_string(VerdictKind k);

/// Searches all sampled windows of the given length for L^5 <= eps
/// (min start index wins).  Blowup termination short-circuits to Blowup.
Verdict scattering_verdict(const TimeSeries& series, double eps, double window_len);

struct VirialResult {
    std::vector<double> t;
    std::vector<double> v;  // V(t_k) from the rows
    double residual = 0.0;  // max interior |d2V/dt2 - (8 K - 6 L4)| / (8 K + 6 L4)
};

/// Virial identity diagnostic; Euclidean series only.  The second
/// difference uses the sampled spacing; rows must be uniform in t.
VirialResult virial(const TimeSeries& series);

}  // namespace nlslab
