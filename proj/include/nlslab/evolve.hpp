#pragma once

// Time integration of the radial NLS
//
//     i v_t + v_rr + |v|^2 v / r^2 = 0,   v(r0) = v(r_max) = 0,
//
// by the conservative implicit midpoint scheme
//
//     i (v+ - v)/dt + (1/2) v_rr(v+ + v) + N_mid = 0,
//     N_mid = (|v+|^2 + |v|^2)/2 * (v+ + v)/(2 r^2),
//
// solved per step by fixed-point iteration around a constant complex
// tridiagonal core.  The divided-difference nonlinearity conserves the
// discrete mass and the discrete energy exactly (up to the fixed-point
// tolerance).  An absorbing sponge v <- v exp(-sigma(r) dt) emulates the
// unbounded exterior on the truncated grid.

#include "nlslab/morawetz.hpp"
#include "nlslab/radial.hpp"
#include "nlslab/series.hpp"

#include <optional>
#include <string>

namespace nlslab {

enum class RunMode { Nonlinear, Linear };

struct SpongeProfile {
    double width = 0.0;     // physical width of the absorbing band
    double strength = 0.0;  // peak rate sigma0
    std::vector<double> sigma;  // sigma(r_j), 0 outside the band

    static SpongeProfile build(const RadialGrid& grid, double width_frac,
                               double strength, bool enabled);
    double start(const RadialGrid& grid) const { return grid.r_max - width; }
};

struct InitialData {
    enum class Kind { Gaussian, GroundStateScaled, Ring };
    Kind kind = Kind::Gaussian;
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
    double scale = 1.0;  // ground_state{scale}
};

struct RunConfig {
    RunMode mode = RunMode::Nonlinear;
    double r0 = 0.0;
    double r_max = 40.0;
    int n = 1601;
    double dt = 0.01;
    double t_end = 10.0;
    int sample_every = 50;

    bool sponge_enabled = true;
    double sponge_width_frac = 0.15;
    double sponge_strength = 1.0;

    InitialData init;

    double cutoff_R = 10.0;
    double cutoff_eta = 0.1;
    int cutoff_n_tab = 2048;
    double r_scale0 = 4.0;  // R0 of the dyadic averaging
    double j_decades = 2.0; // J
    int n_r = 8;            // nR

    double eps = 0.2;          // scattering detector threshold
    double window_len = 5.0;   // detector window length
    double delta_prime = 0.1;
    double rho = 0.01;
    std::vector<double> t0_list = {10.0, 20.0, 40.0, 80.0};

    double gs_tol = 1e-12;       // bisection tolerance for ground-state data
    double gs_r_max = 30.0;      // ground-state grid (CLI `ground-state`)
    int gs_n = 30001;
    double detect_factor = 1e3;  // blowup detector growth factor
    double fp_tol = 1e-12;
    int fp_max_iter = 50;
    double dt_guard_factor = 10.0;  // requires dt <= factor * h

    void validate() const;  // throws std::invalid_argument on bad values
};

/// Fixed-point non-convergence inside a step (blowup signal or dt too large).
struct StepError : std::runtime_error {
    int step_index;
    StepError(int step, const std::string& what)
        : std::runtime_error(what), step_index(step) {}
};

class Stepper {
  public:
    Stepper(std::shared_ptr<const RadialGrid> grid, RunMode mode, double dt,
            const SpongeProfile& sponge, double fp_tol, int fp_max_iter,
            double dt_guard_factor);

    /// One implicit midpoint step + sponge.  Throws StepError on
    /// fixed-point non-convergence.
    SimState advance(const SimState& s);

    int last_iterations() const;

    // The run loop keeps the state in extended precision between steps
    // (per-step rounding would continuously re-seed the soliton's
    // unstable mode); Impl carries that state.
    struct Impl;
    using ImplPtr = std::shared_ptr<Impl>;
    ImplPtr impl() { return impl_; }

  private:
    ImplPtr impl_;
};

/// Single-step convenience wrapper around a throwaway Stepper.
SimState step(const SimState& s, double dt, RunMode mode, const SpongeProfile& sponge,
              double fp_tol = 1e-12, int fp_max_iter = 50, double dt_guard = 10.0);

RadialField build_initial_data(std::shared_ptr<const RadialGrid> grid,
                               const InitialData& init, double gs_tol);

struct EvolveResult {
    TimeSeries series;
    SimState final_state;
    std::shared_ptr<const RadialGrid> grid;
};

/// Runs the configured experiment to t_end or blowup, sampling a
/// DiagnosticRow every sample_every steps (and at the final step).
EvolveResult evolve(const RunConfig& cfg);

/// Same, continuing from a restored state (checkpoint resume).
EvolveResult evolve_from(const RunConfig& cfg, const SimState& start);

/// Least-squares slope of log ||u||_inf vs log t over [t_a, t_b] on a
/// linear-mode run.  Throws if the window reaches past the time where the
/// solution first touches the sponge band (edge_amp > 1e-3).
double linear_decay_fit(const RunConfig& cfg, double t_a = 1.0, double t_b = 8.0);

/// Max relative deviation of mass and energy from the initial row over
/// the clean prefix of the series (rows with edge_amp < 1e-8).
std::pair<double, double> conservation_report(const TimeSeries& series);

/// True iff ||u||_inf or ||grad u||_2 exceeded `factor` times its
/// initial value.
bool detect_blowup(const SimState& s, const NormSet& initial, double factor = 1e3);

}  // namespace nlslab
