#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlslab/ground_state.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace nlslab;

namespace {

// Goldens frozen from the Richardson-extrapolated shooting oracle
// (oracle::ground_state_oracle at h = 0.002, i.e. 4x the dev grid
// resolution, r_max = 30).  Regenerate with the oracle below if the
// discretization conventions ever change.
constexpr double kGoldenA0 = 4.3373876799;
constexpr double kGoldenMass = 18.8972512878;

std::shared_ptr<const RadialGrid> dev_grid() { return make_grid(0.0, 30.0, 7501); }

}  // namespace

TEST_CASE("shoot classifications") {
    auto g = dev_grid();
    CHECK_THROWS_AS(shoot(0.0, *g), std::invalid_argument);
    CHECK(shoot(100.0, *g).outcome == ShootOutcome::CrossesZero);
    CHECK(shoot(0.01, *g).outcome == ShootOutcome::StaysPositiveGrows);
    // mid-range slopes drift to the constant state u = 1: still positive
    CHECK(shoot(2.0, *g).outcome == ShootOutcome::StaysPositiveGrows);
    // cross-check against the independent oracle integrator
    CHECK(oracle::classify_shot(100.0, g->h, 30.0) == 'c');
    CHECK(oracle::classify_shot(0.01, g->h, 30.0) == 'g');
}

TEST_CASE("shoot on an exterior grid is rejected") {
    auto g = make_grid(1.0, 30.0, 1001);
    CHECK_THROWS_AS(shoot(1.0, *g), std::invalid_argument);
}

TEST_CASE("find_ground_state matches the high-resolution oracle goldens") {
    const GroundState gs = find_ground_state(1e-12, dev_grid());
    CHECK(gs.a0 == doctest::Approx(kGoldenA0).epsilon(1e-8));
    CHECK(gs.norms.mass == doctest::Approx(kGoldenMass).epsilon(1e-7));
    // the oracle itself reproduces the goldens (guards against bit rot in
    // the frozen constants)
    const oracle::GsOracle ref = oracle::ground_state_oracle(0.004);
    CHECK(ref.a0 == doctest::Approx(kGoldenA0).epsilon(1e-9));
    CHECK(ref.mass == doctest::Approx(kGoldenMass).epsilon(1e-8));
}

TEST_CASE("no-bracket error surfaces by name") {
    // a grid too short for the scan to ever classify a crossing cleanly
    // is not constructible here; instead check the message path on a grid
    // where every shot diverges is impossible, so just check tol guard
    CHECK_THROWS_AS(find_ground_state(-1.0, dev_grid()), std::invalid_argument);
}

TEST_CASE("Pohozaev residuals at dev resolution") {
    const GroundState gs = find_ground_state(1e-12, dev_grid());
    const auto [res1, res2] = pohozaev_residuals(gs);
    CHECK(res1 < 1e-6);
    CHECK(res2 < 1e-6);
}

TEST_CASE("truncated profile degrades the residuals (test sanity)") {
    const GroundState full = find_ground_state(1e-12, dev_grid());
    const GroundState cut = find_ground_state(1e-12, make_grid(0.0, 9.0, 2251));
    const auto [r1f, r2f] = pohozaev_residuals(full);
    const auto [r1c, r2c] = pohozaev_residuals(cut);
    CHECK(r1c > 10.0 * r1f);
    CHECK(r2c > 10.0 * r2f);
}

TEST_CASE("threshold constants") {
    const GroundState gs = find_ground_state(1e-12, dev_grid());
    const ThresholdConstants tc = thresholds(gs, 0.5, 0.01);
    const double m = gs.norms.mass;
    CHECK(tc.em_threshold == doctest::Approx(0.5 * m * m).epsilon(1e-6));
    CHECK(tc.k_threshold == doctest::Approx(std::sqrt(3.0) * m).epsilon(1e-6));
    CHECK(tc.gn_constant * std::sqrt(gs.norms.mass) * std::sqrt(gs.norms.kinetic) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(tc.delta_prime == 0.5);
    CHECK(tc.rho == 0.01);
}

TEST_CASE("gn_check: equality at Q, strict inequality elsewhere") {
    auto g = dev_grid();
    const GroundState gs = find_ground_state(1e-12, g);
    const ThresholdConstants tc = thresholds(gs);

    const double at_q = gn_check(gs.as_field(), tc);
    CHECK(at_q == doctest::Approx(1.0).epsilon(1e-4));

    // constant rescaling leaves the ratio invariant
    const double at_halfq = gn_check(gs.as_field(0.5), tc);
    CHECK(at_halfq == doctest::Approx(1.0).epsilon(1e-4));

    RadialField gauss(g);
    for (int j = 0; j < g->n; ++j)
        gauss.v[j] = complexd{g->r[j] * std::exp(-g->r[j] * g->r[j]), 0.0};
    gauss.enforce_boundary();
    CHECK(gn_check(gauss, tc) < 1.0);

    RadialField zero(g);
    CHECK_THROWS_AS(gn_check(zero, tc), std::invalid_argument);
}

TEST_CASE("gn_check <= 1 on 100 seeded random Gaussian mixtures") {
    auto g = make_grid(0.0, 24.0, 4001);
    const GroundState gs = find_ground_state(1e-12, dev_grid());
    const ThresholdConstants tc = thresholds(gs);
    oracle::Rng rng(20240717);
    for (int trial = 0; trial < 100; ++trial) {
        RadialField f(g);
        const int terms = 1 + static_cast<int>(rng.uniform(0.0, 3.999));
        for (int m = 0; m < terms; ++m) {
            const double amp = rng.uniform(-2.0, 2.0);
            const double width = rng.uniform(0.3, 3.0);
            const double center = rng.uniform(0.0, 6.0);
            for (int j = 0; j < g->n; ++j) {
                const double z = (g->r[j] - center) / width;
                f.v[j] += complexd{g->r[j] * amp * std::exp(-z * z), 0.0};
            }
        }
        f.enforce_boundary();
        if (norms(f).mass < 1e-10) continue;
        CHECK(gn_check(f, tc) <= 1.0 + 1e-10);
    }
}

TEST_CASE("bisection determinism: identical inputs, bit-identical a0") {
    const GroundState g1 = find_ground_state(1e-12, dev_grid());
    const GroundState g2 = find_ground_state(1e-12, dev_grid());
    CHECK(g1.a0 == g2.a0);
}

TEST_CASE("profile invariants: positivity, single peak, deep tail decay") {
    const GroundState gs = find_ground_state(1e-12, dev_grid());
    double wmax = 0.0;
    for (double w : gs.profile) wmax = std::max(wmax, w);
    for (std::size_t j = 1; j < gs.profile.size(); ++j) CHECK(gs.profile[j] > 0.0);
    CHECK(gs.profile.back() < 1e-8 * wmax);
    // u = w/r decays monotonically beyond its maximum
    const auto& r = gs.grid->r;
    int peak = 1;
    double umax = 0.0;
    for (int j = 1; j < gs.grid->n; ++j) {
        const double u = gs.profile[j] / r[j];
        if (u > umax) {
            umax = u;
            peak = j;
        }
    }
    for (int j = peak + 1; j < gs.grid->n; ++j)
        CHECK(gs.profile[j] / r[j] <= gs.profile[j - 1] / r[j - 1] * (1.0 + 1e-12));
}
