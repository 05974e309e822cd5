#include "nlslab/ground_state.hpp"

#include <cmath>

namespace nlslab {

namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

struct OdeSample {
    std::vector<double> w, wp;
    ShootResult result;
};

// RHS of the first-order system for (w, w').  The nonlinear term is
// regular at r = 0 because w ~ a*r there.
inline void rhs(double r, double w, double wp, double& dw, double& dwp) {
    dw = wp;
    dwp = w - w * w * w / (r * r);
}

// Fixed-step RK4 from r = h with the series start
//   w(h)  = a h + (a - a^3) h^3 / 6,
//   w'(h) = a   + (a - a^3) h^2 / 2.
// Classification:
//   - w <= 0                 -> CrossesZero
//   - w > 10 a r or !finite  -> StaysPositiveGrows (divergence guard)
//   - reaches r_max          -> Decays if w fell below 1e-6 of its max,
//                               else StaysPositiveGrows (the u -> 1 branch)
OdeSample integrate_shot(double a, const RadialGrid& grid, bool keep) {
    const double h = grid.h;
    const int n = grid.n;
    OdeSample out;
    if (keep) {
        out.w.assign(n, 0.0);
        out.wp.assign(n, 0.0);
        out.wp[0] = a;
    }

    double w = a * h + (a - a * a * a) * h * h * h / 6.0;
    double wp = a + (a - a * a * a) * h * h / 2.0;
    if (keep) {
        out.w[1] = w;
        out.wp[1] = wp;
    }
    double wmax = w;

    constexpr double kStageCap = 1e12;
    for (int j = 1; j + 1 < n; ++j) {
        const double r = grid.r[j];
        double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p;
        rhs(r, w, wp, k1w, k1p);
        if (std::abs(w + 0.5 * h * k1w) > kStageCap) {
            out.result = {ShootOutcome::StaysPositiveGrows, r};
            return out;
        }
        rhs(r + 0.5 * h, w + 0.5 * h * k1w, wp + 0.5 * h * k1p, k2w, k2p);
        rhs(r + 0.5 * h, w + 0.5 * h * k2w, wp + 0.5 * h * k2p, k3w, k3p);
        rhs(r + h, w + h * k3w, wp + h * k3p, k4w, k4p);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        wp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        const double rn = grid.r[j + 1];
        if (keep) {
            out.w[j + 1] = w;
            out.wp[j + 1] = wp;
        }
        if (!std::isfinite(w) || w > 10.0 * a * rn) {
            out.result = {ShootOutcome::StaysPositiveGrows, rn};
            return out;
        }
        if (w <= 0.0) {
            out.result = {ShootOutcome::CrossesZero, rn};
            return out;
        }
        wmax = std::max(wmax, w);
    }
    const ShootOutcome end = (w < 1e-6 * wmax) ? ShootOutcome::Decays
                                               : ShootOutcome::StaysPositiveGrows;
    out.result = {end, grid.r_max};
    return out;
}

}  // namespace

ShootResult shoot(double a, const RadialGrid& grid) {
    if (!(a > 0.0)) throw std::invalid_argument("shoot: slope a must be positive");
    if (grid.r0 != 0.0) throw std::invalid_argument("shoot: needs a free-space grid");
    return integrate_shot(a, grid, /*keep=*/false).result;
}

GroundState find_ground_state(double tol, std::shared_ptr<const RadialGrid> grid) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_ground_state: tol must be > 0");
    if (grid->r0 != 0.0)
        throw std::invalid_argument("find_ground_state: needs a free-space grid");

    // Doubling scan for a bracket [lo, hi] with lo not crossing and hi crossing.
    double lo = 0.0, hi = 0.0;
    double prev = 0.5;
    ShootOutcome prev_out = shoot(prev, *grid).outcome;
    for (double a = 1.0; a <= 1e6; a *= 2.0) {
        const ShootOutcome out = shoot(a, *grid).outcome;
        if (out == ShootOutcome::CrossesZero && prev_out != ShootOutcome::CrossesZero) {
            lo = prev;
            hi = a;
            break;
        }
        prev = a;
        prev_out = out;
    }
    if (hi == 0.0) throw std::runtime_error("no sign change in shooting scan");

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(mid, *grid).outcome == ShootOutcome::CrossesZero)
            hi = mid;
        else
            lo = mid;
    }

    GroundState gs;
    gs.grid = grid;
    gs.a0 = 0.5 * (lo + hi);

    OdeSample s = integrate_shot(gs.a0, *grid, /*keep=*/true);
    gs.profile = std::move(s.w);
    gs.dprofile = std::move(s.wp);

    // Graft the e^{-r} tail from the first node where w drops to 1e-4 of its
    // peak; beyond that point the bisection residual e^{r}*tol contaminates
    // the raw trajectory.
    double wmax = 0.0;
    int jmax = 0;
    for (int j = 0; j < grid->n; ++j) {
        if (gs.profile[j] > wmax) {
            wmax = gs.profile[j];
            jmax = j;
        }
    }
    int jm = -1;
    for (int j = jmax; j < grid->n; ++j) {
        if (gs.profile[j] < 1e-4 * wmax) {
            jm = j;
            break;
        }
    }
    if (jm < 0)
        throw std::runtime_error(
            "find_ground_state: profile never reaches the tail guard; enlarge r_max");
    gs.match_radius = grid->r[jm];
    const double c = gs.profile[jm];
    for (int j = jm; j < grid->n; ++j) {
        const double tail = c * std::exp(-(grid->r[j] - gs.match_radius));
        gs.profile[j] = tail;
        gs.dprofile[j] = -tail;
    }

    // Norms from the carried derivative (no finite differencing of w).
    const int n = grid->n;
    std::vector<double> im(n), ik(n), i4(n);
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = gs.profile[j];
        const double r = grid->r[j];
        im[j] = w * w;
        if (r > 0.0) {
            const double g = gs.dprofile[j] - w / r;
            ik[j] = g * g;
            i4[j] = w * w * w * w / (r * r);
            sup = std::max(sup, std::abs(w) / r);
        } else {
            ik[j] = 0.0;
            i4[j] = 0.0;
            sup = std::max(sup, gs.a0);  // u(0) = w'(0)
        }
    }
    gs.norms.mass = kFourPi * trapezoid(im, grid->h);
    gs.norms.kinetic = kFourPi * trapezoid(ik, grid->h);
    gs.norms.l4_fourth = kFourPi * trapezoid(i4, grid->h);
    gs.norms.energy = 0.5 * gs.norms.kinetic - 0.25 * gs.norms.l4_fourth;
    gs.norms.sup_abs = sup;
    return gs;
}

RadialField GroundState::as_field(double scale) const {
    RadialField f(grid);
    for (int j = 0; j < f.size(); ++j) f.v[j] = complexd{scale * profile[j], 0.0};
    f.enforce_boundary();
    return f;
}

std::pair<double, double> pohozaev_residuals(const GroundState& gs) {
    const double m = gs.norms.mass;
    return {std::abs(gs.norms.kinetic - 3.0 * m) / m,
            std::abs(gs.norms.l4_fourth - 4.0 * m) / m};
}

ThresholdConstants thresholds(const GroundState& gs, double delta_prime, double rho) {
    ThresholdConstants tc;
    tc.em_threshold = gs.norms.energy * gs.norms.mass;
    tc.k_threshold = std::sqrt(gs.norms.kinetic) * std::sqrt(gs.norms.mass);
    tc.gn_constant = (4.0 / 3.0) / tc.k_threshold;
    tc.delta_prime = delta_prime;
    tc.rho = rho;
    return tc;
}

double gn_check(const RadialField& f, const ThresholdConstants& tc) {
    const NormSet s = norms(f);
    if (s.mass <= 0.0) throw std::invalid_argument("gn_check: zero field");
    const double bound =
        tc.gn_constant * std::sqrt(s.mass) * std::sqrt(s.kinetic) * s.kinetic;
    return s.l4_fourth / bound;
}

}  // namespace nlslab
