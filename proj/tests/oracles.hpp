#pragma once

// Test-side oracles, independent of the library implementation paths
// they cross-check:
//   - high-resolution Richardson-extrapolated shooting for the ground
//     state constants,
//   - adaptive Simpson quadrature,
//   - theta-quadrature route for the interaction Morawetz integral,
//   - a deterministic RNG helper for property suites.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------
// ground-state shooting (plain RK4 + bisection, written independently)
// ---------------------------------------------------------------------

struct GsOracle {
    double a0 = 0.0;
    double mass = 0.0;
    double kinetic = 0.0;
    double l4 = 0.0;
};

inline char classify_shot(double a, double h, double rmax) {
    double r = h;
    double w = a * h + (a - a * a * a) * h * h * h / 6.0;
    double wp = a + (a - a * a * a) * h * h / 2.0;
    double wmax = w;
    const long n = std::lround(rmax / h);
    for (long i = 1; i < n; ++i) {
        auto f = [](double rr, double ww) { return ww - ww * ww * ww / (rr * rr); };
        if (std::abs(w) > 1e10) return 'g';
        const double k1w = wp, k1p = f(r, w);
        const double k2w = wp + 0.5 * h * k1p, k2p = f(r + 0.5 * h, w + 0.5 * h * k1w);
        const double k3w = wp + 0.5 * h * k2p, k3p = f(r + 0.5 * h, w + 0.5 * h * k2w);
        const double k4w = wp + h * k3p, k4p = f(r + h, w + h * k3w);
        w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        wp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += h;
        if (!std::isfinite(w) || w > 10.0 * a * r) return 'g';
        if (w <= 0.0) return 'c';
        wmax = std::max(wmax, w);
    }
    return (w < 1e-6 * wmax) ? 'd' : 'g';
}

inline double bisect_a(double h, double rmax, double tol) {
    double lo = 2.0, hi = 8.0;  // brackets the separatrix slope
    if (classify_shot(lo, h, rmax) == 'c' || classify_shot(hi, h, rmax) != 'c')
        throw std::runtime_error("oracle: bad bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (classify_shot(mid, h, rmax) == 'c')
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Richardson-extrapolated ground-state constants at base step h
/// (runs the shooting at h and h/2, eliminating the O(h^4) term).
inline GsOracle ground_state_oracle(double h, double rmax = 30.0) {
    const double a_h = bisect_a(h, rmax, 1e-13);
    const double a_h2 = bisect_a(0.5 * h, rmax, 1e-13);
    GsOracle out;
    out.a0 = a_h2 + (a_h2 - a_h) / 15.0;

    // integrate once more at h/2 with the extrapolated slope; graft e^{-r}
    const double hh = 0.5 * h;
    const long n = std::lround(rmax / hh) + 1;
    std::vector<double> w(n, 0.0), wp(n, 0.0), rr(n, 0.0);
    for (long j = 0; j < n; ++j) rr[j] = hh * j;
    wp[0] = out.a0;
    w[1] = out.a0 * hh + (out.a0 - std::pow(out.a0, 3)) * hh * hh * hh / 6.0;
    wp[1] = out.a0 + (out.a0 - std::pow(out.a0, 3)) * hh * hh / 2.0;
    double wmax = 0.0;
    long jm = -1;
    for (long j = 1; j + 1 < n; ++j) {
        auto f = [](double r_, double w_) { return w_ - w_ * w_ * w_ / (r_ * r_); };
        const double r = rr[j];
        const double k1w = wp[j], k1p = f(r, w[j]);
        const double k2w = wp[j] + 0.5 * hh * k1p,
                     k2p = f(r + 0.5 * hh, w[j] + 0.5 * hh * k1w);
        const double k3w = wp[j] + 0.5 * hh * k2p,
                     k3p = f(r + 0.5 * hh, w[j] + 0.5 * hh * k2w);
        const double k4w = wp[j] + hh * k3p, k4p = f(r + hh, w[j] + hh * k3w);
        w[j + 1] = w[j] + hh / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        wp[j + 1] = wp[j] + hh / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        wmax = std::max(wmax, w[j + 1]);
        if (jm < 0 && wmax > 1.0 && w[j + 1] < 1e-4 * wmax) jm = j + 1;
    }
    if (jm < 0) throw std::runtime_error("oracle: no tail match point");
    for (long j = jm; j < n; ++j) {
        w[j] = w[jm] * std::exp(-(rr[j] - rr[jm]));
        wp[j] = -w[j];
    }
    const double pi4 = 4.0 * 3.14159265358979323846;
    double sm = 0, sk = 0, s4 = 0;
    for (long j = 0; j + 1 < n; ++j) {
        auto term = [&](long i) {
            const double g = (rr[i] > 0) ? wp[i] - w[i] / rr[i] : 0.0;
            const double q4 = (rr[i] > 0) ? std::pow(w[i], 4) / (rr[i] * rr[i]) : 0.0;
            return std::array<double, 3>{w[i] * w[i], g * g, q4};
        };
        const auto ta = term(j), tb = term(j + 1);
        sm += 0.5 * hh * (ta[0] + tb[0]);
        sk += 0.5 * hh * (ta[1] + tb[1]);
        s4 += 0.5 * hh * (ta[2] + tb[2]);
    }
    out.mass = pi4 * sm;
    out.kinetic = pi4 * sk;
    out.l4 = pi4 * s4;
    return out;
}

// ---------------------------------------------------------------------
// adaptive Simpson
// ---------------------------------------------------------------------

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// ---------------------------------------------------------------------
// deterministic uniforms (independent of std distribution internals)
// ---------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) {
        const std::uint64_t u = eng_();
        const double x = static_cast<double>(u >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * x;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace oracle
