#include "nlslab/morawetz.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;
}

double action(const SimState& s, const CutoffFamily& cf) {
    const auto& f = s.field;
    const auto vr = radial_derivative(f);
    const int n = f.size();
    std::vector<double> integ(n);
    for (int j = 0; j < n; ++j) {
        const double im = std::imag(std::conj(f.v[j]) * vr[j]);
        integ[j] = cf.psi(f.grid->r[j]) * f.grid->r[j] * im;
    }
    return 8.0 * kPi * trapezoid(integ, f.grid->h);
}

double boundary_flux(const SimState& s) {
    const auto& f = s.field;
    if (f.grid->euclidean()) throw std::invalid_argument("boundary_flux: no boundary");
    const double h = f.grid->h;
    const complexd vr0 = (-3.0 * f.v[0] + 4.0 * f.v[1] - f.v[2]) / (2.0 * h);
    return kFourPi * std::norm(vr0);
}

ActionTerms action_rate_terms(const SimState& s, const CutoffFamily& cf) {
    const auto& f = s.field;
    const auto& r = f.grid->r;
    const int n = f.size();
    const auto vr = radial_derivative(f);

    // phi' from the tabulated profile; psi' = (phi - psi)/r is exact.
    const double dtab = 2.0 * cf.R / (cf.n_tab - 1);
    auto dphi = [&](double rr) {
        return (cf.phi(rr + dtab) - cf.phi(rr - dtab)) / (2.0 * dtab);
    };

    std::vector<double> ib(n), iq(n), ig(n);
    for (int j = 0; j < n; ++j) {
        const double rj = r[j];
        const double phi = cf.phi(rj);
        const double phi1 = cf.phi1(rj);
        const double psi = cf.psi(rj);
        const double a2 = std::norm(f.v[j]);
        if (rj > 0.0) {
            const double grad2 = std::norm(vr[j] - f.v[j] / rj);
            const double u4 = a2 * a2 / (rj * rj);
            ib[j] = 4.0 * (phi * grad2 - 0.75 * phi1 * u4);
            iq[j] = -(3.0 * (phi - phi1) + 2.0 * (psi - phi)) * u4;
            const double gp = dphi(rj) + 2.0 * (phi - psi) / rj;
            ig[j] = gp * 2.0 * (std::real(std::conj(f.v[j]) * vr[j]) - a2 / rj);
        } else {
            ib[j] = iq[j] = ig[j] = 0.0;
        }
    }
    ActionTerms terms;
    terms.bulk = kFourPi * trapezoid(ib, f.grid->h);
    terms.quartic_err = kFourPi * trapezoid(iq, f.grid->h);
    terms.gradient_err = kFourPi * trapezoid(ig, f.grid->h);
    terms.angular = 0.0;
    if (!f.grid->euclidean()) {
        // x·n = -r0 on the obstacle sphere
        terms.boundary = 2.0 * f.grid->r0 * cf.psi(f.grid->r0) * boundary_flux(s);
    }
    return terms;
}

double local_smoothing_average(const TimeSeries& series, double t0) {
    const auto& rows = series.rows;
    if (rows.size() < 2) throw std::invalid_argument("local_smoothing_average: series too short");
    const double t_begin = rows.front().t;
    const double t_end = rows.back().t;
    if (t_end - t_begin < t0 - 1e-9)
        throw std::invalid_argument("local_smoothing_average: series shorter than T0");

    double best = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double ta = rows[i].t;
        if (ta + t0 > t_end + 1e-9) break;
        double acc = 0.0;
        std::size_t e = i;
        while (e + 1 < rows.size() && rows[e].t < ta + t0 - 1e-9) {
            acc += 0.5 * (rows[e].flux + rows[e + 1].flux) * (rows[e + 1].t - rows[e].t);
            ++e;
        }
        const double len = rows[e].t - ta;
        if (len <= 0.0) continue;
        const double avg = acc / len;
        if (!found || avg > best) best = avg;
        found = true;
    }
    if (!found) throw std::invalid_argument("local_smoothing_average: no admissible window");
    return best;
}

double interaction(const SimState& s, const CutoffFamily& cf) {
    const auto& f = s.field;
    const auto& r = f.grid->r;
    const int n = f.size();
    const double h = f.grid->h;
    const auto vr = radial_derivative(f);

    // a_j = w_j Im(v̄ v_r)/r^2,  b_k = w_k |v|^2/s  (trapezoid weights w)
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
        if (r[j] > 0.0) {
            a[j] = w * std::imag(std::conj(f.v[j]) * vr[j]) / (r[j] * r[j]);
            b[j] = w * std::norm(f.v[j]) / r[j];
        }
    }

    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        if (a[j] == 0.0) continue;
        const double rj = r[j];
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (b[k] == 0.0) continue;
            const double sk = r[k];
            const double kern = (rj * rj - sk * sk) *
                                    (cf.p0(rj + sk) - cf.p0(std::abs(rj - sk))) +
                                (cf.p2(rj + sk) - cf.p2(std::abs(rj - sk)));
            acc += b[k] * kern;
        }
        total += a[j] * acc;
    }
    return 8.0 * kPi * kPi * total;
}

double xi(const SimState& s, const CutoffFamily& cf) {
    const auto& f = s.field;
    const int n = f.size();
    const auto vr = radial_derivative(f);
    std::vector<double> num(n), den(n);
    for (int j = 0; j < n; ++j) {
        const double c = cf.chi_loc(f.grid->r[j]);
        const double c2 = c * c;
        num[j] = c2 * std::imag(std::conj(f.v[j]) * vr[j]);
        den[j] = c2 * std::norm(f.v[j]);
    }
    const double h = f.grid->h;
    const double d = trapezoid(den, h);
    if (d <= 1e-12) return 0.0;
    return -trapezoid(num, h) / d;
}

double virial_value(const RadialField& f) {
    const int n = f.size();
    std::vector<double> integ(n);
    for (int j = 0; j < n; ++j)
        integ[j] = f.grid->r[j] * f.grid->r[j] * std::norm(f.v[j]);
    return kFourPi * trapezoid(integ, f.grid->h);
}

double dyadic_flux_average(const TimeSeries& series, const CutoffFamily& unit_cf,
                           double r0_obstacle, double r_scale0, double j_decades,
                           int n_r, double t0) {
    if (r0_obstacle <= 0.0)
        throw std::invalid_argument("dyadic_flux_average: exterior mode only");
    if (n_r < 2) throw std::invalid_argument("dyadic_flux_average: need nR >= 2");

    // (1/J) ∫ 2 r0 psi_R(r0) dR/R over log-spaced R in [R0, e^J R0]; the
    // weight is time-independent so the double average factorizes.
    const double dlog = j_decades / (n_r - 1);
    std::vector<double> wts(n_r);
    for (int k = 0; k < n_r; ++k) {
        CutoffFamily scaled = unit_cf;
        scaled.R = r_scale0 * std::exp(dlog * k);
        wts[k] = 2.0 * r0_obstacle * scaled.psi(r0_obstacle);
    }
    const double weight = trapezoid(wts, dlog) / j_decades;
    return weight * local_smoothing_average(series, t0);
}

DiagnosticRow make_row(const SimState& s, const CutoffFamily& cf,
                       double sponge_start) {
    DiagnosticRow row;
    row.t = s.t;
    const NormSet ns = norms(s.field);
    row.mass = ns.mass;
    row.energy = ns.energy;
    row.kinetic = ns.kinetic;
    row.l4 = ns.l4_fourth;
    row.linf = ns.sup_abs;
    row.action = action(s, cf);
    const ActionTerms terms = action_rate_terms(s, cf);
    row.term_bulk = terms.bulk;
    row.term_boundary = terms.boundary;
    row.term_quartic_err = terms.quartic_err;
    row.term_gradient_err = terms.gradient_err;
    row.flux = s.field.grid->euclidean() ? 0.0 : boundary_flux(s);
    row.interaction = interaction(s, cf);
    row.xi0 = xi(s, cf);
    row.virial = virial_value(s.field);
    row.l3 = lp_pow(s.field, 3.0);
    row.l5 = lp_pow(s.field, 5.0);
    row.l10 = lp_pow(s.field, 10.0);

    double edge = 0.0;
    for (int j = 0; j < s.field.size(); ++j) {
        const double r = s.field.grid->r[j];
        if (r >= sponge_start && r > 0.0)
            edge = std::max(edge, std::abs(s.field.v[j]) / r);
    }
    row.edge_amp = (ns.sup_abs > 0.0) ? edge / ns.sup_abs : 0.0;
    return row;
}

}  // namespace nlslab
