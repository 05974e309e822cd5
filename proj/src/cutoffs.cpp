#include "nlslab/cutoffs.hpp"

#include <cmath>

namespace nlslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Linear interpolation on a uniform table over [0, span].
double lerp_uniform(const std::vector<double>& tab, double span, double x) {
    if (x <= 0.0) return tab.front();
    if (x >= span) return tab.back();
    const double s = x / span * (tab.size() - 1);
    const auto j = static_cast<std::size_t>(s);
    const double f = s - static_cast<double>(j);
    return tab[j] * (1.0 - f) + tab[j + 1] * f;
}

// Cumulative trapezoid of samples on a uniform grid, out[0] = 0.
std::vector<double> cumtrap(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j)
        out[j] = out[j - 1] + 0.5 * h * (f[j] + f[j - 1]);
    return out;
}

}  // namespace

double CutoffFamily::chi(double rho_) const {
    if (rho_ <= 1.0 - eta) return 1.0;
    if (rho_ >= 1.0) return 0.0;
    const double tau = (rho_ - (1.0 - eta)) / eta;
    return std::exp(1.0 - 1.0 / (1.0 - tau * tau));
}

double CutoffFamily::phi(double r) const { return lerp_uniform(phi_tab, 2.0 * R, r); }
double CutoffFamily::phi1(double r) const { return lerp_uniform(phi1_tab, 2.0 * R, r); }

double CutoffFamily::psi(double r) const {
    if (r >= 2.0 * R) return phi_integral * R / r;
    return lerp_uniform(psi_tab, 2.0 * R, r);
}

double CutoffFamily::p0(double W) const {
    const double rho_ = W / R;
    if (rho_ <= 2.0) return R * R * lerp_uniform(p0_tab, 2.0, rho_);
    return R * R * (p0_tab.back() + phi_integral * (rho_ - 2.0));
}

double CutoffFamily::p2(double W) const {
    const double rho_ = W / R;
    if (rho_ <= 2.0) return R * R * R * R * lerp_uniform(p2_tab, 2.0, rho_);
    return R * R * R * R * (p2_tab.back() + phi_integral * (rho_ * rho_ * rho_ - 8.0) / 3.0);
}

CutoffFamily build_cutoffs(double R, double eta, int n_tab) {
    if (!(R > 0.0)) throw std::invalid_argument("build_cutoffs: R must be > 0");
    if (!(eta > 0.0 && eta < 0.5))
        throw std::invalid_argument("build_cutoffs: eta must lie in (0, 1/2)");
    if (n_tab < 256) throw std::invalid_argument("build_cutoffs: need n_tab >= 256");

    CutoffFamily cf;
    cf.R = R;
    cf.eta = eta;
    cf.n_tab = n_tab;

    const int m = n_tab;
    cf.rho.resize(m);
    for (int j = 0; j < m; ++j) cf.rho[j] = 2.0 * j / (m - 1);

    // chi^2, chi^4 sampled on the source grid sigma in [0, 1]
    std::vector<double> sg(m), chi2(m), chi4(m);
    cf.chi_tab.resize(m);
    for (int j = 0; j < m; ++j) {
        sg[j] = static_cast<double>(j) / (m - 1);
        const double c = cf.chi(sg[j]);
        cf.chi_tab[j] = c;
        chi2[j] = c * c;
        chi4[j] = chi2[j] * chi2[j];
    }
    const double ds = sg[1] - sg[0];

    // A(W) = ∫_0^W chi^2(w) w dw, constant past W = 1
    std::vector<double> a_int(m);
    for (int j = 0; j < m; ++j) a_int[j] = chi2[j] * sg[j];
    const std::vector<double> acum = cumtrap(a_int, ds);
    const double a_tot = acum.back();
    auto A = [&](double W) {
        if (W >= 1.0) return a_tot;
        return lerp_uniform(acum, 1.0, W);
    };

    // Radial convolution reduction at unit scale:
    //   (F*G)(r) = (2 pi / r) ∫ s F(s) [A_G(r+s) - A_G(|r-s|)] ds
    // with F one of chi^2, chi^4 and G = chi^2.  Normalization 1/w3
    // (w3 = 4 pi / 3) yields phi, phi1.
    const double omega3 = 4.0 * kPi / 3.0;
    cf.phi_tab.assign(m, 0.0);
    cf.phi1_tab.assign(m, 0.0);
    std::vector<double> integ2(m), integ4(m);
    for (int i = 0; i < m; ++i) {
        const double r = cf.rho[i];
        if (r < 1e-14) {
            // phi(0) = 3 ∫ chi^4 s^2 ds (and chi^2 chi^4 for phi1)
            std::vector<double> f0(m), f1(m);
            for (int j = 0; j < m; ++j) {
                f0[j] = chi2[j] * chi2[j] * sg[j] * sg[j];
                f1[j] = chi2[j] * chi4[j] * sg[j] * sg[j];
            }
            cf.phi_tab[i] = 3.0 * trapezoid(f0, ds);
            cf.phi1_tab[i] = 3.0 * trapezoid(f1, ds);
            continue;
        }
        for (int j = 0; j < m; ++j) {
            const double ker = A(r + sg[j]) - A(std::abs(r - sg[j]));
            integ2[j] = sg[j] * chi2[j] * ker;
            integ4[j] = sg[j] * chi4[j] * ker;
        }
        const double pref = 2.0 * kPi / (r * omega3);
        cf.phi_tab[i] = pref * trapezoid(integ2, ds);
        cf.phi1_tab[i] = pref * trapezoid(integ4, ds);
    }
    // clamp convolution roundoff outside the support
    cf.phi_tab.back() = 0.0;
    cf.phi1_tab.back() = 0.0;

    const double drho = cf.rho[1] - cf.rho[0];
    const std::vector<double> phicum = cumtrap(cf.phi_tab, drho);
    cf.phi_integral = phicum.back();
    cf.psi_tab.assign(m, 0.0);
    cf.psi_tab[0] = cf.phi_tab[0];  // psi(0) = phi(0)
    for (int j = 1; j < m; ++j) cf.psi_tab[j] = phicum[j] / cf.rho[j];

    std::vector<double> q0(m), q2(m);
    for (int j = 0; j < m; ++j) {
        q0[j] = cf.psi_tab[j] * cf.rho[j];
        q2[j] = cf.psi_tab[j] * cf.rho[j] * cf.rho[j] * cf.rho[j];
    }
    cf.p0_tab = cumtrap(q0, drho);
    cf.p2_tab = cumtrap(q2, drho);
    return cf;
}

double gradient_identity_residual(const CutoffFamily& cf) {
    const double drho = cf.rho[1] - cf.rho[0];
    double sup = 0.0;
    for (int j = 1; j + 1 < cf.n_tab; ++j) {
        const double dpsi = (cf.psi_tab[j + 1] - cf.psi_tab[j - 1]) / (2.0 * drho);
        const double res = std::abs(cf.rho[j] * dpsi - (cf.phi_tab[j] - cf.psi_tab[j]));
        sup = std::max(sup, res);
    }
    return sup;  // scale-free: identical at unit and physical scale
}

RadialField chi_ball(const CutoffFamily& cf, const RadialField& f) {
    RadialField g(f.grid);
    for (int j = 0; j < f.size(); ++j)
        g.v[j] = f.v[j] * cf.chi_ball_weight(f.grid->r[j]);
    g.enforce_boundary();
    return g;
}

}  // namespace nlslab
