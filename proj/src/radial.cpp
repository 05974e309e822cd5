#include "nlslab/radial.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;
}

std::shared_ptr<const RadialGrid> make_grid(double r0, double r_max, int n) {
    if (!std::isfinite(r0) || !std::isfinite(r_max))
        throw std::invalid_argument("make_grid: non-finite radius");
    if (r0 < 0.0) throw std::invalid_argument("make_grid: r0 must be >= 0");
    if (r_max <= r0) throw std::invalid_argument("make_grid: r_max must exceed r0");
    if (n < 16) throw std::invalid_argument("make_grid: need n >= 16 nodes");

    auto g = std::make_shared<RadialGrid>();
    g->r0 = r0;
    g->r_max = r_max;
    g->n = n;
    g->h = (r_max - r0) / static_cast<double>(n - 1);
    g->r.resize(n);
    for (int j = 0; j < n; ++j) g->r[j] = r0 + j * g->h;
    return g;
}

void RadialField::enforce_boundary() {
    v.front() = complexd{0.0, 0.0};
    for (const auto& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::runtime_error("RadialField: non-finite sample");
    }
}

RadialField field_from_u(std::shared_ptr<const RadialGrid> grid,
                         const std::vector<complexd>& u) {
    if (static_cast<int>(u.size()) != grid->n)
        throw std::invalid_argument("field_from_u: size mismatch");
    RadialField f(std::move(grid));
    for (int j = 0; j < f.size(); ++j) f.v[j] = f.grid->r[j] * u[j];
    f.enforce_boundary();
    return f;
}

double trapezoid(const std::vector<double>& f, double h) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
    return s * h;
}

std::vector<complexd> radial_derivative(const RadialField& f) {
    const int n = f.size();
    const double h = f.grid->h;
    std::vector<complexd> d(n);
    d[0] = (-3.0 * f.v[0] + 4.0 * f.v[1] - f.v[2]) / (2.0 * h);
    for (int j = 1; j + 1 < n; ++j) d[j] = (f.v[j + 1] - f.v[j - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * f.v[n - 1] - 4.0 * f.v[n - 2] + f.v[n - 3]) / (2.0 * h);
    return d;
}

NormSet norms(const RadialField& f) {
    const int n = f.size();
    const auto& r = f.grid->r;
    const auto vr = radial_derivative(f);

    std::vector<double> im(n), ik(n), i4(n);
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a2 = std::norm(f.v[j]);
        im[j] = a2;
        if (r[j] > 0.0) {
            ik[j] = std::norm(vr[j] - f.v[j] / r[j]);
            i4[j] = a2 * a2 / (r[j] * r[j]);
            sup = std::max(sup, std::abs(f.v[j]) / r[j]);
        } else {
            // v ~ r*u(0): both integrands vanish in the limit r -> 0
            ik[j] = 0.0;
            i4[j] = 0.0;
        }
    }
    NormSet s;
    const double h = f.grid->h;
    s.mass = kFourPi * trapezoid(im, h);
    s.kinetic = kFourPi * trapezoid(ik, h);
    s.l4_fourth = kFourPi * trapezoid(i4, h);
    s.energy = 0.5 * s.kinetic - 0.25 * s.l4_fourth;
    s.sup_abs = sup;
    return s;
}

double lp_pow(const RadialField& f, double p) {
    const int n = f.size();
    const auto& r = f.grid->r;
    std::vector<double> ip(n);
    for (int j = 0; j < n; ++j) {
        if (r[j] > 0.0) {
            const double u = std::abs(f.v[j]) / r[j];
            ip[j] = std::pow(u, p) * r[j] * r[j];
        } else {
            ip[j] = 0.0;  // weight r^2 vanishes at the origin
        }
    }
    return kFourPi * trapezoid(ip, f.grid->h);
}

}  // namespace nlslab
