#pragma once

// Radial exterior-domain discretization for the cubic NLS outside a
// spherical obstacle (or on all of R^3 when r0 = 0).
//
// Fields are stored in the reduced variable v(r) = r*u(r) on the uniform
// half-line grid r_j = r0 + j*h.  The Dirichlet condition u = 0 on the
// obstacle boundary (or regularity at the origin) is v[0] = 0.

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

namespace nlslab {

using complexd = std::complex<double>;

struct RadialGrid {
    double r0 = 0.0;     // obstacle radius; 0 means free space R^3
    double r_max = 0.0;  // outer truncation radius
    int n = 0;           // node count
    double h = 0.0;      // uniform spacing (r_max - r0)/(n-1)
    std::vector<double> r;  // nodes r_j = r0 + j*h

    bool euclidean() const { return r0 == 0.0; }
};

/// Builds the uniform grid.  Requires r_max > r0 >= 0 and n >= 16.
std::shared_ptr<const RadialGrid> make_grid(double r0, double r_max, int n);

struct RadialField {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<complexd> v;  // v[j] ~ r_j * u(r_j); v[0] = 0 always

    RadialField() = default;
    explicit RadialField(std::shared_ptr<const RadialGrid> g)
        : grid(std::move(g)), v(grid->n, complexd{0.0, 0.0}) {}

    int size() const { return static_cast<int>(v.size()); }

    /// Re-imposes v = 0 at the inner boundary (and checks finiteness).
    void enforce_boundary();
};

/// Builds a field from point values of u(r); v = r*u with v[0] forced to 0.
RadialField field_from_u(std::shared_ptr<const RadialGrid> grid,
                         const std::vector<complexd>& u);

struct NormSet {
    double mass = 0.0;       // ||u||_{L^2}^2
    double kinetic = 0.0;    // ||grad u||_{L^2}^2
    double l4_fourth = 0.0;  // ||u||_{L^4}^4
    double energy = 0.0;     // kinetic/2 - l4_fourth/4
    double sup_abs = 0.0;    // ||u||_{L^inf}
};

/// Composite trapezoid quadrature of a tabulated integrand on the grid.
double trapezoid(const std::vector<double>& f, double h);

/// Second-order first derivative: centered interior, one-sided ends.
std::vector<complexd> radial_derivative(const RadialField& f);

/// All spatial norms of the field:
///   mass    = 4*pi ∫ |v|^2 dr
///   kinetic = 4*pi ∫ |v_r - v/r|^2 dr      (integrand -> 0 at r = 0)
///   l4      = 4*pi ∫ |v|^4 / r^2 dr        (integrand -> 0 at r = 0)
NormSet norms(const RadialField& f);

/// ||u||_{L^p}^p = 4*pi ∫ |v|^p r^{2-p} dr for the windowed space-time norms.
double lp_pow(const RadialField& f, double p);

}  // namespace nlslab
