#pragma once

#include "coulomb/domains.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coulomb::surfaces {

using domains::Point;

/// Potential of total charge Q spread uniformly over the sphere |r| = R in R^d:
/// Q Phi_d(R) inside, Q Phi_d(|r|) outside.
double shell_potential(int d, double R, double Q, const Point& r);

/// Equilibrium (conductor) charge of total Q on the surface of a hyperellipsoid.
/// A sphere shell is the case of equal axes.
struct SurfaceChargeDensity {
    std::vector<double> axes;
    double Q = 1.0;

    static SurfaceChargeDensity sphere(int d, double R, double Q);

    int dimension() const { return static_cast<int>(axes.size()); }
    /// Density per unit area at a surface point; throws DomainError off the surface.
    double density(const Point& r) const;
    /// Numerical surface integral of the density using the angular
    /// parameterisation x = diag(axes) u with its exact area element.
    EvalResult total() const;
};

double ellipsoid_surface_density(const std::vector<double>& axes, double Q, const Point& r);

/// Potential of the conductor charge (d > 2). Points inside the surface
/// return the interior constant.
double ellipsoid_surface_potential(const std::vector<double>& axes, double Q, const Point& r);

/// Projection of a uniform shell onto the (d-1)-ball: density proportional to
/// (1 - |r|^2/R^2)^{-1/2}, normalised to total charge Q. r has d-1 components.
double projection_density(int d, double R, const Point& r, double Q = 1.0);

/// Normalising mass of (1 - |r|^2/R^2)^{-1/2} over the (d-1)-ball of radius R.
double projection_weight_mass(int d, double R);

enum class IdentityCase { constant_potential, riesz_quadratic, semicircle, thin_slab };

struct IdentityReport {
    IdentityCase which;
    int points = 0;
    double max_residual = 0.0;
    /// Fitted constant of the potential (reported, not asserted).
    std::optional<double> constant;
    /// Fitted curvature gamma in V = C - gamma |r|^2.
    std::optional<double> gamma;
};

struct IdentityOptions {
    int d = 3;
    double R = 1.0;   // ball radius, or semicircle half-width
    std::vector<double> axes{1.0, 0.7}; // in-plane axes for the thin-slab case
    int points = 10;
};

/// Potential at distance p (inside the (d-1)-ball) of the unit-mass projected
/// density under the d-dimensional Coulomb kernel.
EvalResult projected_potential(int d, double R, double p);

/// Potential at |r| = p of the density (1 - |r'|^2/R^2)^{-1/2} on the d-ball
/// under the Riesz kernel with exponent d - 3.
EvalResult riesz_ball_potential(int d, double R, double p);

/// Right-hand side of the semicircle identity:
/// (a/pi) int_{-a}^{a} ln|x - s| (1 - s^2/a^2)^{1/2} ds.
EvalResult semicircle_log_integral(double a, double x);

/// Weighted in-plane integral of the thin-slab limit for d = 3:
/// -(2 N Gamma(5/2) / (pi^{3/2} a1 a2)) int_ellipse |s - s'|^{-1} (1 - s'.A^{-2}.s')^{1/2} ds'.
EvalResult thin_slab_potential(double a1, double a2, double N, const Point& s);

IdentityReport projection_identities(IdentityCase which, const IdentityOptions& opt = {});

std::string identity_name(IdentityCase c);

} // namespace coulomb::surfaces
