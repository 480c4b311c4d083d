#pragma once

#include "coulomb/errors.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace coulomb::domains {

using Point = std::vector<double>;

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int d);

/// d - 2 for d > 2, otherwise 1.
double chi(int d);

/// Free-space Coulomb potential as a function of distance:
/// -r (d = 1), -ln r (d = 2), r^{2-d} (d > 2).
double coulomb_of_distance(int d, double r);

/// Pair kernel. Coulomb when s == d - 2, otherwise Riesz with exponent s.
struct Kernel {
    int d = 3;
    double s = 1.0;

    static Kernel coulomb(int d) { return {d, static_cast<double>(d - 2)}; }
    bool is_coulomb() const { return s == d - 2; }
    double of_distance(double r) const;
};

double kernel_eval(const Kernel& k, const Point& r, const Point& rp);

struct Ball { int d = 3; double R = 1.0; };
struct Annulus2D { double R = 1.0; double c = 0.5; };
struct Segment1D { double R = 1.0; };
struct Hyperellipsoid { std::vector<double> axes; };
struct Ellipse2D { double a1 = 1.0; double a2 = 1.0; };
struct Cuboid { std::array<double, 3> lo{0, 0, 0}; std::array<double, 3> hi{1, 1, 1}; };
struct Rectangle { std::array<double, 2> lo{0, 0}; std::array<double, 2> hi{1, 1}; };

using Geometry = std::variant<Ball, Annulus2D, Segment1D, Hyperellipsoid, Ellipse2D, Cuboid, Rectangle>;

int dimension(const Geometry& g);
double volume(const Geometry& g);
std::string geometry_name(const Geometry& g);
void validate(const Geometry& g);
/// Closed-set membership.
bool contains(const Geometry& g, const Point& r);

/// A uniformly charged body: background density -rho_b on the geometry with
/// total charge -N, so rho_b |Omega| = N.
struct UniformDomain {
    Geometry geometry;
    double N = 1.0;

    double rho_b() const { return N / volume(geometry); }
};

/// Potential of the -N background at r from the matching closed form.
/// Cuboid and rectangle forms are derived for unit density and scaled by rho_b.
/// Throws UnsupportedError where no closed form applies (ellipse exterior).
double background_potential(const UniformDomain& dom, const Point& r);

/// Direct numerical evaluation of the background potential integral.
EvalResult potential_oracle(const UniformDomain& dom, const Point& r, double tol = 1e-10);

/// U_bb + U_pb for particles at the given positions.
double interaction_energy(const UniformDomain& dom, const std::vector<Point>& points);

/// Background-background energy U_bb alone.
double self_energy(const UniformDomain& dom);

struct QuadraticCoefficients {
    double alpha0 = 0.0;
    std::vector<double> alpha;
};

enum class CoeffMethod { automatic, quadrature, carlson };

/// Interior potential sum_j alpha_j x_j^2 + alpha_0 of a uniformly charged
/// hyperellipsoid (d >= 3), total charge -N. Two axes are routed to the ellipse form.
QuadraticCoefficients hyperellipsoid_coefficients(const std::vector<double>& axes, double N,
                                                  CoeffMethod method = CoeffMethod::automatic);

/// Self-energy of the unit cube at unit density, closed form.
double cube_self_energy();

/// Quasi-random estimate of (1/2) int int |r - r'|^{-1} over the cube [0, side]^3.
EvalResult cube_self_energy_oracle(std::uint64_t samples, std::uint64_t seed, double side = 1.0);

} // namespace coulomb::domains
