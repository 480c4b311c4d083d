#pragma once

#include "coulomb/domains.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace coulomb::balayage {

using domains::Point;

/// One boundary piece of a balayage measure, centred at the origin.
/// Planar pieces are ellipses x = a1 cos t, y = a2 sin t (circles when a1 == a2)
/// and `density` is mass per unit parameter t. For d != 2 the piece is the
/// sphere of radius a1 and `density` is mass per unit surface area (argument ignored).
struct BalayageComponent {
    int d = 2;
    double a1 = 1.0;
    double a2 = 1.0;
    std::function<double(double)> density;
    double mass = 0.0;
};

struct BalayageMeasure {
    std::vector<BalayageComponent> components;
    double total_mass = 0.0;
    /// Inner and outer circle weights, set for annuli only.
    double inner_weight = 0.0;
    double outer_weight = 0.0;
};

/// Boundary measure with the same exterior potential as the uniform body of
/// total charge dom.N. Supports Ball, Annulus2D and Ellipse2D.
BalayageMeasure balayage_measure(const domains::UniformDomain& dom);

/// Weights (outer, inner) of the two annulus circles for inner radius ratio c.
std::pair<double, double> annulus_weights(double c);

/// Potential of the measure with the Coulomb kernel, by quadrature over each piece.
EvalResult balayage_potential(const BalayageMeasure& m, const Point& r, double tol = 1e-11);

/// Raw area moment int_Omega w^l d^2 w of a planar body.
std::complex<double> exterior_moment(const domains::Geometry& g, int l);

/// Moment of the boundary measure, sum over pieces of int w^l dmu, normalised per unit mass.
std::complex<double> measure_moment(const BalayageMeasure& m, int l);

struct HoleSpec {
    domains::Geometry hole;
    double rho_b = 1.0;
    double beta = 2.0;
};

/// Energy of the neutral system made of a unit-density background on the hole
/// and its balayage measure, with the -ln kernel. Returned per rho_b^2.
double hole_energy(const HoleSpec& spec);

/// Leading limit -beta E of ln(gap probability) / rho_b^2.
double gap_exponent(const HoleSpec& spec);

struct TailParams {
    double gamma = 3.0;
    double alpha = 1.0;
    double R = 10.0;
};

/// Leading counting-tail exponent -(beta/4)(gamma - 2) alpha^2 R^{2 gamma} ln R, gamma > 2.
double tail_exponent(double beta, const TailParams& p);

/// ln P for a centred disk hole of radius r sqrt(N) in the Ginibre scaling rho_b = 1/pi.
double ginibre_disk_gap(double beta, double N, double r);

} // namespace coulomb::balayage
