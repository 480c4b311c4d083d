#pragma once

#include "coulomb/errors.hpp"

#include <optional>

namespace coulomb::riesz {

/// N equally spaced unit charges on a circle of radius R with a uniform
/// neutralising line background of density -N / (2 pi R). Pair interaction
/// is the Riesz kernel with exponent s in (-2, 1) (s = 0 is -log).
struct RieszCircle {
    double s = 0.0;
    int N = 1;
    double R = 1.0;

    double rho_b() const;
    void validate() const;
};

/// Riesz kernel as a function of distance: -r^{-s} (s<0), -ln r (s=0), r^{-s} (s>0).
double riesz_kernel(double s, double r);

/// The tabulated background constant V0: sgn(s) N R^{-s} Gamma(1-s)/Gamma(1-s/2)^2
/// for s != 0 and N ln R for s = 0.
double background_potential(const RieszCircle& gas);

/// Potential on the circle created by the -rho_b background itself, i.e. the
/// circle integral of the kernel against -rho_b. Equals V0 at s = 0 and -V0 otherwise.
double physical_background_potential(const RieszCircle& gas);

struct StaticEnergy {
    std::optional<double> exact; // U_pp + U_pb + U_bb for the lattice configuration
    double asymptotic = 0.0;     // N sgn(s) rho_b^s zeta(s); -(N/2) ln(2 pi rho_b) at s = 0
};

StaticEnergy static_energy(const RieszCircle& gas);

enum class PointMode { finite, limit };

/// Energy of a test charge at angle 2 pi x / N (finite mode) or its large-N
/// limit in lattice units (limit mode).
double point_energy(const RieszCircle& gas, double x, PointMode mode);

} // namespace coulomb::riesz
