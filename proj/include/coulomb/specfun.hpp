#pragma once

#include "coulomb/errors.hpp"

namespace coulomb::specfun {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
double log_gamma(double x);

/// Hurwitz zeta zeta(s; a) = sum_{k>=0} (k + a)^{-s}, s != 1, a > 0.
/// Euler-Maclaurin with 8 Bernoulli corrections after shifting so that a + n >= 10.
/// For negative integer s the expansion terminates and no shift is used.
double hurwitz_zeta(double s, double a);

/// Riemann zeta(s) = hurwitz_zeta(s, 1).
double riemann_zeta(double s);

/// Carlson symmetric integrals (duplication theorem).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

struct EllipticPair {
    double F = 0.0; // first kind
    double E = 0.0; // second kind
};

/// Incomplete elliptic integrals F(phi, k), E(phi, k) with modulus k,
/// phi in [0, pi/2], k in [0, 1]. Throws at (pi/2, 1) where F diverges.
EllipticPair elliptic_integrals(double phi, double k);

/// Complete integrals K(k), E(k).
EllipticPair complete_elliptic(double k);

} // namespace coulomb::specfun
