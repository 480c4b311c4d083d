#pragma once

#include "coulomb/errors.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace coulomb::quad {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Adaptive Gauss-Kronrod (61 points) on [a, b]. Smooth or mildly kinked integrands.
EvalResult gauss_kronrod(const Fn1& f, double a, double b, double tol = 1e-12, unsigned max_depth = 18);

/// Tanh-sinh on [a, b]; suited to integrable endpoint singularities.
EvalResult tanh_sinh(const Fn1& f, double a, double b, double tol = 1e-12);

/// Gauss-Kronrod on [a, b] with interior break points (kinks, log singularities).
EvalResult gauss_kronrod_split(const Fn1& f, double a, double b, std::vector<double> breaks,
                               double tol = 1e-12);

/// Tanh-sinh on [a, b] with interior break points.
EvalResult tanh_sinh_split(const Fn1& f, double a, double b, std::vector<double> breaks,
                           double tol = 1e-12);

/// Nested adaptive integral over [ax, bx] x [ay(x), by(x)].
EvalResult nested2d(const Fn2& f, double ax, double bx, const Fn1& ay, const Fn1& by,
                    double tol = 1e-11);

/// Periodic trapezoid rule on [0, 2 pi) with n nodes.
double periodic_trapezoid(const Fn1& f, int n);

/// Randomised quasi-Monte Carlo over the unit cube [0,1]^dim using a Sobol
/// sequence with `shifts` independent Cranley-Patterson shifts. The error is
/// one standard error across shifts.
EvalResult rqmc_unit_cube(const std::function<double(const double*)>& f, unsigned dim,
                          std::uint64_t points_per_shift, unsigned shifts, std::uint64_t seed);

/// Plain Monte Carlo over [0,1]^dim with a counter-based stream, returning
/// mean and standard error.
EvalResult monte_carlo_unit_cube(const std::function<double(const double*)>& f, unsigned dim,
                                 std::uint64_t samples, std::uint64_t seed);

} // namespace coulomb::quad
