#include "coulomb/surfaces.hpp"
#include "coulomb/rng.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

using namespace coulomb::surfaces;
using coulomb::DomainError;

namespace {

constexpr double kPi = std::numbers::pi;

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, tol);
}

// The conductor charge pulled back to the unit sphere is uniform, so
// V(r) = (Q / 4 pi) int sin(th) dth dph / |r - diag(a) u|.
double ellipsoid_potential_by_quadrature(const std::vector<double>& a, double Q, const Point& r) {
    auto inner = [&](double th) {
        return gk([&](double ph) {
                      const double u[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
                      double d2 = 0.0;
                      for (int j = 0; j < 3; ++j) d2 += (r[j] - a[j] * u[j]) * (r[j] - a[j] * u[j]);
                      return std::sin(th) / std::sqrt(d2);
                  },
                  0.0, 2.0 * kPi, 1e-11);
    };
    return Q / (4.0 * kPi) * gk(inner, 0.0, kPi, 1e-11);
}

// V(p) for the 3-ball with weight (1 - rho^2/R^2)^{-1/2} and kernel -ln r,
// rho = R sin u and the polar angle done numerically
double log_weighted_ball_potential(double R, double p) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto shell = [&](double u) {
        const double rho = R * std::sin(u);
        auto g = [&](double t) {
            const double d2 = p * p + rho * rho - 2.0 * p * rho * t;
            return d2 > 0.0 ? -0.5 * std::log(d2) : 0.0;
        };
        return R * rho * rho * 2.0 * kPi * ts.integrate(g, -1.0, 1.0, 1e-13);
    };
    if (p == 0.0) return ts.integrate(shell, 0.0, kPi / 2.0, 1e-12);
    const double b = std::asin(p / R);
    return ts.integrate(shell, 0.0, b, 1e-12) + ts.integrate(shell, b, kPi / 2.0, 1e-12);
}

} // namespace

TEST_CASE("uniform shell potential inside and outside") {
    CHECK(shell_potential(3, 1.0, 1.0, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shell_potential(3, 1.0, 1.0, {2, 0, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(shell_potential(2, 2.0, 3.0, {0.5, 0.5}) == doctest::Approx(-3.0 * std::log(2.0)).epsilon(1e-15));
    // continuous across the shell
    for (int d : {2, 3, 4, 6}) {
        Point in(d, 0.0), out(d, 0.0);
        in[0] = 1.5 * (1.0 - 1e-12);
        out[0] = 1.5 * (1.0 + 1e-12);
        CHECK(shell_potential(d, 1.5, 2.0, in) == doctest::Approx(shell_potential(d, 1.5, 2.0, out)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(shell_potential(1, 1.0, 1.0, {0.0}), DomainError);
}

TEST_CASE("sphere conductor density is uniform") {
    for (int d : {2, 3, 5}) {
        const auto s = SurfaceChargeDensity::sphere(d, 1.7, 2.5);
        Point r(d, 0.0);
        r[d - 1] = 1.7;
        const double want = 2.5 / (std::pow(1.7, d - 1) * coulomb::domains::unit_sphere_area(d));
        CHECK(s.density(r) == doctest::Approx(want).epsilon(1e-14));
        for (int j = 0; j < d; ++j) r[j] = 1.7 / std::sqrt(static_cast<double>(d));
        CHECK(s.density(r) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK_THROWS_AS(SurfaceChargeDensity::sphere(3, 1.0, 1.0).density({0.5, 0.0, 0.0}), DomainError);
}

TEST_CASE("planar conductor density is the pulled-back uniform measure") {
    // exterior map w -> ((a+b)/2) w + ((a-b)/2) / w sends the unit circle to the ellipse
    const double a = 2.0, b = 0.8;
    const SurfaceChargeDensity s{{a, b}, 1.0};
    for (double th : {0.0, 0.3, 1.1, 2.0, 4.0}) {
        const std::complex<double> w = std::polar(1.0, th);
        const std::complex<double> dxi = 0.5 * (a + b) - 0.5 * (a - b) / (w * w);
        CHECK(s.density({a * std::cos(th), b * std::sin(th)}) == doctest::Approx(1.0 / (2.0 * kPi * std::abs(dxi))).epsilon(1e-13));
    }
}

TEST_CASE("conductor charge integrates to Q") {
    CHECK(SurfaceChargeDensity{{2.0, 1.0, 1.0}, 1.0}.total().value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(SurfaceChargeDensity{{3.0, 0.5}, 2.0}.total().value == doctest::Approx(2.0).epsilon(1e-10));
    coulomb::rng::CounterRng rng(11, 0, 0);
    for (int k = 0; k < 5; ++k) {
        std::vector<double> axes(3);
        for (auto& x : axes) x = 0.3 + 2.7 * rng.uniform();
        CHECK(SurfaceChargeDensity{axes, 1.5}.total().value == doctest::Approx(1.5).epsilon(1e-6));
    }
    // four dimensions goes through the randomised cube rule
    const auto t4 = SurfaceChargeDensity{{1.0, 2.0, 1.5, 0.7}, 1.0}.total();
    CHECK(std::abs(t4.value - 1.0) <= std::max(1e-3, 4.0 * t4.est_error));
}

TEST_CASE("equal axes reproduce the shell potential") {
    for (int d : {3, 4, 5}) {
        const std::vector<double> axes(d, 1.3);
        for (double x : {0.0, 0.6, 1.3 * 1.5, 4.0}) {
            Point r(d, 0.0);
            r[0] = x;
            CHECK(ellipsoid_surface_potential(axes, 2.0, r) == doctest::Approx(shell_potential(d, 1.3, 2.0, r)).epsilon(1e-11));
        }
    }
}

TEST_CASE("prolate conductor potential against surface quadrature") {
    const std::vector<double> axes{1.0, 1.0, 2.0};
    for (auto r : std::vector<Point>{{3.0, 0.0, 0.0}, {0.0, 0.5, 2.5}, {1.0, 1.0, 1.0}})
        CHECK(ellipsoid_surface_potential(axes, 1.0, r) == doctest::Approx(ellipsoid_potential_by_quadrature(axes, 1.0, r)).epsilon(1e-9));
    // interior points see the same constant, and so does the quadrature
    const double inside = ellipsoid_surface_potential(axes, 1.0, {0, 0, 0});
    CHECK(inside == doctest::Approx(ellipsoid_potential_by_quadrature(axes, 1.0, {0.2, 0.1, 0.5})).epsilon(1e-9));
    coulomb::rng::CounterRng rng(12, 0, 0);
    for (int k = 0; k < 10; ++k) {
        const Point r{0.5 * rng.uniform(), 0.5 * rng.uniform(), 1.5 * rng.uniform()};
        CHECK(ellipsoid_surface_potential(axes, 1.0, r) == doctest::Approx(inside).epsilon(1e-8));
    }
}

TEST_CASE("conductor far field is a point charge") {
    for (const auto& axes : std::vector<std::vector<double>>{{1.0, 2.0, 0.5}, {1.0, 1.5, 0.7, 2.0}}) {
        const int d = static_cast<int>(axes.size());
        Point r(d, 0.0);
        r[0] = 1e4;
        CHECK(ellipsoid_surface_potential(axes, 1.0, r) / coulomb::domains::coulomb_of_distance(d, 1e4) ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(ellipsoid_surface_potential({1.0, 2.0}, 1.0, {5.0, 0.0}), DomainError);
}

TEST_CASE("projected shell density") {
    boost::math::quadrature::tanh_sinh<double> ts;
    // d = 2: arcsine law on (-R, R)
    const double m2 = ts.integrate([](double x) { return projection_density(2, 1.5, {x}, 2.0); }, -1.5, 1.5, 1e-12);
    CHECK(m2 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(projection_density(2, 1.5, {0.0}) == doctest::Approx(1.0 / (kPi * 1.5)).epsilon(1e-14));
    // d = 3: 1 / (2 pi R sqrt(R^2 - rho^2)) on the disk
    const double m3 = ts.integrate([](double p) { return 2.0 * kPi * p * projection_density(3, 1.0, {p, 0.0}); }, 0.0, 1.0, 1e-12);
    CHECK(m3 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(projection_density(3, 2.0, {0.0, 1.0}) == doctest::Approx(1.0 / (2.0 * kPi * 2.0 * std::sqrt(3.0))).epsilon(1e-13));
    // the minimum sits at the centre
    for (int d : {2, 3, 4}) {
        Point o(d - 1, 0.0), p(d - 1, 0.0);
        p[0] = 0.3;
        CHECK(projection_density(d, 1.0, o) < projection_density(d, 1.0, p));
    }
    CHECK_THROWS_AS(projection_density(3, 1.0, {1.0, 0.0}), DomainError);
}

TEST_CASE("projected shell keeps a constant potential") {
    IdentityOptions o;
    o.d = 3;
    o.R = 1.0;
    const auto r3 = projection_identities(IdentityCase::constant_potential, o);
    CHECK(r3.max_residual <= 1e-9);
    REQUIRE(r3.constant);
    // centre value int_0^R d rho / (R sqrt(R^2 - rho^2))
    CHECK(*r3.constant == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    o.d = 2;
    o.R = 3.0;
    const auto r2 = projection_identities(IdentityCase::constant_potential, o);
    CHECK(r2.max_residual <= 1e-9);
    CHECK(*r2.constant == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("weighted ball under the Riesz kernel gives a quadratic potential") {
    for (int d : {2, 3, 4}) {
        IdentityOptions o;
        o.d = d;
        const auto r = projection_identities(IdentityCase::riesz_quadratic, o);
        CHECK(r.max_residual <= 1e-5);
        REQUIRE(r.gamma);
        CHECK(*r.gamma > 0.0);
    }
    // the d = 3 log case against an independent two-angle quadrature
    for (double p : {0.0, 0.3, 0.7})
        CHECK(riesz_ball_potential(3, 1.0, p).value == doctest::Approx(log_weighted_ball_potential(1.0, p)).epsilon(1e-9));
    IdentityOptions o3;
    o3.d = 3;
    // frozen curvature
    CHECK(*projection_identities(IdentityCase::riesz_quadratic, o3).gamma == doctest::Approx(kPi * kPi / 3.0).epsilon(1e-6));
}

TEST_CASE("semicircle log identity") {
    const double x0 = semicircle_log_integral(1.0, 0.0).value;
    CHECK(x0 == doctest::Approx(0.5 * std::log(0.5) - 0.25).epsilon(1e-12));
    // direct quadrature of (a/pi) int ln|x - s| sqrt(1 - s^2/a^2) ds
    const double a = 2.0, x = 0.7;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double s) { return a / kPi * std::log(std::abs(x - s)) * std::sqrt(1.0 - s * s / (a * a)); };
    const double direct = ts.integrate(f, -a, x, 1e-13) + ts.integrate(f, x, a, 1e-13);
    CHECK(semicircle_log_integral(a, x).value == doctest::Approx(direct).epsilon(1e-10));
    CHECK(semicircle_log_integral(a, x).value == doctest::Approx(0.5 * x * x + 0.5 * a * a * std::log(0.5 * a) - 0.25 * a * a).epsilon(1e-10));
    IdentityOptions o;
    o.R = 1.3;
    CHECK(projection_identities(IdentityCase::semicircle, o).max_residual <= 1e-10);
    CHECK_THROWS_AS(semicircle_log_integral(1.0, 1.0), DomainError);
}

TEST_CASE("thin-slab limit of the flattened ellipsoid") {
    IdentityOptions o;
    o.axes = {1.0, 0.7};
    const auto r = projection_identities(IdentityCase::thin_slab, o);
    CHECK(r.max_residual <= 1e-5 * std::abs(*r.constant));
    o.axes = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(projection_identities(IdentityCase::thin_slab, o), coulomb::UnsupportedError);
}

TEST_CASE("identity names") {
    CHECK(identity_name(IdentityCase::semicircle) == "semicircle");
    CHECK(identity_name(IdentityCase::thin_slab) == "thin-slab");
}
