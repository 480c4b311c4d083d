#include "coulomb/conformal.hpp"
#include "coulomb/rng.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace coulomb::conformal;
using coulomb::DomainError;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, tol);
}

// upper half plane onto the exterior of the unit disk
cplx cayley(cplx z) { return (z + I) / (z - I); }

std::vector<LaurentMap> sample_maps() {
    return {LaurentMap::identity(), LaurentMap::interval(), LaurentMap::ellipse(2.0, 1.0), LaurentMap::joukowski(1.5, 0.6),
            LaurentMap(1.2, {cplx(0.1, -0.2), cplx(0.2, 0.1), cplx(0.05, 0.0)})};
}

} // namespace

TEST_CASE("interval map: Green function, capacity and Robin constant") {
    const auto m = LaurentMap::interval();
    const auto g = green_infinity(m, 2.0);
    CHECK(g.g == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-14));
    CHECK(g.capacity == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.robin == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // the Robin constant is the log energy of the arcsine law, x = cos u
    boost::math::quadrature::tanh_sinh<double> ts;
    auto inner = [&](double u) {
        auto f = [&](double v) {
            const double gap = std::abs(std::cos(u) - std::cos(v));
            return gap > 0.0 ? -std::log(gap) : 0.0;
        };
        return (ts.integrate(f, 0.0, u, 1e-12) + ts.integrate(f, u, kPi, 1e-12)) / kPi;
    };
    CHECK(gk(inner, 0.0, kPi, 1e-10) / kPi == doctest::Approx(g.robin).epsilon(1e-8));
}

TEST_CASE("identity map: unit disk") {
    const auto g = green_infinity(LaurentMap::identity(), cplx(3.0, 4.0));
    CHECK(g.capacity == 1.0);
    CHECK(g.robin == 0.0);
    CHECK(g.g == doctest::Approx(std::log(5.0)).epsilon(1e-15));
    for (double t : {0.0, 1.0, 2.5})
        CHECK(surface_density(LaurentMap::identity(), std::polar(1.0, t)) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));
}

TEST_CASE("inverse map round trip and boundary values") {
    coulomb::rng::CounterRng rng(21, 0, 0);
    for (const auto& m : sample_maps()) {
        for (int k = 0; k < 20; ++k) {
            const cplx w = std::polar(1.0 + 3.0 * rng.uniform(), 2.0 * kPi * rng.uniform());
            CHECK(std::abs(m.zeta(m.xi(w)) - w) <= 1e-12 * std::abs(w));
        }
        for (int k = 0; k < 16; ++k) {
            const cplx zb = m.xi(std::polar(1.0, 2.0 * kPi * (k + 0.5) / 16.0));
            CHECK(std::abs(green_infinity(m, zb).g) <= 1e-12);
        }
    }
}

TEST_CASE("equilibrium density integrates to one along the boundary") {
    for (const auto& m : sample_maps()) {
        // the slit ends carry an infinite density times zero arc length
        if (m.coeffs().size() == 2 && std::abs(m.coeffs()[1]) == m.scale()) continue;
        auto f = [&](double t) {
            const cplx w = std::polar(1.0, t);
            return surface_density(m, m.xi(w)) * std::abs(m.dxi(w));
        };
        CHECK(gk(f, 0.0, 2.0 * kPi) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("Green function with pole at infinity is the equilibrium log potential") {
    // g(z) = int ln|z - t| d mu(t) - ln capacity, with mu = d theta / 2 pi on the unit circle
    for (const auto& m : sample_maps())
        for (cplx z : {cplx(3.0, 1.0), cplx(-2.0, 2.5), cplx(0.0, -4.0)}) {
            const double pot = gk([&](double t) { return std::log(std::abs(z - m.xi(std::polar(1.0, t)))); }, 0.0, 2.0 * kPi) / (2.0 * kPi);
            CHECK(green_infinity(m, z).g == doctest::Approx(pot - std::log(m.scale())).epsilon(1e-10));
        }
}

TEST_CASE("two-point Green functions: worked values") {
    CHECK(green_two_point(DiskGeometry{1.0}, 2.0, 3.0) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    CHECK(green_two_point(HalfPlane{}, I, 2.0 * I) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(green3d(Sphere3{1.0}, {2, 0, 0}, {3, 0, 0}) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(green3d(HalfSpace3{}, {1, 2, 0}, {0, 0, 1}) == doctest::Approx(0.0).scale(1e-15));
    CHECK(green3d(HalfSpace3{}, {0, 0, 1}, {0, 0, 2}) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("two-point Green functions vanish on the boundary and are symmetric") {
    coulomb::rng::CounterRng rng(22, 0, 0);
    for (double R : {0.5, 1.0, 2.0}) {
        const cplx w = std::polar(1.6 * R, 0.4);
        for (double t : {0.0, 1.3, 4.0}) CHECK(std::abs(green_two_point(DiskGeometry{R}, std::polar(R, t), w)) <= 1e-14);
        const cplx z = std::polar(3.0 * R, -1.0);
        CHECK(green_two_point(DiskGeometry{R}, z, w) == doctest::Approx(green_two_point(DiskGeometry{R}, w, z)).epsilon(1e-14));
        CHECK(green_two_point(DiskGeometry{R}, z, w) > 0.0);
    }
    CHECK(std::abs(green_two_point(HalfPlane{}, 3.0, cplx(1.0, 2.0))) <= 1e-15);
    CHECK(std::abs(green3d(Sphere3{2.0}, {0.0, 2.0, 0.0}, {1.0, 3.0, -1.0})) <= 1e-15);
    for (const auto& m : sample_maps()) {
        const Mapped g{m};
        const cplx z = m.xi(std::polar(1.7, 0.3)), w = m.xi(std::polar(2.4, 2.1));
        CHECK(green_two_point(g, z, w) == doctest::Approx(green_two_point(g, w, z)).epsilon(1e-12));
        CHECK(green_two_point(g, z, w) > 0.0);
        for (double t : {0.2, 2.9}) CHECK(std::abs(green_two_point(g, m.xi(std::polar(1.0, t)), w)) <= 1e-12);
    }
    // random pairs for the image-charge sphere
    for (int k = 0; k < 10; ++k) {
        const Vec3 r{2.0 + rng.uniform(), rng.uniform(), rng.uniform()}, rp{-1.0, 2.0 + rng.uniform(), 1.5};
        CHECK(green3d(Sphere3{1.5}, r, rp) == doctest::Approx(green3d(Sphere3{1.5}, rp, r)).epsilon(1e-13));
    }
}

TEST_CASE("identity-map Green function equals the unit-disk formula") {
    const Mapped g{LaurentMap::identity()};
    for (auto [z, w] : std::vector<std::pair<cplx, cplx>>{{2.0, 3.0}, {cplx(1.5, 1.0), cplx(-2.0, 0.5)}})
        CHECK(green_two_point(g, z, w) == doctest::Approx(green_two_point(DiskGeometry{1.0}, z, w)).epsilon(1e-13));
}

TEST_CASE("logarithmic singularity is removable") {
    for (const auto& m : sample_maps()) {
        const Mapped g{m};
        const cplx z = m.xi(std::polar(2.0, 0.7));
        const double a = green_two_point(g, z, z + 1e-4) + std::log(1e-4);
        const double b = green_two_point(g, z, z + 1e-6) + std::log(1e-6);
        CHECK(std::abs(a - b) <= 1e-3);
    }
    // regular part at z = w is ln(R (|z|^2 / R^2 - 1))
    const double a = green_two_point(DiskGeometry{2.0}, 3.0, 3.0 + 1e-6) + std::log(1e-6);
    CHECK(a == doctest::Approx(std::log(2.5)).epsilon(1e-5));
    CHECK_THROWS(green_two_point(DiskGeometry{1.0}, 3.0, 3.0));
    CHECK_THROWS_AS(green_two_point(DiskGeometry{1.0}, 0.3, 3.0), DomainError);
}

TEST_CASE("Cayley transform carries the half-plane Green function to the disk") {
    coulomb::rng::CounterRng rng(23, 0, 0);
    for (int k = 0; k < 20; ++k) {
        const cplx z(4.0 * rng.uniform() - 2.0, 0.1 + 2.0 * rng.uniform()), w(4.0 * rng.uniform() - 2.0, 0.1 + 2.0 * rng.uniform());
        CHECK(green_two_point(HalfPlane{}, z, w) == doctest::Approx(green_two_point(DiskGeometry{1.0}, cayley(z), cayley(w))).epsilon(1e-11));
    }
}

TEST_CASE("maps: construction checks") {
    CHECK_THROWS_AS(LaurentMap(1.0, {0.0, 2.0}), DomainError);
    CHECK_THROWS_AS(LaurentMap(-1.0, {}), DomainError);
    CHECK_THROWS_AS(LaurentMap::ellipse(2.0, 1.0).zeta(0.3), DomainError);
    CHECK_NOTHROW(LaurentMap::interval().zeta(0.3));
    const auto e = LaurentMap::ellipse(2.0, 1.0);
    CHECK(std::abs(e.xi(1.0) - 2.0) <= 1e-15);
    CHECK(std::abs(e.xi(I) - I) <= 1e-15);
    const auto j = LaurentMap::joukowski(2.0, 0.5);
    CHECK(std::abs(j.xi(1.0) - 1.25) <= 1e-15);
}

TEST_CASE("quadratic droplets") {
    const auto disk = quadratic_droplet(0.0, kPi);
    CHECK(disk.scale() == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& c : disk.coeffs()) CHECK(std::abs(c) <= 1e-15);
    const auto d = quadratic_droplet(-0.25, kPi);
    // ellipse with semi-axes sqrt 3 and 1/sqrt 3, area pi
    for (double t : {0.1, 0.9, 2.2, 4.4}) {
        const cplx z = d.xi(std::polar(1.0, t));
        CHECK(z.real() * z.real() / 3.0 + 3.0 * z.imag() * z.imag() == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(quadratic_droplet(0.5, 1.0), DomainError);
}

TEST_CASE("radial droplet radii") {
    auto r2 = droplet_radii([](double r) { return r * r; }, [](double r) { return 2.0 * r; });
    CHECK(r2.inner == doctest::Approx(0.0).scale(1e-12));
    CHECK(r2.outer == doctest::Approx(1.0).epsilon(1e-12));
    for (double a : {0.5, 1.0, 3.0}) {
        auto ri = droplet_radii([a](double r) { return r * r - 2.0 * a * std::log(r); }, [a](double r) { return 2.0 * r - 2.0 * a / r; },
                                1e-9);
        CHECK(ri.inner == doctest::Approx(std::sqrt(a)).epsilon(1e-12));
        CHECK(ri.outer == doctest::Approx(std::sqrt(1.0 + a)).epsilon(1e-12));
    }
    auto r4 = droplet_radii([](double r) { return std::pow(r, 4); }, [](double r) { return 4.0 * r * r * r; });
    CHECK(r4.outer == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
}
