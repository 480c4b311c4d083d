#include "coulomb/domains.hpp"
#include "coulomb/rng.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <numbers>

using namespace coulomb::domains;
using coulomb::DomainError;
using coulomb::UnsupportedError;

namespace {

constexpr double kPi = std::numbers::pi;

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

double gk_split(const std::function<double(double)>& f, std::vector<double> pts, double tol = 1e-12) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += gk(f, pts[i], pts[i + 1], tol);
    return s;
}

// Background potential of a planar convex body at an interior point from the
// distance rho(phi) to its boundary along each ray:
// rho_b int ln|r - r'| d^2 r' = rho_b int dphi (rho^2 ln rho / 2 - rho^2 / 4).
double planar_ray_potential(double rho_b, const std::function<double(double)>& ray, std::vector<double> breaks) {
    auto f = [&](double phi) {
        const double r = ray(phi);
        return 0.5 * r * r * std::log(r) - 0.25 * r * r;
    };
    return rho_b * gk_split(f, breaks);
}

double ellipse_ray(double a, double b, double x, double y, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double A = c * c / (a * a) + s * s / (b * b), B = x * c / (a * a) + y * s / (b * b),
                 C = x * x / (a * a) + y * y / (b * b) - 1.0;
    return (-B + std::sqrt(B * B - A * C)) / A;
}

double rect_ray(const Rectangle& q, double x, double y, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    double t = INFINITY;
    if (c > 0) t = std::min(t, (q.hi[0] - x) / c);
    if (c < 0) t = std::min(t, (q.lo[0] - x) / c);
    if (s > 0) t = std::min(t, (q.hi[1] - y) / s);
    if (s < 0) t = std::min(t, (q.lo[1] - y) / s);
    return t;
}

std::vector<double> rect_breaks(const Rectangle& q, double x, double y) {
    std::vector<double> b{0.0, 2.0 * kPi};
    for (double cx : {q.lo[0], q.hi[0]})
        for (double cy : {q.lo[1], q.hi[1]}) {
            double a = std::atan2(cy - y, cx - x);
            if (a < 0) a += 2.0 * kPi;
            b.push_back(a);
        }
    std::sort(b.begin(), b.end());
    return b;
}

// int over [0,a] x [0,b] x [0,c] of 1 / |r|, z done in closed form
double corner_box_inverse_distance(double a, double b, double c) {
    if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
    auto inner = [&](double x) {
        return gk([&](double y) {
                      const double r = std::hypot(x, y);
                      return r == 0.0 ? 0.0 : std::asinh(c / r);
                  },
                  0.0, b, 1e-11);
    };
    return gk(inner, 0.0, a, 1e-11);
}

double cuboid_oracle(const Cuboid& q, double rho_b, const Point& r) {
    double s = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
        double e[3];
        for (int j = 0; j < 3; ++j) e[j] = (mask >> j & 1) ? q.hi[j] - r[j] : r[j] - q.lo[j];
        s += corner_box_inverse_distance(e[0], e[1], e[2]);
    }
    return -rho_b * s;
}

struct Uniform {
    coulomb::rng::CounterRng rng;
    double operator()(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }
};

double laplacian(const UniformDomain& dom, Point r, double h) {
    const double v0 = background_potential(dom, r);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        Point a = r, b = r;
        a[j] += h;
        b[j] -= h;
        s += background_potential(dom, a) + background_potential(dom, b) - 2.0 * v0;
    }
    return s / (h * h);
}

} // namespace

TEST_CASE("free-space Coulomb potential in d = 1, 2, 3") {
    CHECK(coulomb_of_distance(2, std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(coulomb_of_distance(3, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(coulomb_of_distance(1, 5.0) == doctest::Approx(-5.0).epsilon(1e-15));
    CHECK(kernel_eval(Kernel::coulomb(3), {0, 0, 0}, {2, 0, 0}) == doctest::Approx(0.5));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(chi(2) == 1.0);
    CHECK(chi(5) == 3.0);
}

TEST_CASE("ball potential: centre value and boundary continuity") {
    // textbook -(3R^2 - r^2) / (2R^3) for charge -1
    const UniformDomain b3{Ball{3, 1.0}, 1.0};
    CHECK(background_potential(b3, {0, 0, 0}) == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(background_potential(b3, {0.5, 0, 0}) == doctest::Approx(-(3.0 - 0.25) / 2.0).epsilon(1e-14));
    for (double R : {0.5, 1.0, 2.0}) {
        const UniformDomain b2{Ball{2, R}, 3.0};
        CHECK(background_potential(b2, {R * (1 - 1e-13), 0}) == doctest::Approx(3.0 * std::log(R)).epsilon(1e-10).scale(1.0));
        CHECK(background_potential(b2, {0, R * (1 + 1e-13)}) == doctest::Approx(3.0 * std::log(R)).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("shell theorem: exterior potential of a ball is a point charge") {
    Uniform u{{5, 0, 0}};
    for (int d : {1, 2, 3, 5})
        for (int k = 0; k < 20; ++k) {
            const double R = u(0.5, 2.0), N = u(0.5, 4.0), rr = u(1.01, 5.0) * R;
            Point r(d, 0.0);
            r[0] = rr;
            CHECK(std::abs(background_potential({Ball{d, R}, N}, r) + N * coulomb_of_distance(d, rr)) <=
                  1e-12 * std::max(1.0, std::abs(N * coulomb_of_distance(d, rr))));
        }
}

TEST_CASE("shell theorem: a spherical cavity sees a constant potential") {
    Uniform u{{6, 0, 0}};
    for (int d : {2, 3, 4}) {
        // big ball minus small ball at the same density
        const double R = 2.0, c = 0.8, rho = 0.7;
        const UniformDomain big{Ball{d, R}, rho * volume(Ball{d, R})}, small{Ball{d, c}, rho * volume(Ball{d, c})};
        auto cavity = [&](const Point& r) { return background_potential(big, r) - background_potential(small, r); };
        const double ref = cavity(Point(d, 0.0));
        for (int k = 0; k < 10; ++k) {
            Point r(d, 0.0);
            for (auto& x : r) x = u(-0.45, 0.45);
            CHECK(cavity(r) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("ellipse interior potential matches the ray oracle") {
    const Ellipse2D e{2.0, 1.0};
    const UniformDomain dom{e, 1.0};
    const double rho = 1.0 / volume(e);
    for (auto p : std::vector<Point>{{0.3, 0.2}, {0.0, 0.0}, {-1.5, 0.4}, {1.2, -0.7}}) {
        const double want = planar_ray_potential(rho, [&](double t) { return ellipse_ray(2.0, 1.0, p[0], p[1], t); },
                                                 {0.0, kPi / 2, kPi, 1.5 * kPi, 2.0 * kPi});
        CHECK(background_potential(dom, p) == doctest::Approx(want).epsilon(1e-10));
    }
    CHECK(background_potential(dom, {0.3, 0.2}) == doctest::Approx(potential_oracle(dom, {0.3, 0.2}, 1e-10).value).epsilon(1e-9));
}

TEST_CASE("ellipse exterior has no closed form") {
    CHECK_THROWS_AS(background_potential({Ellipse2D{2.0, 1.0}, 1.0}, {3.0, 0.0}), UnsupportedError);
}

TEST_CASE("disk interior potential matches the ray oracle") {
    const UniformDomain dom{Ball{2, 1.5}, 2.0};
    const double rho = 2.0 / volume(Ball{2, 1.5});
    for (auto p : std::vector<Point>{{0.0, 0.0}, {0.7, 0.3}, {-1.2, 0.5}}) {
        const double want = planar_ray_potential(rho, [&](double t) { return ellipse_ray(1.5, 1.5, p[0], p[1], t); },
                                                 {0.0, kPi, 2.0 * kPi});
        CHECK(background_potential(dom, p) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("rectangle potential matches the ray oracle inside") {
    const Rectangle q{{0.0, 0.0}, {1.0, 1.0}};
    const UniformDomain dom{q, 1.0};
    for (auto p : std::vector<Point>{{0.5, 0.5}, {0.2, 0.7}, {0.9, 0.05}}) {
        const double want = planar_ray_potential(1.0, [&](double t) { return rect_ray(q, p[0], p[1], t); }, rect_breaks(q, p[0], p[1]));
        CHECK(background_potential(dom, p) == doctest::Approx(want).epsilon(1e-9));
    }
    const Rectangle wide{{-1.0, 0.0}, {2.0, 0.5}};
    const UniformDomain dw{wide, 3.0};
    const double want = planar_ray_potential(2.0, [&](double t) { return rect_ray(wide, 0.3, 0.1, t); }, rect_breaks(wide, 0.3, 0.1));
    CHECK(background_potential(dw, {0.3, 0.1}) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("cuboid potential matches corner-box quadrature") {
    const Cuboid c{{0, 0, 0}, {1, 1, 1}};
    const UniformDomain dom{c, 1.0};
    const Point centre{0.5, 0.5, 0.5};
    const double closed = background_potential(dom, centre);
    CHECK(std::abs(closed - cuboid_oracle(c, 1.0, centre)) <= 1e-8);
    // centre of the unit cube: -(3 ln(2 + sqrt 3) - pi / 2)
    CHECK(closed == doctest::Approx(-(3.0 * std::log(2.0 + std::sqrt(3.0)) - kPi / 2.0)).epsilon(1e-13));
    const Cuboid box{{0, 0, 0}, {2, 1, 0.5}};
    const UniformDomain db{box, 1.0};
    for (auto p : std::vector<Point>{{0.3, 0.2, 0.1}, {1.9, 0.9, 0.45}, {1.0, 0.5, 0.25}})
        CHECK(background_potential(db, p) == doctest::Approx(cuboid_oracle(box, 1.0, p)).epsilon(1e-8));
}

TEST_CASE("rectangle and cuboid agree with the library oracle at random points") {
    Uniform u{{7, 0, 0}};
    const UniformDomain rect{Rectangle{{0, 0}, {1, 1}}, 1.0}, cube{Cuboid{{0, 0, 0}, {1, 1, 1}}, 1.0};
    for (int k = 0; k < 20; ++k) {
        const Point p{u(-0.5, 1.5), u(-0.5, 1.5)};
        const double closed = background_potential(rect, p);
        CHECK(std::abs(closed - potential_oracle(rect, p, 1e-10).value) <= 1e-6 * std::abs(closed));
    }
    for (int k = 0; k < 4; ++k) {
        const Point p{u(0.05, 0.95), u(0.05, 0.95), u(0.05, 0.95)};
        const double closed = background_potential(cube, p);
        CHECK(std::abs(closed - potential_oracle(cube, p, 1e-9).value) <= 1e-6 * std::abs(closed));
    }
}

TEST_CASE("four-dimensional ellipsoid at its centre") {
    // axes (2,1,1,1): only the polar angle from the long axis matters
    const std::vector<double> axes{2.0, 1.0, 1.0, 1.0};
    const double vol = kPi * kPi / 2.0 * 2.0, rho = 1.0 / vol;
    const double want = -rho * 4.0 * kPi * gk([](double psi) {
                            const double c = std::cos(psi), s = std::sin(psi);
                            return s * s / (2.0 * (c * c / 4.0 + s * s));
                        },
                                               0.0, kPi);
    const UniformDomain dom{Hyperellipsoid{axes}, 1.0};
    CHECK(volume(Hyperellipsoid{axes}) == doctest::Approx(vol).epsilon(1e-14));
    CHECK(background_potential(dom, {0, 0, 0, 0}) == doctest::Approx(want).epsilon(1e-10));
    // the axis order must not matter
    const UniformDomain swapped{Hyperellipsoid{{1.0, 1.0, 1.0, 2.0}}, 1.0};
    CHECK(background_potential(swapped, {0, 0, 0, 0}) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("three-dimensional ellipsoid reduces to the ball") {
    const UniformDomain e{Hyperellipsoid{{1.0, 1.0, 1.0}}, 2.0}, b{Ball{3, 1.0}, 2.0};
    for (auto p : std::vector<Point>{{0.1, 0.2, 0.3}, {0.0, 0.0, 0.9}, {2.0, 1.0, 0.0}})
        CHECK(background_potential(e, p) == doctest::Approx(background_potential(b, p)).epsilon(1e-10));
}

TEST_CASE("ellipsoid far field tends to a point charge") {
    for (const auto& axes : std::vector<std::vector<double>>{{1.0, 2.0, 0.5}, {1.0, 1.0, 1.0, 2.0}}) {
        const int d = static_cast<int>(axes.size());
        const UniformDomain dom{Hyperellipsoid{axes}, 1.5};
        double prev = INFINITY;
        for (double R : {10.0, 100.0, 1000.0}) {
            Point r(d, R / std::sqrt(static_cast<double>(d)));
            const double ratio = background_potential(dom, r) / (-1.5 * coulomb_of_distance(d, R));
            CHECK(std::abs(ratio - 1.0) < prev);
            prev = std::abs(ratio - 1.0);
        }
        CHECK(prev < 1e-5);
    }
}

TEST_CASE("Poisson equation inside, Laplace outside") {
    Uniform u{{8, 0, 0}};
    const std::vector<UniformDomain> doms{{Ball{2, 1.0}, 2.0},        {Ball{3, 1.3}, 1.0},
                                          {Ball{5, 1.0}, 1.0},        {Segment1D{1.0}, 2.0},
                                          {Annulus2D{1.0, 0.4}, 1.0}, {Ellipse2D{2.0, 1.0}, 1.0},
                                          {Hyperellipsoid{{1.0, 1.5, 0.8}}, 1.0}, {Rectangle{{0, 0}, {1, 2}}, 1.0},
                                          {Cuboid{{0, 0, 0}, {1, 1, 1}}, 1.0}};
    for (const auto& dom : doms) {
        const int d = dimension(dom.geometry);
        const double want = unit_sphere_area(d) * chi(d) * dom.rho_b();
        int found = 0;
        for (int tries = 0; found < 20 && tries < 200000; ++tries) {
            Point r(d);
            for (auto& x : r) x = u(-1.2, 2.2);
            // keep the stencil well away from the boundary
            bool deep = contains(dom.geometry, r);
            for (std::size_t j = 0; j < r.size() && deep; ++j)
                for (double h : {-0.05, 0.05}) {
                    Point q = r;
                    q[j] += h;
                    deep = deep && contains(dom.geometry, q);
                }
            if (!deep) continue;
            ++found;
            CHECK(laplacian(dom, r, 1e-3) == doctest::Approx(want).epsilon(1e-4));
        }
        CHECK(found == 20);
    }
    // exterior harmonicity for balls and ellipsoids
    for (const auto& dom : std::vector<UniformDomain>{{Ball{3, 1.0}, 1.0}, {Ball{2, 1.0}, 1.0}, {Hyperellipsoid{{1.0, 1.5, 0.8}}, 1.0}}) {
        const int d = dimension(dom.geometry);
        for (int k = 0; k < 10; ++k) {
            Point r(d, 0.0);
            r[0] = u(2.0, 4.0);
            r[1] = u(-1.0, 1.0);
            CHECK(std::abs(laplacian(dom, r, 1e-3)) <= 1e-4);
        }
    }
}

TEST_CASE("interaction energy examples") {
    CHECK(interaction_energy({Ball{2, 1.0}, 1.0}, {{0.0, 0.0}}) == doctest::Approx(-3.0 / 8.0).epsilon(1e-14));
    CHECK(interaction_energy({Segment1D{1.0}, 2.0}, {{-0.5}, {0.5}}) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("self energy of a ball equals half the background integral of its potential") {
    // U_bb = -(rho_b / 2) int V, checked on the three-ball radially
    for (double R : {0.7, 1.0, 2.0}) {
        const UniformDomain dom{Ball{3, R}, 2.0};
        const double rho = dom.rho_b();
        const double integral = gk([&](double r) { return 4.0 * kPi * r * r * background_potential(dom, {r, 0, 0}); }, 0.0, R);
        CHECK(self_energy(dom) == doctest::Approx(-0.5 * rho * integral).epsilon(1e-11));
    }
}

TEST_CASE("quadratic coefficients: symmetric and elongated cases") {
    const auto c = hyperellipsoid_coefficients({1.0, 1.0, 1.0}, 1.0);
    for (double a : c.alpha) CHECK(a == doctest::Approx(0.5).epsilon(1e-14));
    const auto e = hyperellipsoid_coefficients({1.0, 1.0, 2.0}, 1.0);
    CHECK(e.alpha[0] + e.alpha[1] + e.alpha[2] == doctest::Approx(0.75).epsilon(1e-14));
    // same density on scaled axes leaves the coefficients unchanged
    for (double s : {0.3, 2.0, 7.5}) {
        const auto es = hyperellipsoid_coefficients({s, s, 2.0 * s}, s * s * s);
        for (int j = 0; j < 3; ++j) CHECK(es.alpha[j] == doctest::Approx(e.alpha[j]).epsilon(1e-12));
    }
    // Carlson and quadrature routes agree
    const auto q = hyperellipsoid_coefficients({0.7, 1.3, 2.1}, 1.0, CoeffMethod::quadrature);
    const auto k = hyperellipsoid_coefficients({0.7, 1.3, 2.1}, 1.0, CoeffMethod::carlson);
    CHECK(q.alpha0 == doctest::Approx(k.alpha0).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) CHECK(q.alpha[j] == doctest::Approx(k.alpha[j]).epsilon(1e-12));
    CHECK_THROWS_AS(hyperellipsoid_coefficients({1.0, 1.0, 1.0, 1.0}, 1.0, CoeffMethod::carlson), UnsupportedError);
}

TEST_CASE("quadratic coefficients: sum rule over random axes") {
    Uniform u{{9, 0, 0}};
    for (int d : {3, 4, 5})
        for (int k = 0; k < 5; ++k) {
            std::vector<double> axes(d);
            for (auto& a : axes) a = u(0.4, 3.0);
            const double N = u(0.5, 3.0);
            const auto c = hyperellipsoid_coefficients(axes, N);
            double sum = 0.0;
            for (double a : c.alpha) sum += a;
            const double rho = N / volume(Hyperellipsoid{axes});
            CHECK(sum == doctest::Approx(rho * unit_sphere_area(d) * chi(d) / 2.0).epsilon(1e-10));
            // interior potential is the quadratic form
            Point r(d);
            double q = c.alpha0;
            for (int j = 0; j < d; ++j) {
                r[j] = 0.3 * axes[j] / std::sqrt(static_cast<double>(d));
                q += c.alpha[j] * r[j] * r[j];
            }
            CHECK(background_potential({Hyperellipsoid{axes}, N}, r) == doctest::Approx(q).epsilon(1e-10));
        }
}

TEST_CASE("cube self energy") {
    CHECK(cube_self_energy() == doctest::Approx(0.94115632219).epsilon(1e-10));
    const auto mc = cube_self_energy_oracle(2000000, 3);
    CHECK(std::abs(mc.value - cube_self_energy()) <= 3.0 * mc.est_error);
    CHECK(mc.est_error <= 1e-3);
    // homogeneity: side L gives L^5
    const auto mc2 = cube_self_energy_oracle(2000000, 3, 2.0);
    CHECK(mc2.value == doctest::Approx(32.0 * mc.value).epsilon(1e-12));
    // closed self energy of a cube domain scales with rho_b^2 L^5
    const UniformDomain cube{Cuboid{{0, 0, 0}, {2, 2, 2}}, 3.0};
    CHECK(self_energy(cube) == doctest::Approx(std::pow(3.0 / 8.0, 2) * 32.0 * cube_self_energy()).epsilon(1e-14));
}

TEST_CASE("invalid geometries are rejected") {
    CHECK_THROWS_AS(validate(Ball{3, -1.0}), DomainError);
    CHECK_THROWS_AS(validate(Annulus2D{1.0, 1.5}), DomainError);
    CHECK_THROWS_AS(validate(Ellipse2D{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(Cuboid{{0, 0, 0}, {1, 0, 1}}), DomainError);
    CHECK_THROWS_AS(background_potential({Ball{3, 1.0}, 1.0}, {0.0, 0.0}), DomainError);
}
