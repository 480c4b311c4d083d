#include "coulomb/specfun.hpp"

#include <doctest.h>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>

using namespace coulomb::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

// sum_{k<K} (k + a)^{-s} plus the integral and half-term tail, s > 1
double hurwitz_direct(double s, double a, int K) {
    double sum = 0.0;
    for (int k = K - 1; k >= 0; --k) sum += std::pow(k + a, -s);
    const double x = K + a;
    return sum + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s * std::pow(x, -s - 1.0) / 12.0;
}

// complete integrals by the arithmetic-geometric mean
EllipticPair agm_complete(double k) {
    double a = 1.0, b = std::sqrt(1.0 - k * k), c = k, sum = 0.5 * c * c, pow2 = 0.5;
    for (int it = 0; it < 40 && std::abs(c) > 1e-16 * a; ++it) {
        const double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    const double K = kPi / (2.0 * a);
    return {K, K * (1.0 - sum)};
}

} // namespace

TEST_CASE("log_gamma at half and whole integers") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-14);
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-14));
}

TEST_CASE("log_gamma agrees with the standard library") {
    for (double x : {0.1, 0.37, 1.5, 3.25, 10.0, 47.5, 170.3})
        CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
}

TEST_CASE("log_gamma recurrence on [0.5, 50]") {
    double worst = 0.0;
    for (double x = 0.5; x <= 50.0; x += 0.0625)
        worst = std::max(worst, std::abs(log_gamma(x + 1.0) - log_gamma(x) - std::log(x)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("hurwitz_zeta reduces to Riemann zeta at a = 1") {
    for (double s : {2.0, 0.5, -1.0})
        CHECK(hurwitz_zeta(s, 1.0) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-12));
    CHECK(riemann_zeta(2.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-14));
    CHECK(riemann_zeta(-1.0) == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("hurwitz_zeta at a = 1/2") {
    // (2^s - 1) zeta(s), and a direct sum with its tail
    CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(hurwitz_direct(2.0, 0.5, 1000000)).epsilon(1e-12));
    const double half = (std::sqrt(2.0) - 1.0) * boost::math::zeta(0.5);
    CHECK(hurwitz_zeta(0.5, 0.5) == doctest::Approx(half).epsilon(1e-12));
    CHECK(hurwitz_zeta(0.5, 0.5) == doctest::Approx(-0.6048986434216).epsilon(1e-10));
}

TEST_CASE("hurwitz_zeta direct sums for s > 1") {
    for (double s : {1.5, 3.0, 4.5})
        for (double a : {0.2, 0.75, 2.5})
            CHECK(hurwitz_zeta(s, a) == doctest::Approx(hurwitz_direct(s, a, 200000)).epsilon(1e-11));
}

TEST_CASE("hurwitz_zeta Bernoulli polynomial identity at s = -1") {
    for (double a : {0.25, 0.5, 0.75})
        CHECK(std::abs(hurwitz_zeta(-1.0, a) + 0.5 * (a * a - a + 1.0 / 6.0)) <= 1e-10);
}

TEST_CASE("hurwitz_zeta rejects the pole and non-positive shifts") {
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), coulomb::DomainError);
    CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), coulomb::DomainError);
}

TEST_CASE("Carlson integrals against their closed special values") {
    CHECK(carlson_rf(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(carlson_rd(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // R_F(0, 1, 1) = pi / 2, R_F(x, x, x) = x^{-1/2}
    CHECK(carlson_rf(0.0, 1.0, 1.0) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    CHECK(carlson_rf(4.0, 4.0, 4.0) == doctest::Approx(0.5).epsilon(1e-14));
    // homogeneity R_D(l x, l y, l z) = l^{-3/2} R_D(x, y, z)
    CHECK(carlson_rd(2.0, 6.0, 10.0) == doctest::Approx(carlson_rd(1.0, 3.0, 5.0) / std::pow(2.0, 1.5)).epsilon(1e-13));
}

TEST_CASE("elliptic integrals: degenerate modulus") {
    for (double phi : {0.0, 0.3, 1.2, kPi / 2.0}) {
        const auto p = elliptic_integrals(phi, 0.0);
        CHECK(p.F == doctest::Approx(phi).epsilon(1e-15));
        CHECK(p.E == doctest::Approx(phi).epsilon(1e-15));
    }
}

TEST_CASE("elliptic integrals: complete values match the AGM") {
    for (double k : {0.1, 0.5, 0.9, 0.999}) {
        const auto c = complete_elliptic(k), agm = agm_complete(k), ph = elliptic_integrals(kPi / 2.0, k);
        CHECK(c.F == doctest::Approx(agm.F).epsilon(1e-13));
        CHECK(c.E == doctest::Approx(agm.E).epsilon(1e-13));
        CHECK(ph.F == doctest::Approx(agm.F).epsilon(1e-13));
    }
}

TEST_CASE("elliptic integrals: unit modulus below pi/2") {
    for (double phi : {0.2, 0.9, 1.5}) {
        const auto p = elliptic_integrals(phi, 1.0);
        CHECK(p.F == doctest::Approx(std::atanh(std::sin(phi))).epsilon(1e-13));
        CHECK(p.E == doctest::Approx(std::sin(phi)).epsilon(1e-13));
    }
    CHECK_THROWS(elliptic_integrals(kPi / 2.0, 1.0));
}

TEST_CASE("elliptic integrals against Boost and E <= F") {
    for (double k : {0.05, 0.4, 0.8, 0.97})
        for (double phi : {0.1, 0.7, 1.3}) {
            const auto p = elliptic_integrals(phi, k);
            CHECK(p.F == doctest::Approx(boost::math::ellint_1(k, phi)).epsilon(1e-13));
            CHECK(p.E == doctest::Approx(boost::math::ellint_2(k, phi)).epsilon(1e-13));
            CHECK(p.E <= p.F);
        }
}
