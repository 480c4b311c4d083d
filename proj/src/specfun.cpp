#include "coulomb/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace coulomb::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2j} / (2j)! for j = 1..8
constexpr std::array<double, 8> kBernoulliOverFact = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0};

double lanczos_positive(double x) {
    // valid for x >= 1/2
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

bool is_nonpositive_integer(double s) {
    return s <= 0.0 && s == std::floor(s);
}

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be positive and finite");
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_positive(1.0 - x);
    }
    return lanczos_positive(x);
}

double hurwitz_zeta(double s, double a) {
    if (s == 1.0) throw DomainError("hurwitz_zeta: pole at s = 1");
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be positive");

    // For s a non-positive integer the corrections vanish beyond order 1 - s,
    // so the expansion is exact without a shift (up to -s <= 14).
    int n = 0;
    if (!(is_nonpositive_integer(s) && s >= -14.0)) {
        while (a + n < 10.0) ++n;
    }

    double head = 0.0;
    for (int k = n - 1; k >= 0; --k) head += std::pow(a + k, -s);

    const double m = a + n;
    double tail = std::pow(m, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(m, -s);
    double rising = s;                  // (s)_{2j-1}
    double mpow = std::pow(m, -s - 1.0); // m^{-s-2j+1}
    for (int j = 1; j <= 8; ++j) {
        tail += kBernoulliOverFact[j - 1] * rising * mpow;
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        mpow /= m * m;
    }
    return head + tail;
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

double carlson_rf(double x, double y, double z) {
    if (x < 0 || y < 0 || z < 0 || (x + y == 0) || (x + z == 0) || (y + z == 0))
        throw DomainError("carlson_rf: invalid arguments");
    constexpr double errtol = 0.0008;
    double xt = x, yt = y, zt = z;
    double ave = 0, dx = 1, dy = 1, dz = 1;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = (xt + yt + zt) / 3.0;
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) break;
    }
    const double e2 = dx * dy - dz * dz;
    const double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(ave);
}

double carlson_rd(double x, double y, double z) {
    if (x < 0 || y < 0 || z <= 0 || (x + y == 0)) throw DomainError("carlson_rd: invalid arguments");
    constexpr double errtol = 0.0005;
    double xt = x, yt = y, zt = z;
    double sum = 0.0, fac = 1.0;
    double ave = 0, dx = 1, dy = 1, dz = 1;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = 0.2 * (xt + yt + 3.0 * zt);
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) break;
    }
    const double ea = dx * dy, eb = dz * dz, ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
    constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0,
                     c5 = 0.25 * c3, c6 = 1.5 * c4;
    return 3.0 * sum +
           fac * (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                  dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
               (ave * std::sqrt(ave));
}

EllipticPair elliptic_integrals(double phi, double k) {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    if (!(phi >= 0.0 && phi <= half_pi + 1e-15)) throw DomainError("elliptic_integrals: phi outside [0, pi/2]");
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("elliptic_integrals: k outside [0, 1]");
    if (phi == 0.0) return {0.0, 0.0};
    const double s = std::sin(phi);
    const double c = std::cos(std::min(phi, half_pi));
    const double cc = (phi >= half_pi) ? 0.0 : c * c;
    const double q = (1.0 - k * s) * (1.0 + k * s);
    if (q <= 0.0 && cc == 0.0) throw DomainError("elliptic_integrals: F diverges at phi = pi/2, k = 1");
    const double rf = carlson_rf(cc, q, 1.0);
    EllipticPair out;
    out.F = s * rf;
    if (k == 0.0) {
        out.E = out.F;
    } else {
        out.E = s * rf - (k * k / 3.0) * s * s * s * carlson_rd(cc, q, 1.0);
    }
    return out;
}

EllipticPair complete_elliptic(double k) {
    return elliptic_integrals(0.5 * std::numbers::pi, k);
}

} // namespace coulomb::specfun
