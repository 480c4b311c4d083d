#include "coulomb/balayage.hpp"
#include "coulomb/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace coulomb::balayage {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

BalayageComponent circle(double radius, double mass) {
    return {2, radius, radius, [mass](double) { return mass / (2.0 * kPi); }, mass};
}

// mass-weighted Coulomb potential of one piece at r
EvalResult component_potential(const BalayageComponent& c, const Point& r, double tol) {
    using domains::coulomb_of_distance;
    if (c.d == 2) {
        auto f = [&](double t) {
            const double dx = r[0] - c.a1 * std::cos(t), dy = r[1] - c.a2 * std::sin(t);
            return coulomb_of_distance(2, std::hypot(dx, dy)) * c.density(t);
        };
        return quad::gauss_kronrod_split(f, 0.0, 2.0 * kPi, {0.5 * kPi, kPi, 1.5 * kPi}, tol);
    }
    if (c.d == 1) {
        const double x = r[0];
        return {0.5 * c.mass * (coulomb_of_distance(1, std::abs(x - c.a1)) + coulomb_of_distance(1, std::abs(x + c.a1))),
                0.0};
    }
    // uniform sphere: average over the polar angle with weight sin^{d-2}
    double rn = 0.0;
    for (double x : r) rn += x * x;
    rn = std::sqrt(rn);
    const double R = c.a1;
    auto f = [&](double th) {
        const double s = std::sin(0.5 * th);
        const double dist = std::sqrt((rn - R) * (rn - R) + 4.0 * rn * R * s * s);
        return coulomb_of_distance(c.d, dist) * std::pow(std::sin(th), c.d - 2);
    };
    const double weight = std::sqrt(kPi) * std::exp(std::lgamma(0.5 * (c.d - 1)) - std::lgamma(0.5 * c.d));
    auto res = quad::gauss_kronrod(f, 0.0, kPi, tol);
    return {c.mass * res.value / weight, c.mass * res.est_error / weight};
}

void require_planar_hole(const domains::Geometry& g) {
    if (domains::dimension(g) != 2 || std::holds_alternative<domains::Rectangle>(g))
        throw UnsupportedError("hole energy supports disk, annulus and ellipse holes only");
}

} // namespace

std::pair<double, double> annulus_weights(double c) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("annulus needs 0 < c < 1");
    const double lc = std::log(c);
    const double inner = -(0.5 + c * c / (1.0 - c * c) * lc) / lc;
    return {1.0 - inner, inner};
}

BalayageMeasure balayage_measure(const domains::UniformDomain& dom) {
    domains::validate(dom.geometry);
    const double Q = dom.N;
    BalayageMeasure m;
    m.total_mass = Q;
    std::visit(overloaded{
                   [&](const domains::Ball& b) {
                       BalayageComponent c;
                       c.d = b.d;
                       c.a1 = c.a2 = b.R;
                       if (b.d == 2) {
                           c = circle(b.R, Q);
                       } else if (b.d == 1) {
                           c.density = [Q](double) { return 0.5 * Q; }; // point mass at each end
                       } else {
                           const double area = domains::unit_sphere_area(b.d) * std::pow(b.R, b.d - 1);
                           c.density = [Q, area](double) { return Q / area; };
                       }
                       c.mass = Q;
                       m.components.push_back(c);
                   },
                   [&](const domains::Annulus2D& a) {
                       const auto [outer, inner] = annulus_weights(a.c);
                       m.outer_weight = outer;
                       m.inner_weight = inner;
                       m.components.push_back(circle(a.R, Q * outer));
                       m.components.push_back(circle(a.c * a.R, Q * inner));
                   },
                   [&](const domains::Ellipse2D& e) {
                       // mass per unit parameter angle, normalised to total Q
                       const double k = (e.a1 * e.a1 - e.a2 * e.a2) / (e.a1 * e.a1 + e.a2 * e.a2);
                       m.components.push_back(
                           {2, e.a1, e.a2, [Q, k](double t) { return Q / (2.0 * kPi) * (1.0 - k * std::cos(2.0 * t)); }, Q});
                   },
                   [&](const auto&) {
                       throw UnsupportedError("balayage measure is available for ball, annulus and ellipse only");
                   },
               },
               dom.geometry);
    return m;
}

EvalResult balayage_potential(const BalayageMeasure& m, const Point& r, double tol) {
    EvalResult total{0.0, 0.0};
    for (const auto& c : m.components) {
        const auto part = component_potential(c, r, tol);
        total.value += part.value;
        total.est_error += part.est_error;
    }
    return total;
}

std::complex<double> exterior_moment(const domains::Geometry& g, int l) {
    using C = std::complex<double>;
    if (l < 0) throw DomainError("moment order must be non-negative");
    domains::validate(g);
    if (domains::dimension(g) != 2) throw UnsupportedError("moments are defined for planar bodies");
    return std::visit(
        overloaded{
            [&](const domains::Ball& b) { return l == 0 ? C(kPi * b.R * b.R) : C(0.0); },
            [&](const domains::Annulus2D& a) { return l == 0 ? C(kPi * a.R * a.R * (1.0 - a.c * a.c)) : C(0.0); },
            [&](const domains::Ellipse2D& e) {
                // w = r (a1 cos t + i a2 sin t), area element a1 a2 r dr dt, radial part 1/(l + 2)
                const int n = 2 * l + 16; // trapezoid is exact for trig polynomials of degree < n
                const double re = quad::periodic_trapezoid(
                    [&](double t) { return std::real(std::pow(C(e.a1 * std::cos(t), e.a2 * std::sin(t)), l)); }, n);
                const double im = quad::periodic_trapezoid(
                    [&](double t) { return std::imag(std::pow(C(e.a1 * std::cos(t), e.a2 * std::sin(t)), l)); }, n);
                return C(re, im) * (e.a1 * e.a2 / (l + 2.0));
            },
            [&](const domains::Rectangle& q) {
                auto part = [&](bool imag) {
                    return quad::nested2d(
                               [&](double x, double y) {
                                   const C w = std::pow(C(x, y), l);
                                   return imag ? w.imag() : w.real();
                               },
                               q.lo[0], q.hi[0], [&](double) { return q.lo[1]; }, [&](double) { return q.hi[1]; }, 1e-12)
                        .value;
                };
                return C(part(false), part(true));
            },
            [&](const auto&) -> C { throw UnsupportedError("moments are defined for planar bodies"); },
        },
        g);
}

std::complex<double> measure_moment(const BalayageMeasure& m, int l) {
    using C = std::complex<double>;
    C total = 0.0;
    for (const auto& c : m.components) {
        if (c.d != 2) throw UnsupportedError("moments are defined for planar measures");
        const int n = 2 * l + 16;
        auto w = [&](double t) { return std::pow(C(c.a1 * std::cos(t), c.a2 * std::sin(t)), l) * c.density(t); };
        const double re = quad::periodic_trapezoid([&](double t) { return w(t).real(); }, n);
        const double im = quad::periodic_trapezoid([&](double t) { return w(t).imag(); }, n);
        total += C(re, im);
    }
    return total;
}

double hole_energy(const HoleSpec& spec) {
    require_planar_hole(spec.hole);
    domains::validate(spec.hole);
    const double area = domains::volume(spec.hole);
    // unit density: U(r) = int_hole -ln|r - w| d^2w, the negative of the background potential
    const domains::UniformDomain unit{spec.hole, area};
    auto U = [&](double x, double y) { return -domains::background_potential(unit, {x, y}); };
    const auto measure = balayage_measure(unit);

    double bulk = 0.0;
    std::visit(overloaded{
                   [&](const domains::Ball& b) {
                       bulk = 2.0 * kPi * quad::gauss_kronrod([&](double r) { return r * U(r, 0.0); }, 0.0, b.R, 1e-11).value;
                   },
                   [&](const domains::Annulus2D& a) {
                       bulk = 2.0 * kPi *
                              quad::gauss_kronrod([&](double r) { return r * U(r, 0.0); }, a.c * a.R, a.R, 1e-11).value;
                   },
                   [&](const domains::Ellipse2D& e) {
                       bulk = quad::nested2d(
                                  [&](double r, double t) {
                                      return e.a1 * e.a2 * r * U(e.a1 * r * std::cos(t), e.a2 * r * std::sin(t));
                                  },
                                  0.0, 1.0, [](double) { return 0.0; }, [](double) { return 2.0 * kPi; }, 1e-12)
                                  .value;
                   },
                   [&](const auto&) { throw UnsupportedError("unsupported hole geometry"); },
               },
               spec.hole);

    double boundary = 0.0;
    for (const auto& c : measure.components) {
        // U restricted to these boundaries is a low-degree trig polynomial, so the trapezoid is exact
        boundary += quad::periodic_trapezoid(
            [&](double t) { return U(c.a1 * std::cos(t), c.a2 * std::sin(t)) * c.density(t); }, 64);
    }
    return std::max(0.0, 0.5 * (bulk - boundary));
}

double gap_exponent(const HoleSpec& spec) {
    if (!(spec.beta > 0.0)) throw DomainError("beta must be positive");
    if (!(spec.rho_b > 0.0)) throw DomainError("background density must be positive");
    return -spec.beta * hole_energy(spec);
}

double tail_exponent(double beta, const TailParams& p) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    if (!(p.gamma > 2.0)) throw DomainError("counting tail needs gamma > 2");
    if (!(p.R > 0.0)) throw DomainError("radius must be positive");
    return -(beta / 4.0) * (p.gamma - 2.0) * p.alpha * p.alpha * std::pow(p.R, 2.0 * p.gamma) * std::log(p.R);
}

double ginibre_disk_gap(double beta, double N, double r) {
    if (!(N > 0.0) || r < 0.0) throw DomainError("need N > 0 and r >= 0");
    if (r == 0.0) return 0.0;
    const double rho_b = 1.0 / kPi;
    const HoleSpec spec{domains::Ball{2, r * std::sqrt(N)}, rho_b, beta};
    return rho_b * rho_b * gap_exponent(spec);
}

} // namespace coulomb::balayage
