#include "coulomb/domains.hpp"
#include "coulomb/quadrature.hpp"
#include "coulomb/specfun.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace coulomb::domains {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(const Point& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return std::sqrt(s);
}

void require_dim(const Point& r, int d) {
    if (static_cast<int>(r.size()) != d)
        throw DomainError("point has dimension " + std::to_string(r.size()) + ", expected " + std::to_string(d));
}

double unit_ball_volume(int d) {
    return std::exp(0.5 * d * std::log(kPi) - specfun::log_gamma(1.0 + 0.5 * d));
}

// Radial antiderivative int_0^rho Phi_d(t) t^{d-1} dt.
double radial_antiderivative(int d, double rho) {
    if (rho <= 0.0) return 0.0;
    if (d == 1) return -0.5 * rho * rho;
    if (d == 2) return -(0.5 * rho * rho * std::log(rho) - 0.25 * rho * rho);
    return 0.5 * rho * rho;
}

// ---- closed forms --------------------------------------------------------

double ball_potential(int d, double R, double N, double r) {
    const double rho_b = N / (unit_ball_volume(d) * std::pow(R, d));
    if (r <= R) {
        const double k = unit_sphere_area(d) * chi(d) / (2.0 * d);
        return rho_b * k * (r * r - R * R) - N * coulomb_of_distance(d, R);
    }
    return -N * coulomb_of_distance(d, r);
}

double annulus_potential(const Annulus2D& a, double N, double r) {
    const double R = a.R, c = a.c;
    const double rho_b = N / (kPi * (1.0 - c * c) * R * R);
    auto inside = [&](double rr) {
        return 0.5 * kPi * rho_b * (rr * rr - R * R) + kPi * R * R * rho_b * (std::log(R) - c * c * std::log(rr));
    };
    if (r > R) return N * std::log(r);       // charge -N seen from outside
    if (r < c * R) return inside(c * R);     // constant in the hole
    return inside(r);
}

double ellipse_interior_potential(double a1, double a2, double N, const Point& r) {
    const double rho_b = N / (kPi * a1 * a2);
    const double x = r[0], y = r[1];
    const double k = (a1 - a2) / (a1 + a2);
    return 0.5 * kPi * rho_b *
           (x * x + y * y - k * (x * x - y * y) + 2.0 * a1 * a2 * std::log(0.5 * (a1 + a2)) - a1 * a2);
}

// int_0^inf S0^{-1/2} (1 - S1) over lambda >= lam0, general d > 2
double ellipsoid_lambda_integral(const std::vector<double>& axes, const Point& r, double lam0) {
    const int d = static_cast<int>(axes.size());
    if (d == 3) {
        std::array<double, 3> b2{};
        for (int j = 0; j < 3; ++j) b2[j] = axes[j] * axes[j] + lam0;
        double v = 2.0 * specfun::carlson_rf(b2[0], b2[1], b2[2]);
        for (int j = 0; j < 3; ++j)
            v -= (2.0 / 3.0) * r[j] * r[j] * specfun::carlson_rd(b2[(j + 1) % 3], b2[(j + 2) % 3], b2[j]);
        return v;
    }
    // lambda = lam0 + L (1/s^2 - 1) makes the integrand analytic in s on [0, 1]
    double L = 0.0;
    for (double a : axes) L = std::max(L, a * a);
    L += lam0;
    auto f = [&](double s) {
        if (s == 0.0) return d == 3 ? 2.0 / std::sqrt(L) : 0.0;
        const double lam = lam0 + L * (1.0 / (s * s) - 1.0);
        double logs0 = 0.0, s1 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double q = axes[j] * axes[j] + lam;
            logs0 += std::log(q);
            s1 += r[j] * r[j] / q;
        }
        return std::exp(-0.5 * logs0) * (1.0 - s1) * 2.0 * L / (s * s * s);
    };
    return quad::gauss_kronrod(f, 0.0, 1.0, 1e-14).value;
}

// root of S1(lambda) = 1 for exterior points; S1 is strictly decreasing
double ellipsoid_lambda_root(const std::vector<double>& axes, const Point& r) {
    auto s1 = [&](double lam) {
        double s = 0.0;
        for (std::size_t j = 0; j < axes.size(); ++j) s += r[j] * r[j] / (axes[j] * axes[j] + lam);
        return s;
    };
    if (s1(0.0) <= 1.0) return 0.0;
    double lo = 0.0, hi = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s1(mid) > 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double hyperellipsoid_prefactor(int d, double N) { return N * 0.5 * d * (0.5 * d - 1.0); }

double hyperellipsoid_potential(const std::vector<double>& axes, double N, const Point& r) {
    const int d = static_cast<int>(axes.size());
    if (d == 1) return ball_potential(1, axes[0], N, std::abs(r[0]));
    if (d == 2) {
        double q = r[0] * r[0] / (axes[0] * axes[0]) + r[1] * r[1] / (axes[1] * axes[1]);
        if (q > 1.0 + 1e-12)
            throw UnsupportedError("no closed form outside a two-dimensional ellipse; use potential_oracle");
        return ellipse_interior_potential(axes[0], axes[1], N, r);
    }
    const double lam0 = ellipsoid_lambda_root(axes, r);
    return -hyperellipsoid_prefactor(d, N) * ellipsoid_lambda_integral(axes, r, lam0);
}

// term-by-term guarded box formula, unit density, 1/r kernel
double atanh_ratio(double d3, double rho, double q) {
    // arctanh(d3 / rho) with rho^2 = q + d3^2, written to avoid cancellation near |d3| = rho
    const double ad = std::abs(d3);
    const double v = std::log((rho + ad) / std::sqrt(std::max(q, 1e-300)));
    return d3 < 0 ? -v : v;
}

double cuboid_unit_potential(const Cuboid& c, const Point& y) {
    double total = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
        std::array<double, 3> del{};
        for (int j = 0; j < 3; ++j) del[j] = (mask >> j & 1) ? c.hi[j] - y[j] : y[j] - c.lo[j];
        const double rho = std::sqrt(del[0] * del[0] + del[1] * del[1] + del[2] * del[2]);
        if (rho == 0.0) continue;
        for (int k = 0; k < 3; ++k) {
            const double d1 = del[k], d2 = del[(k + 1) % 3], d3 = del[(k + 2) % 3];
            if (d1 * d2 != 0.0) total += d1 * d2 * atanh_ratio(d3, rho, d1 * d1 + d2 * d2);
            if (d1 != 0.0) total -= 0.5 * d1 * d1 * std::atan(d2 * d3 / (d1 * rho));
        }
    }
    return total;
}

double rect_antiderivative(double a, double b) {
    double v = 0.0;
    if (a != 0.0 || b != 0.0) {
        if (a * b != 0.0) v += a * b * std::log(a * a + b * b) - 3.0 * a * b;
        if (b != 0.0) v += b * b * std::atan(a / b);
        if (a != 0.0) v += a * a * std::atan(b / a);
    }
    return v;
}

// potential of unit positive density with the -ln kernel
double rectangle_unit_potential(const Rectangle& rc, const Point& p) {
    const double al[2] = {rc.lo[0] - p[0], rc.hi[0] - p[0]};
    const double be[2] = {rc.lo[1] - p[1], rc.hi[1] - p[1]};
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += ((i + j) % 2 ? -1.0 : 1.0) * rect_antiderivative(al[i], be[j]);
    return -0.5 * s;
}

// ---- oracles --------------------------------------------------------------

// chord of the ray p + t u (t >= 0) through the ellipsoid sum (x_j / a_j)^2 <= 1
std::pair<double, double> ellipsoid_chord(const std::vector<double>& axes, const double* p, const double* u) {
    double A = 0, B = 0, C = -1.0;
    for (std::size_t j = 0; j < axes.size(); ++j) {
        const double ia2 = 1.0 / (axes[j] * axes[j]);
        A += u[j] * u[j] * ia2;
        B += 2.0 * p[j] * u[j] * ia2;
        C += p[j] * p[j] * ia2;
    }
    const double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return {0.0, 0.0};
    const double sq = std::sqrt(disc);
    // numerically stable roots
    const double q = -0.5 * (B + std::copysign(sq, B));
    double t1 = q / A, t2 = (q != 0.0) ? C / q : -t1;
    if (t1 > t2) std::swap(t1, t2);
    if (t2 <= 0.0) return {0.0, 0.0};
    return {std::max(t1, 0.0), t2};
}

EvalResult segment_oracle(double R, double rho_b, double x, double tol) {
    auto f = [&](double xp) { return rho_b * std::abs(x - xp); };
    return quad::gauss_kronrod_split(f, -R, R, {x}, tol);
}

// axisymmetric ray integral for a ball in any dimension d >= 2
EvalResult ball_ray_oracle(int d, double R, double rho_b, double p, double tol) {
    const double weight = unit_sphere_area(d - 1);
    auto f = [&](double th) {
        const double ct = std::cos(th), st = std::sin(th);
        const double disc = R * R - p * p * st * st;
        if (disc <= 0.0) return 0.0;
        const double sq = std::sqrt(disc);
        double t_in = -p * ct - sq, t_out = -p * ct + sq;
        if (t_out <= 0.0) return 0.0;
        t_in = std::max(t_in, 0.0);
        const double h = radial_antiderivative(d, t_out) - radial_antiderivative(d, t_in);
        return weight * std::pow(st, d - 2) * h;
    };
    std::vector<double> breaks;
    if (p > R) breaks.push_back(kPi - std::asin(R / p));
    auto r = quad::gauss_kronrod_split(f, 0.0, kPi, breaks, tol);
    r.value *= -rho_b;
    r.est_error *= rho_b;
    return r;
}

// planar ray integral for an ellipse with semi-axes a1, a2 centred at the origin
EvalResult ellipse_ray_oracle(double a1, double a2, double rho_b, const Point& p, double tol) {
    const std::vector<double> axes{a1, a2};
    auto f = [&](double th) {
        const double u[2] = {std::cos(th), std::sin(th)};
        const auto [t_in, t_out] = ellipsoid_chord(axes, p.data(), u);
        return radial_antiderivative(2, t_out) - radial_antiderivative(2, t_in);
    };
    std::vector<double> breaks;
    const double qx = p[0] / a1, qy = p[1] / a2;
    const double qn = std::hypot(qx, qy);
    if (qn > 1.0) {
        const double psi = std::atan2(qy, qx);
        const double w = std::acos(1.0 / qn);
        for (double sgn : {-1.0, 1.0}) {
            const double tx = std::cos(psi + sgn * w) - qx;
            const double ty = std::sin(psi + sgn * w) - qy;
            double ang = std::atan2(a2 * ty, a1 * tx);
            if (ang < 0) ang += 2.0 * kPi;
            breaks.push_back(ang);
        }
    }
    auto r = quad::gauss_kronrod_split(f, 0.0, 2.0 * kPi, breaks, tol);
    r.value *= -rho_b;
    r.est_error *= rho_b;
    return r;
}

EvalResult ellipsoid3_ray_oracle(const std::vector<double>& axes, double rho_b, const Point& p, double tol) {
    auto f = [&](double th, double ph) {
        const double u[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const auto [t_in, t_out] = ellipsoid_chord(axes, p.data(), u);
        return std::sin(th) * (radial_antiderivative(3, t_out) - radial_antiderivative(3, t_in));
    };
    auto r = quad::nested2d(f, 0.0, kPi, [](double) { return 0.0; }, [](double) { return 2.0 * kPi; }, tol);
    r.value *= -rho_b;
    r.est_error *= rho_b;
    return r;
}

// exterior points see a smooth integrand; integrate over the body in scaled spherical coordinates
EvalResult ellipsoid3_volume_oracle(const std::vector<double>& axes, double rho_b, const Point& p, double tol) {
    const double jac = axes[0] * axes[1] * axes[2];
    double err = 0.0;
    auto shell = [&](double rho) {
        auto f = [&](double th, double ph) {
            const double st = std::sin(th);
            const double x = axes[0] * rho * st * std::cos(ph) - p[0];
            const double y = axes[1] * rho * st * std::sin(ph) - p[1];
            const double z = axes[2] * rho * std::cos(th) - p[2];
            return st / std::sqrt(x * x + y * y + z * z);
        };
        auto r = quad::nested2d(f, 0.0, kPi, [](double) { return 0.0; }, [](double) { return 2.0 * kPi; }, tol);
        err = std::max(err, r.est_error);
        return rho * rho * r.value;
    };
    auto r = quad::gauss_kronrod(shell, 0.0, 1.0, tol, 12);
    return {-rho_b * jac * r.value, rho_b * jac * (r.est_error + err)};
}

EvalResult ellipsoid_qmc_oracle(const std::vector<double>& axes, double rho_b, const Point& p) {
    const unsigned d = static_cast<unsigned>(axes.size());
    const double area = unit_sphere_area(static_cast<int>(d));
    std::vector<double> u(d);
    auto f = [&](const double* x) {
        double n2 = 0.0;
        for (unsigned j = 0; j < d; ++j) {
            u[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * x[j] - 1.0);
            n2 += u[j] * u[j];
        }
        const double n = std::sqrt(n2);
        for (unsigned j = 0; j < d; ++j) u[j] /= n;
        const auto [t_in, t_out] = ellipsoid_chord(axes, p.data(), u.data());
        return radial_antiderivative(static_cast<int>(d), t_out) - radial_antiderivative(static_cast<int>(d), t_in);
    };
    auto r = quad::rqmc_unit_cube(f, d, 1u << 15, 16, 20240611);
    r.value *= -rho_b * area;
    r.est_error *= rho_b * area;
    return r;
}

// int over [0,A]x[0,B]x[0,C] of 1/|x| by splitting into cones over the three far faces
double corner_box_inverse_distance(double A, double B, double C, double tol) {
    if (A == 0.0 || B == 0.0 || C == 0.0) return 0.0;
    auto face = [&](double h, double p, double q) {
        auto g = [h](double u, double v) { return h / std::sqrt(h * h + u * u + v * v); };
        return 0.5 * quad::nested2d(g, 0.0, p, [](double) { return 0.0; }, [q](double) { return q; }, tol).value;
    };
    return face(A, B, C) + face(B, A, C) + face(C, A, B);
}

// int over [0,A]x[0,B] of -ln|x| by cones over the two far edges
double corner_rect_neglog(double A, double B, double tol) {
    if (A == 0.0 || B == 0.0) return 0.0;
    auto edge = [&](double h, double len) {
        auto g = [h](double s) { return h * (0.25 - 0.25 * std::log(h * h + s * s)); };
        return quad::gauss_kronrod(g, 0.0, len, tol).value;
    };
    return edge(A, B) + edge(B, A);
}

double sgn(double x) { return (x > 0) - (x < 0); }

EvalResult cuboid_oracle(const Cuboid& c, double rho_b, const Point& y, double tol) {
    double total = 0.0;
    for (int mask = 0; mask < 8; ++mask) {
        std::array<double, 3> del{};
        for (int j = 0; j < 3; ++j) del[j] = (mask >> j & 1) ? c.hi[j] - y[j] : y[j] - c.lo[j];
        const double s = sgn(del[0]) * sgn(del[1]) * sgn(del[2]);
        if (s == 0.0) continue;
        total += s * corner_box_inverse_distance(std::abs(del[0]), std::abs(del[1]), std::abs(del[2]), tol);
    }
    return {-rho_b * total, 8.0 * tol * rho_b * std::abs(total)};
}

EvalResult rectangle_oracle(const Rectangle& rc, double rho_b, const Point& p, double tol) {
    double total = 0.0;
    for (int mask = 0; mask < 4; ++mask) {
        const double dx = (mask & 1) ? rc.hi[0] - p[0] : p[0] - rc.lo[0];
        const double dy = (mask & 2) ? rc.hi[1] - p[1] : p[1] - rc.lo[1];
        const double s = sgn(dx) * sgn(dy);
        if (s == 0.0) continue;
        total += s * corner_rect_neglog(std::abs(dx), std::abs(dy), tol);
    }
    return {-rho_b * total, 4.0 * tol * rho_b * std::max(1.0, std::abs(total))};
}

} // namespace

// ---- kernels ---------------------------------------------------------------

double unit_sphere_area(int d) {
    if (d < 1) throw DomainError("dimension must be positive");
    return 2.0 * std::exp(0.5 * d * std::log(kPi) - specfun::log_gamma(0.5 * d));
}

double chi(int d) { return d > 2 ? d - 2.0 : 1.0; }

double coulomb_of_distance(int d, double r) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (d == 1) return -r;
    if (r <= 0.0) throw SingularityError("Coulomb kernel evaluated at zero distance");
    if (d == 2) return -std::log(r);
    return std::pow(r, 2.0 - d);
}

double Kernel::of_distance(double r) const {
    if (s < 0.0) return -std::pow(r, -s);
    if (r <= 0.0) throw SingularityError("kernel evaluated at zero distance");
    if (s == 0.0) return -std::log(r);
    return std::pow(r, -s);
}

double kernel_eval(const Kernel& k, const Point& r, const Point& rp) {
    require_dim(r, k.d);
    require_dim(rp, k.d);
    double s = 0.0;
    for (int j = 0; j < k.d; ++j) s += (r[j] - rp[j]) * (r[j] - rp[j]);
    if (s == 0.0) throw SingularityError("kernel evaluated at coincident points");
    return k.of_distance(std::sqrt(s));
}

// ---- geometry --------------------------------------------------------------

int dimension(const Geometry& g) {
    return std::visit(overloaded{[](const Ball& b) { return b.d; },
                                 [](const Annulus2D&) { return 2; },
                                 [](const Segment1D&) { return 1; },
                                 [](const Hyperellipsoid& h) { return static_cast<int>(h.axes.size()); },
                                 [](const Ellipse2D&) { return 2; },
                                 [](const Cuboid&) { return 3; },
                                 [](const Rectangle&) { return 2; }},
                      g);
}

double volume(const Geometry& g) {
    return std::visit(
        overloaded{[](const Ball& b) { return unit_ball_volume(b.d) * std::pow(b.R, b.d); },
                   [](const Annulus2D& a) { return kPi * a.R * a.R * (1.0 - a.c * a.c); },
                   [](const Segment1D& s) { return 2.0 * s.R; },
                   [](const Hyperellipsoid& h) {
                       double p = unit_ball_volume(static_cast<int>(h.axes.size()));
                       for (double a : h.axes) p *= a;
                       return p;
                   },
                   [](const Ellipse2D& e) { return kPi * e.a1 * e.a2; },
                   [](const Cuboid& c) {
                       return (c.hi[0] - c.lo[0]) * (c.hi[1] - c.lo[1]) * (c.hi[2] - c.lo[2]);
                   },
                   [](const Rectangle& r) { return (r.hi[0] - r.lo[0]) * (r.hi[1] - r.lo[1]); }},
        g);
}

std::string geometry_name(const Geometry& g) {
    return std::visit(overloaded{[](const Ball&) { return std::string("ball"); },
                                 [](const Annulus2D&) { return std::string("annulus"); },
                                 [](const Segment1D&) { return std::string("segment"); },
                                 [](const Hyperellipsoid&) { return std::string("hyperellipsoid"); },
                                 [](const Ellipse2D&) { return std::string("ellipse"); },
                                 [](const Cuboid&) { return std::string("cuboid"); },
                                 [](const Rectangle&) { return std::string("rectangle"); }},
                      g);
}

void validate(const Geometry& g) {
    auto pos = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
    };
    std::visit(overloaded{[&](const Ball& b) {
                              if (b.d < 1) throw DomainError("ball dimension must be positive");
                              pos(b.R, "ball radius");
                          },
                          [&](const Annulus2D& a) {
                              pos(a.R, "annulus radius");
                              if (!(a.c > 0.0 && a.c < 1.0)) throw DomainError("annulus ratio c must lie in (0,1)");
                          },
                          [&](const Segment1D& s) { pos(s.R, "segment half-length"); },
                          [&](const Hyperellipsoid& h) {
                              if (h.axes.empty()) throw DomainError("hyperellipsoid needs at least one axis");
                              for (double a : h.axes) pos(a, "hyperellipsoid axis");
                          },
                          [&](const Ellipse2D& e) {
                              pos(e.a1, "ellipse axis");
                              pos(e.a2, "ellipse axis");
                          },
                          [&](const Cuboid& c) {
                              for (int j = 0; j < 3; ++j) pos(c.hi[j] - c.lo[j], "cuboid side");
                          },
                          [&](const Rectangle& r) {
                              for (int j = 0; j < 2; ++j) pos(r.hi[j] - r.lo[j], "rectangle side");
                          }},
               g);
}

bool contains(const Geometry& g, const Point& r) {
    require_dim(r, dimension(g));
    return std::visit(
        overloaded{[&](const Ball& b) { return norm(r) <= b.R; },
                   [&](const Annulus2D& a) {
                       const double n = norm(r);
                       return n <= a.R && n >= a.c * a.R;
                   },
                   [&](const Segment1D& s) { return std::abs(r[0]) <= s.R; },
                   [&](const Hyperellipsoid& h) {
                       double q = 0.0;
                       for (std::size_t j = 0; j < h.axes.size(); ++j) q += r[j] * r[j] / (h.axes[j] * h.axes[j]);
                       return q <= 1.0;
                   },
                   [&](const Ellipse2D& e) {
                       return r[0] * r[0] / (e.a1 * e.a1) + r[1] * r[1] / (e.a2 * e.a2) <= 1.0;
                   },
                   [&](const Cuboid& c) {
                       for (int j = 0; j < 3; ++j)
                           if (r[j] < c.lo[j] || r[j] > c.hi[j]) return false;
                       return true;
                   },
                   [&](const Rectangle& rc) {
                       for (int j = 0; j < 2; ++j)
                           if (r[j] < rc.lo[j] || r[j] > rc.hi[j]) return false;
                       return true;
                   }},
        g);
}

// ---- potentials --------------------------------------------------------------

double background_potential(const UniformDomain& dom, const Point& r) {
    validate(dom.geometry);
    require_dim(r, dimension(dom.geometry));
    const double N = dom.N;
    return std::visit(
        overloaded{[&](const Ball& b) { return ball_potential(b.d, b.R, N, norm(r)); },
                   [&](const Annulus2D& a) { return annulus_potential(a, N, norm(r)); },
                   [&](const Segment1D& s) { return ball_potential(1, s.R, N, std::abs(r[0])); },
                   [&](const Hyperellipsoid& h) { return hyperellipsoid_potential(h.axes, N, r); },
                   [&](const Ellipse2D& e) { return hyperellipsoid_potential({e.a1, e.a2}, N, r); },
                   [&](const Cuboid& c) { return -dom.rho_b() * cuboid_unit_potential(c, r); },
                   [&](const Rectangle& rc) { return -dom.rho_b() * rectangle_unit_potential(rc, r); }},
        dom.geometry);
}

EvalResult potential_oracle(const UniformDomain& dom, const Point& r, double tol) {
    validate(dom.geometry);
    require_dim(r, dimension(dom.geometry));
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const double rho_b = dom.rho_b();
    EvalResult out = std::visit(
        overloaded{
            [&](const Ball& b) {
                if (b.d == 1) return segment_oracle(b.R, rho_b, r[0], tol);
                return ball_ray_oracle(b.d, b.R, rho_b, norm(r), tol);
            },
            [&](const Annulus2D& a) {
                const Point p{norm(r), 0.0};
                auto outer = ball_ray_oracle(2, a.R, rho_b, p[0], tol);
                auto inner = ball_ray_oracle(2, a.c * a.R, rho_b, p[0], tol);
                return EvalResult{outer.value - inner.value, outer.est_error + inner.est_error};
            },
            [&](const Segment1D& s) { return segment_oracle(s.R, rho_b, r[0], tol); },
            [&](const Hyperellipsoid& h) {
                const int d = static_cast<int>(h.axes.size());
                if (d == 1) return segment_oracle(h.axes[0], rho_b, r[0], tol);
                if (d == 2) return ellipse_ray_oracle(h.axes[0], h.axes[1], rho_b, r, tol);
                if (d == 3) {
                    if (contains(h, r)) return ellipsoid3_ray_oracle(h.axes, rho_b, r, tol);
                    return ellipsoid3_volume_oracle(h.axes, rho_b, r, tol);
                }
                return ellipsoid_qmc_oracle(h.axes, rho_b, r);
            },
            [&](const Ellipse2D& e) { return ellipse_ray_oracle(e.a1, e.a2, rho_b, r, tol); },
            [&](const Cuboid& c) { return cuboid_oracle(c, rho_b, r, tol); },
            [&](const Rectangle& rc) { return rectangle_oracle(rc, rho_b, r, tol); }},
        dom.geometry);
    if (!std::isfinite(out.value) || !std::isfinite(out.est_error))
        throw BudgetError("potential_oracle: quadrature did not produce a finite estimate", out.value, out.est_error);
    return out;
}

// ---- energies ----------------------------------------------------------------

double self_energy(const UniformDomain& dom) {
    validate(dom.geometry);
    const double N = dom.N;
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const double rho_b = dom.rho_b();
                const double k = unit_sphere_area(b.d) * chi(b.d) / (2.0 * b.d);
                return rho_b * N * k * b.R * b.R / (b.d + 2.0) + 0.5 * N * N * coulomb_of_distance(b.d, b.R);
            },
            [&](const Segment1D& s) { return -N * N * s.R / 3.0; },
            [&](const Annulus2D& a) {
                const double c2 = a.c * a.c, R = a.R;
                const double rho_b = dom.rho_b();
                const double total_const =
                    N * N *
                    (-3.0 * (1.0 + c2) / (8.0 * (1.0 - c2)) + (1.0 + c2) / (2.0 * (1.0 - c2)) * std::log(R) -
                     c2 * c2 * std::log(a.c) / (2.0 * (1.0 - c2) * (1.0 - c2)));
                return total_const - N * kPi * R * R * rho_b * (std::log(R) - 0.5);
            },
            [&](const Ellipse2D& e) {
                const double rho_b = dom.rho_b();
                const double L = std::log(0.5 * (e.a1 + e.a2));
                return -3.0 * N * N / 8.0 + 0.5 * N * N * L -
                       N * 0.5 * kPi * rho_b * (2.0 * e.a1 * e.a2 * L - e.a1 * e.a2);
            },
            [&](const Hyperellipsoid& h) {
                const int d = static_cast<int>(h.axes.size());
                if (d == 1) return -N * N * h.axes[0] / 3.0;
                if (d == 2) return self_energy(UniformDomain{Ellipse2D{h.axes[0], h.axes[1]}, N});
                const auto co = hyperellipsoid_coefficients(h.axes, N);
                double s = co.alpha0;
                for (int j = 0; j < d; ++j) s += co.alpha[j] * h.axes[j] * h.axes[j] / (d + 2.0);
                return -0.5 * N * s;
            },
            [&](const Cuboid& c) {
                const double L = c.hi[0] - c.lo[0];
                if (std::abs(c.hi[1] - c.lo[1] - L) > 1e-12 * L || std::abs(c.hi[2] - c.lo[2] - L) > 1e-12 * L)
                    throw UnsupportedError("self energy has a closed form only for cubes");
                const double rho_b = dom.rho_b();
                return rho_b * rho_b * std::pow(L, 5) * cube_self_energy();
            },
            [&](const Rectangle&) -> double {
                throw UnsupportedError("no closed-form self energy for a rectangle");
            }},
        dom.geometry);
}

double interaction_energy(const UniformDomain& dom, const std::vector<Point>& points) {
    double upb = 0.0;
    for (const auto& p : points) upb += background_potential(dom, p);
    return upb + self_energy(dom);
}

QuadraticCoefficients hyperellipsoid_coefficients(const std::vector<double>& axes, double N, CoeffMethod method) {
    validate(Hyperellipsoid{axes});
    const int d = static_cast<int>(axes.size());
    QuadraticCoefficients out;
    if (d == 1) {
        const double rho_b = N / (2.0 * axes[0]);
        out.alpha = {rho_b};
        out.alpha0 = -rho_b * axes[0] * axes[0] + N * axes[0];
        return out;
    }
    if (d == 2) {
        const double a1 = axes[0], a2 = axes[1];
        const double rho_b = N / (kPi * a1 * a2);
        const double k = (a1 - a2) / (a1 + a2);
        out.alpha = {0.5 * kPi * rho_b * (1.0 - k), 0.5 * kPi * rho_b * (1.0 + k)};
        out.alpha0 = 0.5 * kPi * rho_b * (2.0 * a1 * a2 * std::log(0.5 * (a1 + a2)) - a1 * a2);
        return out;
    }
    const double K = hyperellipsoid_prefactor(d, N);
    if (method == CoeffMethod::carlson || (method == CoeffMethod::automatic && d == 3)) {
        if (d != 3) throw UnsupportedError("Carlson route is available only in three dimensions");
        const double b[3] = {axes[0] * axes[0], axes[1] * axes[1], axes[2] * axes[2]};
        out.alpha0 = -K * 2.0 * specfun::carlson_rf(b[0], b[1], b[2]);
        for (int j = 0; j < 3; ++j)
            out.alpha.push_back(K * (2.0 / 3.0) * specfun::carlson_rd(b[(j + 1) % 3], b[(j + 2) % 3], b[j]));
        return out;
    }
    double L = 0.0;
    for (double a : axes) L = std::max(L, a * a);
    auto integral = [&](int skip) {
        auto f = [&](double s) {
            if (s == 0.0) return (d == 3 && skip < 0) ? 2.0 / std::sqrt(L) : 0.0;
            const double lam = L * (1.0 / (s * s) - 1.0);
            double logs0 = 0.0;
            for (double a : axes) logs0 += std::log(a * a + lam);
            double v = std::exp(-0.5 * logs0) * 2.0 * L / (s * s * s);
            if (skip >= 0) v /= axes[skip] * axes[skip] + lam;
            return v;
        };
        return quad::gauss_kronrod(f, 0.0, 1.0, 1e-13).value;
    };
    out.alpha0 = -K * integral(-1);
    for (int j = 0; j < d; ++j) out.alpha.push_back(K * integral(j));
    return out;
}

double cube_self_energy() {
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    return 0.2 * (1.0 + s2 - 2.0 * s3) + std::log((1.0 + s2) * (2.0 + s3)) - kPi / 3.0;
}

EvalResult cube_self_energy_oracle(std::uint64_t samples, std::uint64_t seed, double side) {
    const unsigned shifts = 20;
    const std::uint64_t per = std::max<std::uint64_t>(1, samples / shifts);
    auto f = [side](const double* x) {
        const double dx = x[0] - x[3], dy = x[1] - x[4], dz = x[2] - x[5];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        return d > 0.0 ? 0.5 / (side * d) : 0.0;
    };
    auto r = quad::rqmc_unit_cube(f, 6, per, shifts, seed);
    const double vol2 = std::pow(side, 6);
    return {r.value * vol2, r.est_error * vol2};
}

} // namespace coulomb::domains
