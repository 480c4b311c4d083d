#include "coulomb/surfaces.hpp"
#include "coulomb/quadrature.hpp"
#include "coulomb/specfun.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

namespace coulomb::surfaces {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const Point& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return s;
}

// Riesz kernel with the log case at s = 0 (coincides with Phi_d when s = d - 2)
double riesz(double s, double r) {
    if (s == 0.0) return -std::log(r);
    return s < 0 ? -std::pow(r, -s) : std::pow(r, -s);
}

// average-free angular integral of the kernel over the sphere of radius rho
// in R^d, seen from a point at distance p from the centre
double sphere_kernel_integral(int d, double s, double p, double rho) {
    if (d == 3 && s == 0.0) {
        // closed form of 2 pi int_{-1}^{1} -(1/2) ln(p^2 + rho^2 - 2 p rho t) dt
        if (p == 0.0 || rho == 0.0) return -4.0 * kPi * std::log(std::max(p, rho));
        auto xlx = [](double a) { return a == 0.0 ? 0.0 : a * a * std::log(a * a); };
        return -kPi * ((xlx(p + rho) - xlx(std::abs(p - rho))) / (2.0 * p * rho) - 2.0);
    }
    const double weight = domains::unit_sphere_area(d - 1);
    auto f = [&](double th) {
        const double sh = std::sin(0.5 * th);
        const double dist2 = (p - rho) * (p - rho) + 4.0 * p * rho * sh * sh;
        if (dist2 == 0.0) return 0.0;
        return std::pow(std::sin(th), d - 2) * riesz(s, std::sqrt(dist2));
    };
    return weight * quad::tanh_sinh(f, 0.0, kPi, 1e-12).value;
}

} // namespace

double shell_potential(int d, double R, double Q, const Point& r) {
    if (d < 2) throw DomainError("shell_potential requires d >= 2");
    if (!(R > 0.0)) throw DomainError("shell radius must be positive");
    if (static_cast<int>(r.size()) != d) throw DomainError("point dimension does not match d");
    const double n = std::sqrt(norm2(r));
    return Q * domains::coulomb_of_distance(d, std::max(n, R));
}

SurfaceChargeDensity SurfaceChargeDensity::sphere(int d, double R, double Q) {
    return {std::vector<double>(static_cast<std::size_t>(d), R), Q};
}

double SurfaceChargeDensity::density(const Point& r) const {
    return ellipsoid_surface_density(axes, Q, r);
}

EvalResult SurfaceChargeDensity::total() const {
    const int d = dimension();
    const double prod = std::accumulate(axes.begin(), axes.end(), 1.0, std::multiplies<>());
    // integrand of the density against the area element of x = diag(axes) u
    auto on_direction = [&](const double* u) {
        Point x(static_cast<std::size_t>(d));
        double g = 0.0;
        for (int j = 0; j < d; ++j) {
            x[j] = axes[j] * u[j];
            g += u[j] * u[j] / (axes[j] * axes[j]);
        }
        return density(x) * prod * std::sqrt(g);
    };
    if (d == 2) {
        auto f = [&](double t) {
            const double u[2] = {std::cos(t), std::sin(t)};
            return on_direction(u);
        };
        return quad::gauss_kronrod(f, 0.0, 2.0 * kPi, 1e-13);
    }
    if (d == 3) {
        auto f = [&](double th, double ph) {
            const double u[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
            return std::sin(th) * on_direction(u);
        };
        return quad::nested2d(f, 0.0, kPi, [](double) { return 0.0; }, [](double) { return 2.0 * kPi; }, 1e-12);
    }
    const double area = domains::unit_sphere_area(d);
    std::vector<double> u(static_cast<std::size_t>(d));
    auto f = [&](const double* x) {
        double n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            u[j] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * x[j] - 1.0);
            n2 += u[j] * u[j];
        }
        for (int j = 0; j < d; ++j) u[j] /= std::sqrt(n2);
        return on_direction(u.data());
    };
    auto r = quad::rqmc_unit_cube(f, static_cast<unsigned>(d), 1u << 14, 16, 99);
    return {r.value * area, r.est_error * area};
}

double ellipsoid_surface_density(const std::vector<double>& axes, double Q, const Point& r) {
    domains::validate(domains::Hyperellipsoid{axes});
    const std::size_t d = axes.size();
    if (r.size() != d) throw DomainError("point dimension does not match the axes");
    double level = 0.0, grad = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double a2 = axes[j] * axes[j];
        level += r[j] * r[j] / a2;
        grad += r[j] * r[j] / (a2 * a2);
    }
    if (std::abs(level - 1.0) > 1e-10) throw DomainError("point is not on the ellipsoid surface");
    const double prod = std::accumulate(axes.begin(), axes.end(), 1.0, std::multiplies<>());
    return Q / (domains::unit_sphere_area(static_cast<int>(d)) * prod * std::sqrt(grad));
}

double ellipsoid_surface_potential(const std::vector<double>& axes, double Q, const Point& r) {
    domains::validate(domains::Hyperellipsoid{axes});
    const int d = static_cast<int>(axes.size());
    if (d <= 2) throw DomainError("surface potential formula requires d > 2");
    if (static_cast<int>(r.size()) != d) throw DomainError("point dimension does not match the axes");

    auto s1 = [&](double lam) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += r[j] * r[j] / (axes[j] * axes[j] + lam);
        return s;
    };
    double lam0 = 0.0;
    if (s1(0.0) > 1.0) {
        double lo = 0.0, hi = norm2(r);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (s1(mid) > 1.0 ? lo : hi) = mid;
        }
        lam0 = 0.5 * (lo + hi);
    }
    if (d == 3) {
        const double b0 = axes[0] * axes[0] + lam0, b1 = axes[1] * axes[1] + lam0, b2 = axes[2] * axes[2] + lam0;
        return Q * specfun::carlson_rf(b0, b1, b2);
    }
    double L = lam0;
    for (double a : axes) L = std::max(L, a * a + lam0);
    auto f = [&](double s) {
        if (s == 0.0) return 0.0;
        const double lam = lam0 + L * (1.0 / (s * s) - 1.0);
        double logs0 = 0.0;
        for (double a : axes) logs0 += std::log(a * a + lam);
        return std::exp(-0.5 * logs0) * 2.0 * L / (s * s * s);
    };
    return Q * (0.5 * d - 1.0) * quad::gauss_kronrod(f, 0.0, 1.0, 1e-14).value;
}

double projection_weight_mass(int d, double R) {
    if (d < 2) throw DomainError("projection requires d >= 2");
    // c_{d-1} R^{d-1} int_0^1 t^{d-2} (1 - t^2)^{-1/2} dt = c_{d-1} R^{d-1} B((d-1)/2, 1/2) / 2
    const double a = 0.5 * (d - 1);
    const double beta = std::exp(specfun::log_gamma(a) + specfun::log_gamma(0.5) - specfun::log_gamma(a + 0.5));
    return domains::unit_sphere_area(d - 1) * std::pow(R, d - 1) * 0.5 * beta;
}

double projection_density(int d, double R, const Point& r, double Q) {
    if (d < 2) throw DomainError("projection requires d >= 2");
    if (!(R > 0.0)) throw DomainError("radius must be positive");
    if (static_cast<int>(r.size()) != d - 1) throw DomainError("projected point must have d - 1 components");
    const double t2 = norm2(r) / (R * R);
    if (t2 >= 1.0) throw DomainError("projected point must lie strictly inside the ball");
    return Q / (projection_weight_mass(d, R) * std::sqrt(1.0 - t2));
}

EvalResult projected_potential(int d, double R, double p) {
    if (!(std::abs(p) < R)) throw DomainError("evaluation point must lie inside the ball");
    p = std::abs(p);
    if (d == 2) {
        // y = R sin u turns the arcsine weight into du / pi
        auto f = [&](double u) {
            const double gap = std::abs(p - R * std::sin(u));
            return gap > 0.0 ? -std::log(gap) / kPi : 0.0;
        };
        return quad::tanh_sinh_split(f, -0.5 * kPi, 0.5 * kPi, {std::asin(p / R)}, 1e-13);
    }
    if (d == 3) {
        const double mass = projection_weight_mass(3, R);
        auto f = [&](double u) {
            const double rho = R * std::sin(u);
            const double sum = p + rho;
            if (sum == 0.0) return 0.0;
            // ring integral int_0^{2 pi} dphi / |p - rho e^{i phi}| = 4 K(k) / (p + rho)
            const double kc = (p - rho) / sum;
            if (kc == 0.0) return 0.0; // integrable log singularity, never sampled in practice
            const double K = specfun::carlson_rf(0.0, kc * kc, 1.0);
            return R * rho * 4.0 * K / sum / mass;
        };
        std::vector<double> br;
        if (p > 0.0) br.push_back(std::asin(p / R));
        return quad::tanh_sinh_split(f, 0.0, 0.5 * kPi, br, 1e-13);
    }
    throw UnsupportedError("projected potential is implemented for d = 2 and d = 3");
}

EvalResult riesz_ball_potential(int d, double R, double p) {
    if (d < 2) throw DomainError("riesz ball potential requires d >= 2");
    if (!(std::abs(p) < R)) throw DomainError("evaluation point must lie inside the ball");
    p = std::abs(p);
    const double s = d - 3.0;
    auto f = [&](double u) {
        const double rho = R * std::sin(u);
        // rho^{d-1} (1 - rho^2/R^2)^{-1/2} drho = R rho^{d-1} du
        return R * std::pow(rho, d - 1) * sphere_kernel_integral(d, s, p, rho);
    };
    std::vector<double> br;
    if (p > 0.0) br.push_back(std::asin(p / R));
    return quad::tanh_sinh_split(f, 0.0, 0.5 * kPi, br, 1e-12);
}

EvalResult semicircle_log_integral(double a, double x) {
    if (!(a > 0.0)) throw DomainError("semicircle half-width must be positive");
    if (!(std::abs(x) < a)) throw DomainError("semicircle identity holds for |x| < a");
    auto f = [&](double u) {
        const double c = std::cos(u);
        const double gap = std::abs(x - a * std::sin(u));
        return gap > 0.0 ? std::log(gap) * a * c * c : 0.0;
    };
    auto r = quad::tanh_sinh_split(f, -0.5 * kPi, 0.5 * kPi, {std::asin(x / a)}, 1e-13);
    return {r.value * a / kPi, r.est_error * a / kPi};
}

EvalResult thin_slab_potential(double a1, double a2, double N, const Point& s) {
    if (!(a1 > 0.0 && a2 > 0.0)) throw DomainError("axes must be positive");
    const double c0 = s[0] * s[0] / (a1 * a1) + s[1] * s[1] / (a2 * a2);
    if (!(c0 < 1.0)) throw DomainError("thin-slab point must lie inside the ellipse");
    // polar coordinates about s cancel the 1/|s - s'| singularity; along each ray
    // 1 - q(t) = A (t_out - t)(t - t_in) integrates in closed form
    auto f = [&](double phi) {
        const double ux = std::cos(phi), uy = std::sin(phi);
        const double A = ux * ux / (a1 * a1) + uy * uy / (a2 * a2);
        const double B = 2.0 * (s[0] * ux / (a1 * a1) + s[1] * uy / (a2 * a2));
        const double disc = std::sqrt(B * B - 4.0 * A * (c0 - 1.0));
        const double t_out = (-B + disc) / (2.0 * A), t_in = (-B - disc) / (2.0 * A);
        const double m = 0.5 * (t_out + t_in), h = 0.5 * (t_out - t_in);
        const double y0 = -m;
        const double lower = 0.5 * y0 * std::sqrt(std::max(h * h - y0 * y0, 0.0)) +
                             0.5 * h * h * std::asin(std::clamp(y0 / h, -1.0, 1.0));
        return std::sqrt(A) * (0.25 * kPi * h * h - lower);
    };
    auto r = quad::gauss_kronrod(f, 0.0, 2.0 * kPi, 1e-13);
    const double pref = 3.0 * N / (2.0 * kPi * a1 * a2);
    return {-pref * r.value, pref * r.est_error};
}

std::string identity_name(IdentityCase c) {
    switch (c) {
    case IdentityCase::constant_potential: return "constant-potential";
    case IdentityCase::riesz_quadratic: return "riesz-quadratic";
    case IdentityCase::semicircle: return "semicircle";
    case IdentityCase::thin_slab: return "thin-slab";
    }
    return "unknown";
}

IdentityReport projection_identities(IdentityCase which, const IdentityOptions& opt) {
    if (opt.points < 3) throw DomainError("need at least three test points");
    IdentityReport rep;
    rep.which = which;
    rep.points = opt.points;
    const int n = opt.points;
    const double R = opt.R;
    // test radii spread over the interior, away from the rim
    auto radius = [&](int i) { return 0.9 * R * i / (n - 1); };

    switch (which) {
    case IdentityCase::constant_potential: {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = projected_potential(opt.d, R, radius(i)).value;
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        for (double x : v) rep.max_residual = std::max(rep.max_residual, std::abs(x - mean));
        rep.constant = mean;
        break;
    }
    case IdentityCase::riesz_quadratic: {
        // fit V = C - gamma p^2 from p = 0 and p = R/2, then check every test radius
        const double v0 = riesz_ball_potential(opt.d, R, 0.0).value;
        const double ph = 0.5 * R;
        const double vh = riesz_ball_potential(opt.d, R, ph).value;
        const double gamma = (v0 - vh) / (ph * ph);
        for (int i = 0; i < n; ++i) {
            const double p = radius(i);
            const double v = riesz_ball_potential(opt.d, R, p).value;
            rep.max_residual = std::max(rep.max_residual, std::abs(v - (v0 - gamma * p * p)));
        }
        rep.constant = v0;
        rep.gamma = gamma;
        break;
    }
    case IdentityCase::semicircle: {
        const double a = R;
        for (int i = 0; i < n; ++i) {
            const double x = -0.95 * a + 1.9 * a * i / (n - 1);
            const double lhs = 0.5 * x * x + 0.5 * a * a * std::log(0.5 * a) - 0.25 * a * a;
            rep.max_residual = std::max(rep.max_residual, std::abs(lhs - semicircle_log_integral(a, x).value));
        }
        rep.constant = 0.5 * a * a * std::log(0.5 * a) - 0.25 * a * a;
        break;
    }
    case IdentityCase::thin_slab: {
        if (opt.axes.size() != 2) throw UnsupportedError("thin-slab identity is implemented for d = 3 (two in-plane axes)");
        const double a1 = opt.axes[0], a2 = opt.axes[1];
        const double eps = 1e-9 * std::min(a1, a2);
        const double N = 1.0;
        const auto co = domains::hyperellipsoid_coefficients({a1, a2, eps}, N, domains::CoeffMethod::carlson);
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * kPi * i / n;
            const double rr = 0.8 * i / (n - 1);
            const Point s{rr * a1 * std::cos(t), rr * a2 * std::sin(t)};
            const double lhs = co.alpha[0] * s[0] * s[0] + co.alpha[1] * s[1] * s[1] + co.alpha0;
            rep.max_residual = std::max(rep.max_residual, std::abs(lhs - thin_slab_potential(a1, a2, N, s).value));
        }
        rep.constant = co.alpha0;
        break;
    }
    }
    return rep;
}

} // namespace coulomb::surfaces
