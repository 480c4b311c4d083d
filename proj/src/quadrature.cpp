#include "coulomb/quadrature.hpp"
#include "coulomb/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coulomb::quad {

EvalResult gauss_kronrod(const Fn1& f, double a, double b, double tol, unsigned max_depth) {
    if (a == b) return {0.0, 0.0};
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol, &err, &l1);
    return {v, err};
}

EvalResult tanh_sinh(const Fn1& f, double a, double b, double tol) {
    if (a == b) return {0.0, 0.0};
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator.integrate(f, a, b, tol, &err, &l1, &levels);
    return {v, err};
}

namespace {

std::vector<double> ordered_breaks(double a, double b, std::vector<double> breaks) {
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > pts.back() && x < b) pts.push_back(x);
    pts.push_back(b);
    return pts;
}

} // namespace

EvalResult gauss_kronrod_split(const Fn1& f, double a, double b, std::vector<double> breaks, double tol) {
    const auto pts = ordered_breaks(a, b, std::move(breaks));
    EvalResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto r = gauss_kronrod(f, pts[i], pts[i + 1], tol);
        total.value += r.value;
        total.est_error += r.est_error;
    }
    return total;
}

EvalResult tanh_sinh_split(const Fn1& f, double a, double b, std::vector<double> breaks, double tol) {
    const auto pts = ordered_breaks(a, b, std::move(breaks));
    EvalResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto r = tanh_sinh(f, pts[i], pts[i + 1], tol);
        total.value += r.value;
        total.est_error += r.est_error;
    }
    return total;
}

EvalResult nested2d(const Fn2& f, double ax, double bx, const Fn1& ay, const Fn1& by, double tol) {
    double inner_err = 0.0;
    auto outer = [&](double x) {
        const auto r = gauss_kronrod([&](double y) { return f(x, y); }, ay(x), by(x), tol * 0.1, 15);
        inner_err = std::max(inner_err, r.est_error);
        return r.value;
    };
    auto r = gauss_kronrod(outer, ax, bx, tol, 15);
    r.est_error += inner_err * std::abs(bx - ax);
    return r;
}

double periodic_trapezoid(const Fn1& f, int n) {
    const double h = 2.0 * std::numbers::pi / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(i * h);
    return s * h;
}

EvalResult rqmc_unit_cube(const std::function<double(const double*)>& f, unsigned dim,
                          std::uint64_t points_per_shift, unsigned shifts, std::uint64_t seed) {
    if (shifts < 2) throw DomainError("rqmc_unit_cube: need at least two shifts");
    std::vector<double> means(shifts, 0.0);
    std::vector<double> shift(dim), x(dim);
    for (unsigned s = 0; s < shifts; ++s) {
        rng::CounterRng r(seed, 0x5eed, s);
        for (unsigned d = 0; d < dim; ++d) shift[d] = r.uniform();
        boost::random::sobol gen(dim);
        gen.discard(dim); // skip the origin
        double acc = 0.0;
        for (std::uint64_t i = 0; i < points_per_shift; ++i) {
            for (unsigned d = 0; d < dim; ++d) {
                double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 + shift[d];
                x[d] = u - std::floor(u);
            }
            acc += f(x.data());
        }
        means[s] = acc / static_cast<double>(points_per_shift);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= shifts;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (shifts - 1);
    return {mean, std::sqrt(var / shifts)};
}

EvalResult monte_carlo_unit_cube(const std::function<double(const double*)>& f, unsigned dim,
                                 std::uint64_t samples, std::uint64_t seed) {
    std::vector<double> x(dim);
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        rng::CounterRng r(seed, 0x3c, i);
        for (unsigned d = 0; d < dim; ++d) x[d] = r.uniform();
        const double v = f(x.data());
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

} // namespace coulomb::quad
