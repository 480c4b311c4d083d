#include "coulomb/fluctuations.hpp"
#include "coulomb/quadrature.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

namespace coulomb::fluct {

namespace {

constexpr double kPi = std::numbers::pi;

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
}

// (1 / 16 pi^2) int int (F(t) - F(s)) (G(t) - G(s)) / sin^2((t - s)/2) dt ds.
// With s = t + phi the inner integrand is smooth and periodic in phi; an
// offset grid phi_k = (k + 1/2) h never touches the removable diagonal.
double circle_double_integral(const std::function<double(double)>& F, const std::function<double(double)>& G,
                              int n) {
    if (n < 8) throw DomainError("quadrature needs at least 8 nodes");
    const double h = 2.0 * kPi / n;
    std::vector<double> ft(n), gt(n), fs(n), gs(n), w(n);
    for (int i = 0; i < n; ++i) {
        ft[i] = F(i * h);
        gt[i] = G(i * h);
        fs[i] = F((i + 0.5) * h);
        gs[i] = G((i + 0.5) * h);
        const double sn = std::sin(0.5 * (i + 0.5) * h);
        w[i] = 1.0 / (sn * sn);
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int k = 0; k < n; ++k) {
            const int j = (i + k) % n; // s = t_i + (k + 1/2) h
            row += (ft[i] - fs[j]) * (gt[i] - gs[j]) * w[k];
        }
        total += row;
    }
    return total * h * h / (16.0 * kPi * kPi);
}

struct FftwDeleter {
    void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};

} // namespace

std::vector<cplx> fourier_coefficients(const std::function<double(double)>& f, int n_max) {
    constexpr int M = kFourierGrid;
    if (n_max < 0 || n_max >= M / 2) throw DomainError("fourier_coefficients: n_max out of range");
    std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(M), &fftw_free);
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(M / 2 + 1), &fftw_free);
    for (int k = 0; k < M; ++k) in.get()[k] = f(2.0 * kPi * k / M);
    std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwDeleter> plan(
        fftw_plan_dft_r2c_1d(M, in.get(), out.get(), FFTW_ESTIMATE));
    fftw_execute(plan.get());
    std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) c[n] = cplx(out.get()[n][0], out.get()[n][1]) / static_cast<double>(M);
    return c;
}

LinearStatistic LinearStatistic::with_fourier(std::function<double(double)> f, int n_max) {
    LinearStatistic s{std::move(f), std::nullopt};
    s.fourier = fourier_coefficients(s.f, n_max);
    return s;
}

double LinearStatistic::reconstruction_error() const {
    if (!fourier) throw DomainError("reconstruction_error: no Fourier coefficients attached");
    const auto& c = *fourier;
    double err = 0.0;
    for (int k = 0; k < 512; ++k) {
        const double t = 2.0 * kPi * k / 512;
        double v = c[0].real();
        for (std::size_t n = 1; n < c.size(); ++n) v += 2.0 * std::real(c[n] * std::polar(1.0, n * t));
        err = std::max(err, std::abs(v - f(t)));
    }
    return err;
}

double cue_kernel(int N, double theta, double theta_p) {
    if (N < 1) throw DomainError("cue_kernel: N must be positive");
    const double half = 0.5 * (theta - theta_p);
    const double den = std::sin(half);
    if (std::abs(den) < 1e-12) {
        // near the diagonal (mod 2 pi) sin(N x)/sin(x) -> N cos(N x)/cos(x) by l'Hopital
        return N * std::cos(N * half) / std::cos(half) / (2.0 * kPi);
    }
    return std::sin(N * half) / den / (2.0 * kPi);
}

cplx subblock_kernel(int N, cplx z, cplx zp) {
    if (N < 1) throw DomainError("subblock_kernel: N must be positive");
    if (std::abs(z) > 1.0 + 1e-12 || std::abs(zp) > 1.0 + 1e-12)
        throw DomainError("subblock_kernel: points must lie in the closed unit disk");
    const cplx w = z * std::conj(zp);
    // Horner form of sum_{j=1}^N j w^{j-1}
    cplx acc = 0.0;
    for (int j = N; j >= 1; --j) acc = acc * w + static_cast<double>(j);
    return acc / kPi;
}

double subblock_kernel_smoothed(int N, double theta, double theta_p) {
    if (N < 1) throw DomainError("subblock_kernel: N must be positive");
    const double delta = theta - theta_p;
    // |K|^2 = pi^{-2} sum_{j,k} j k (r r')^{j+k-2} e^{i (j-k) delta}; int_0^1 r^{j+k-1} dr = 1/(j+k)
    double total = 0.0;
    for (int j = 1; j <= N; ++j) {
        total += static_cast<double>(j) * j / (4.0 * j * j);
        for (int k = j + 1; k <= N; ++k) {
            const double s = static_cast<double>(j + k);
            total += 2.0 * static_cast<double>(j) * k / (s * s) * std::cos((k - j) * delta);
        }
    }
    return total / (kPi * kPi);
}

double covariance_circle(const LinearStatistic& f, const LinearStatistic& g, double beta, CovRoute route,
                         QuadratureOptions opt) {
    require_beta(beta);
    if (!f.f || !g.f) throw DomainError("covariance_circle: statistic has no function");
    if (route == CovRoute::quadrature) return (2.0 / beta) * circle_double_integral(f.f, g.f, opt.nodes);
    constexpr int n_max = kFourierGrid / 2 - 1;
    const auto fc = (f.fourier && static_cast<int>(f.fourier->size()) > 1) ? *f.fourier : fourier_coefficients(f.f, n_max);
    const auto gc = (g.fourier && static_cast<int>(g.fourier->size()) > 1) ? *g.fourier : fourier_coefficients(g.f, n_max);
    const std::size_t m = std::min(fc.size(), gc.size());
    // sum_n |n| f_n g_{-n} with g_{-n} = conj(g_n) for real g
    double s = 0.0;
    for (std::size_t n = m; n-- > 1;) s += 2.0 * n * std::real(fc[n] * std::conj(gc[n]));
    return (2.0 / beta) * s;
}

double covariance_mapped(const conformal::LaurentMap& map, const std::function<double(cplx)>& f,
                         const std::function<double(cplx)>& g, double beta, Convention conv, QuadratureOptions opt) {
    require_beta(beta);
    auto F = [&](double t) { return f(map.xi(std::polar(1.0, t))); };
    auto G = [&](double t) { return g(std::conj(map.xi(std::polar(1.0, t)))); };
    const double base = circle_double_integral(F, G, opt.nodes);
    switch (conv) {
    case Convention::contour: return (2.0 / beta) * base;
    case Convention::background: return (1.0 / beta) * base;
    case Convention::interval: return (4.0 / beta) * base;
    }
    return base;
}

double bulk_covariance_disk(double R, const std::function<double(cplx)>& f, const std::function<double(cplx)>& g,
                            double beta) {
    require_beta(beta);
    if (!(R > 0.0)) throw DomainError("disk radius must be positive");
    const double h = 1e-5 * R;
    auto grad = [&](const std::function<double(cplx)>& u, cplx z) {
        return cplx((u(z + h) - u(z - h)) / (2.0 * h), (u(z + cplx(0, h)) - u(z - cplx(0, h))) / (2.0 * h));
    };
    auto integrand = [&](double r, double t) {
        const cplx z = std::polar(r, t);
        const cplx gf = grad(f, z), gg = grad(g, z);
        return r * (gf.real() * gg.real() + gf.imag() * gg.imag());
    };
    const auto res = quad::nested2d(integrand, 0.0, R, [](double) { return 0.0; }, [](double) { return 2.0 * kPi; }, 1e-9);
    return res.value / (2.0 * kPi * beta);
}

SurfaceCorrelation surface_correlation(const BoundaryGeometry& geom, double beta, BoundaryPoint p1, BoundaryPoint p2) {
    require_beta(beta);
    if (p1.a == p2.a && p1.b == p2.b) throw SingularityError("surface_correlation: coincident points");
    struct Visitor {
        double beta;
        BoundaryPoint p1, p2;
        SurfaceCorrelation operator()(const DiskBoundary& d) const {
            if (!(d.R > 0.0)) throw DomainError("disk radius must be positive");
            const double chord = 2.0 * d.R * std::sin(0.5 * (p1.a - p2.a));
            if (chord == 0.0) throw SingularityError("surface_correlation: coincident points");
            return {-1.0 / (beta * 2.0 * kPi * kPi * chord * chord), false};
        }
        SurfaceCorrelation operator()(const HalfPlaneBoundary&) const {
            const double dx = p1.a - p2.a;
            return {-1.0 / (2.0 * beta * kPi * kPi * dx * dx), false};
        }
        SurfaceCorrelation operator()(const EllipseBoundary& e) const {
            const auto map = conformal::LaurentMap::ellipse(e.a1, e.a2);
            const cplx u = std::polar(1.0, p1.a), v = std::polar(1.0, p2.a);
            const double h1 = std::abs(map.dxi(u)), h2 = std::abs(map.dxi(v));
            const double d2 = std::norm(u - v);
            if (d2 == 0.0) throw SingularityError("surface_correlation: coincident points");
            return {-1.0 / (beta * 2.0 * kPi * kPi * d2 * h1 * h2), false};
        }
        SurfaceCorrelation operator()(const HalfSpaceBoundary&) const {
            const double d2 = (p1.a - p2.a) * (p1.a - p2.a) + (p1.b - p2.b) * (p1.b - p2.b);
            return {-1.0 / (8.0 * beta * kPi * kPi * std::pow(d2, 1.5)), false};
        }
        SurfaceCorrelation operator()(const MappedBoundary& m) const {
            const cplx u = std::polar(1.0, p1.a), v = std::polar(1.0, p2.a);
            const double d2 = std::norm(1.0 - u * std::conj(v));
            if (d2 == 0.0) throw SingularityError("surface_correlation: coincident points");
            // |zeta'(z)| = 1 / |xi'(u)| on the boundary
            const double k2 = 1.0 / (2.0 * kPi * kPi) / (std::abs(m.map.dxi(u)) * std::abs(m.map.dxi(v)) * d2);
            return {-k2 / beta, true};
        }
    };
    return std::visit(Visitor{beta, p1, p2}, geom);
}

double disk_surface_correlation_fd(double R, double beta, double theta1, double theta2, double h) {
    require_beta(beta);
    // image-charge form continued analytically across |z| = R
    auto G = [&](double r1, double r2) {
        const cplx z = std::polar(r1, theta1), w = std::polar(r2, theta2);
        return -std::log(std::abs(z - w)) + std::log(std::abs(1.0 - z * std::conj(w) / (R * R)));
    };
    const double d2 = (G(R + h, R + h) - G(R + h, R - h) - G(R - h, R + h) + G(R - h, R - h)) / (4.0 * h * h);
    return -d2 / (beta * 4.0 * kPi * kPi);
}

double ellipse_prediction_difference(double a1, double a2, double beta, double eta1, double eta2) {
    const BoundaryPoint p1{eta1, 0.0}, p2{eta2, 0.0};
    const auto mapped = surface_correlation(MappedBoundary{conformal::LaurentMap::ellipse(a1, a2)}, beta, p1, p2);
    const auto ellipse = surface_correlation(EllipseBoundary{a1, a2}, beta, p1, p2);
    return mapped.value - ellipse.value;
}

} // namespace coulomb::fluct
