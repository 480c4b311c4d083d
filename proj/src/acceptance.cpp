#include "coulomb/acceptance.hpp"
#include "coulomb/balayage.hpp"
#include "coulomb/conformal.hpp"
#include "coulomb/domains.hpp"
#include "coulomb/fluctuations.hpp"
#include "coulomb/gas.hpp"
#include "coulomb/quadrature.hpp"
#include "coulomb/riesz_circle.hpp"
#include "coulomb/rng.hpp"
#include "coulomb/specfun.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>

namespace coulomb::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// deterministic uniform draws for test points
struct Draw {
    std::uint64_t seed;
    std::uint64_t n = 0;
    double operator()(double lo, double hi) {
        rng::CounterRng r(seed, 0, n++);
        return lo + (hi - lo) * r.uniform();
    }
};

CriterionResult closed_form_vs_oracle(Suite s) {
    using namespace domains;
    const int pts = s == Suite::full ? 20 : 4;
    Draw draw{101};
    double worst = 0.0;
    std::string worst_name;
    auto check = [&](const std::string& name, const UniformDomain& dom, const std::function<Point()>& gen) {
        for (int i = 0; i < pts; ++i) {
            const Point p = gen();
            const double closed = background_potential(dom, p);
            const double oracle = potential_oracle(dom, p, 1e-10).value;
            const double e = rel(closed, oracle);
            if (e > worst) {
                worst = e;
                worst_name = name;
            }
        }
    };
    auto ball_point = [&](int d, double R) {
        return [&, d, R] {
            Point p(d);
            double n2;
            do {
                n2 = 0.0;
                for (auto& x : p) {
                    x = draw(-1.6 * R, 1.6 * R);
                    n2 += x * x;
                }
            } while (std::abs(std::sqrt(n2) - R) < 1e-3 * R);
            return p;
        };
    };
    check("ball d=2", {Ball{2, 1.0}, 1.0}, ball_point(2, 1.0));
    check("ball d=3", {Ball{3, 1.0}, 1.0}, ball_point(3, 1.0));
    check("ball d=5", {Ball{5, 1.0}, 1.0}, ball_point(5, 1.0));
    check("ellipse", {Ellipse2D{2.0, 1.0}, 1.0}, [&] {
        const double r = std::sqrt(draw(0.0, 0.98)), t = draw(0.0, 2.0 * kPi);
        return Point{2.0 * r * std::cos(t), r * std::sin(t)};
    });
    check("annulus", {Annulus2D{1.0, 0.5}, 1.0}, [&] {
        double r;
        do r = draw(0.0, 1.6);
        while (std::abs(r - 1.0) < 1e-3 || std::abs(r - 0.5) < 1e-3);
        const double t = draw(0.0, 2.0 * kPi);
        return Point{r * std::cos(t), r * std::sin(t)};
    });
    check("segment", {Segment1D{1.0}, 1.0}, [&] { return Point{draw(-2.0, 2.0)}; });
    check("rectangle", {Rectangle{}, 1.0}, [&] { return Point{draw(-0.5, 1.5), draw(-0.5, 1.5)}; });
    check("cube", {Cuboid{}, 1.0}, [&] { return Point{draw(-0.5, 1.5), draw(-0.5, 1.5), draw(-0.5, 1.5)}; });
    return {1, "closed-form potentials vs oracle", worst <= 1e-6,
            fmt("%d points per geometry, worst relative error %.2e (%s), tol 1e-6", pts, worst, worst_name.c_str())};
}

CriterionResult demagnetising_sum_rule(Suite s) {
    using namespace domains;
    const int sets = s == Suite::full ? 10 : 3;
    Draw draw{202};
    double worst_sum = 0.0, worst_scale = 0.0;
    for (int d : {3, 4}) {
        for (int k = 0; k < sets; ++k) {
            std::vector<double> axes(d);
            for (auto& a : axes) a = draw(0.5, 3.0);
            const double N = draw(0.5, 5.0);
            const auto c = hyperellipsoid_coefficients(axes, N);
            const double rho = N / volume(Hyperellipsoid{axes});
            double sum = 0.0;
            for (double a : c.alpha) sum += a;
            worst_sum = std::max(worst_sum, std::abs(sum - rho * unit_sphere_area(d) * chi(d) / 2.0));
            // same background density on scaled axes
            const double lam = draw(0.3, 4.0);
            std::vector<double> scaled = axes;
            for (auto& a : scaled) a *= lam;
            const auto cs = hyperellipsoid_coefficients(scaled, N * std::pow(lam, d));
            for (int j = 0; j < d; ++j) worst_scale = std::max(worst_scale, rel(cs.alpha[j], c.alpha[j]));
        }
    }
    const bool ok = worst_sum <= 1e-10 && worst_scale <= 1e-10;
    return {2, "quadratic-coefficient sum rule and scale invariance", ok,
            fmt("%d axis sets in d=3,4: sum-rule error %.2e, scaling error %.2e, tol 1e-10", sets, worst_sum, worst_scale)};
}

CriterionResult cube_self_energy(Suite s) {
    const std::uint64_t samples = s == Suite::full ? 10'000'000ULL : 1'000'000ULL;
    const double closed = domains::cube_self_energy();
    const auto o = domains::cube_self_energy_oracle(samples, 7);
    const double z = std::abs(closed - o.value) / o.est_error;
    const bool ok = z <= 3.0 && (s == Suite::quick || o.est_error <= 1e-3);
    return {3, "cube self-energy vs Monte Carlo", ok,
            fmt("closed %.10f, oracle %.6f +- %.2e (%.2f sigma) at %llu samples", closed, o.value, o.est_error, z,
                static_cast<unsigned long long>(samples))};
}

CriterionResult riesz_circle(Suite) {
    double worst = 0.0;
    for (double R : {1.0, 2.5}) {
        for (int N = 1; N <= 64; ++N) {
            const riesz::RieszCircle g{0.0, N, R};
            const auto e = riesz::static_energy(g);
            const double want = -0.5 * N * std::log(2.0 * kPi * g.rho_b());
            worst = std::max(worst, std::abs(*e.exact - want));
        }
    }
    bool mono = true;
    std::string gaps;
    for (double x : {0.25, 0.5}) {
        double prev = INFINITY;
        for (int N : {100, 1000, 10000}) {
            const riesz::RieszCircle g{0.5, N, N / (2.0 * kPi)};
            const double d = std::abs(riesz::point_energy(g, x, riesz::PointMode::finite) -
                                      riesz::point_energy(g, x, riesz::PointMode::limit));
            mono = mono && d < prev;
            prev = d;
            gaps += fmt(" %.1e", d);
        }
    }
    return {4, "Riesz circle energies", worst <= 1e-12 && mono,
            fmt("s=0 max error %.2e (tol 1e-12); s=1/2 gaps to the limit%s, monotone=%s", worst, gaps.c_str(),
                mono ? "yes" : "no")};
}

CriterionResult free_energy(Suite) {
    bool ok = true;
    std::string d;
    const std::vector<std::pair<std::string, gas::Ensemble>> ens{
        {"ginibre", gas::Ginibre{}}, {"elliptic", gas::Elliptic{0.5}}, {"induced", gas::Induced{1.0}}};
    for (const auto& [name, e] : ens) {
        const double r50 = gas::free_energy_remainder({2.0, 50, e});
        const double r200 = gas::free_energy_remainder({2.0, 200, e});
        ok = ok && std::abs(r200) <= 0.05 && std::abs(r200) < std::abs(r50);
        d += fmt("%s r(50)=%.4f r(200)=%.4f; ", name.c_str(), r50, r200);
    }
    d += "tol |r(200)| <= 0.05 and decreasing";
    return {5, "free-energy asymptotics vs exact products", ok, d};
}

CriterionResult sinh_model(Suite) {
    const double c = 1.0, L = 2.0 * kPi;
    const gas::GasModel two{2.0, 2, gas::Sinh{c, L}};
    const double exact = std::exp(gas::exact_log_partition(two).value);
    auto f = [&](double x, double y) {
        const double sh = 2.0 * std::sinh(kPi * (x - y) / L);
        return std::exp(-c * (x * x + y * y)) * sh * sh;
    };
    const double lim = 12.0;
    const auto direct = quad::nested2d(f, -lim, lim, [&](double) { return -lim; }, [&](double) { return lim; }, 1e-13);
    const double e2 = rel(exact, direct.value);
    const gas::GasModel one{2.0, 1, gas::Sinh{c, L}};
    const double v1 = std::exp(gas::exact_log_partition(one).value);
    const double e1 = rel(v1, std::sqrt(kPi / c));
    return {6, "sinh configuration integral", e2 <= 1e-8 && e1 <= 4e-16,
            fmt("N=2 exact %.12f vs quadrature %.12f (rel %.2e, tol 1e-8); N=1 rel %.1e", exact, direct.value, e2, e1)};
}

CriterionResult fluctuations(Suite) {
    using namespace fluct;
    double worst = 0.0;
    const std::vector<std::function<double(double)>> polys{
        [](double t) { return std::cos(t); },
        [](double t) { return std::sin(2.0 * t) + 0.5 * std::cos(3.0 * t); },
        [](double t) { return 1.0 + std::cos(t) - 0.25 * std::sin(5.0 * t); },
        [](double t) { return std::cos(4.0 * t) * std::sin(t); },
        [](double t) { return 0.3 * std::cos(7.0 * t) + std::sin(t) + 2.0 * std::cos(2.0 * t); },
    };
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const LinearStatistic f{polys[i], {}}, g{polys[(i + 1) % polys.size()], {}};
        for (const auto* h : {&f, &g}) {
            const double q = covariance_circle(f, *h, 2.0, CovRoute::quadrature);
            const double fo = covariance_circle(f, *h, 2.0, CovRoute::fourier);
            worst = std::max(worst, std::abs(q - fo));
        }
    }
    const LinearStatistic cs{[](double t) { return std::cos(t); }, {}};
    const double half = covariance_circle(cs, cs, 2.0, CovRoute::fourier);
    const double sc = surface_correlation(DiskBoundary{1.0}, 2.0, {0.0, 0.0}, {kPi, 0.0}).value;
    const double want = -1.0 / (16.0 * kPi * kPi);
    const double fd = disk_surface_correlation_fd(1.0, 2.0, 0.0, kPi);
    const bool ok = worst <= 1e-8 && std::abs(half - 0.5) <= 1e-10 && std::abs(sc - want) <= 1e-12 && std::abs(fd - sc) <= 1e-6;
    return {7, "fluctuation formulas", ok,
            fmt("route gap %.2e (tol 1e-8); cos: %.15f; disk %.3e vs %.3e; FD gap %.2e (tol 1e-6)", worst, half, sc, want,
                std::abs(fd - sc))};
}

CriterionResult balayage_check(Suite s) {
    using namespace domains;
    const int pts = s == Suite::full ? 20 : 5;
    Draw draw{808};
    double worst = 0.0;
    std::string worst_name;
    auto run = [&](const std::string& name, const UniformDomain& dom, const std::function<Point()>& gen) {
        const auto m = balayage::balayage_measure(dom);
        for (int i = 0; i < pts; ++i) {
            const Point p = gen();
            double body;
            try {
                body = -background_potential(dom, p);
            } catch (const UnsupportedError&) {
                body = -potential_oracle(dom, p, 1e-11).value;
            }
            const double e = rel(balayage::balayage_potential(m, p).value, body);
            if (e > worst) {
                worst = e;
                worst_name = name;
            }
        }
    };
    auto outside = [&](double lo, double hi, double ax, double ay) {
        return [&, lo, hi, ax, ay] {
            const double r = draw(lo, hi), t = draw(0.0, 2.0 * kPi);
            return Point{ax * r * std::cos(t), ay * r * std::sin(t)};
        };
    };
    run("disk", {Ball{2, 1.0}, 1.0}, outside(1.01, 3.0, 1.0, 1.0));
    run("ball d=3", {Ball{3, 1.0}, 1.0}, [&] {
        const double r = draw(1.01, 3.0), t = draw(0.0, kPi), ph = draw(0.0, 2.0 * kPi);
        return Point{r * std::sin(t) * std::cos(ph), r * std::sin(t) * std::sin(ph), r * std::cos(t)};
    });
    for (double c : {0.3, 0.5, 0.7}) {
        const UniformDomain dom{Annulus2D{1.0, c}, 1.0};
        run(fmt("annulus c=%.1f outer", c), dom, outside(1.01, 3.0, 1.0, 1.0));
        run(fmt("annulus c=%.1f hole", c), dom, outside(0.0, 0.98 * c, 1.0, 1.0));
    }
    run("ellipse (2,1)", {Ellipse2D{2.0, 1.0}, 1.0}, outside(1.02, 2.5, 2.0, 1.0));
    run("ellipse (3,1)", {Ellipse2D{3.0, 1.0}, 1.0}, outside(1.02, 2.5, 3.0, 1.0));
    const auto [outer, inner] = balayage::annulus_weights(0.5);
    const double lc = std::log(0.5);
    const double sys = std::max(std::abs(outer + inner - 1.0), std::abs(-inner * lc - (0.5 + 0.25 / 0.75 * lc)));
    return {8, "balayage exterior potentials", worst <= 1e-6 && sys <= 1e-12,
            fmt("%d points per body, worst relative gap %.2e (%s), tol 1e-6; annulus system residual %.1e", pts, worst,
                worst_name.c_str(), sys)};
}

CriterionResult hole_probability(Suite) {
    double worst = 0.0;
    for (double a : {0.5, 1.0, 1.7}) {
        const double e = balayage::hole_energy({domains::Ball{2, a}, 1.0, 2.0});
        worst = std::max(worst, rel(e, kPi * kPi * std::pow(a, 4) / 8.0));
    }
    double gin = 0.0;
    for (double beta : {1.0, 2.0, 4.0})
        for (double N : {10.0, 100.0})
            for (double r : {0.1, 0.4}) gin = std::max(gin, rel(balayage::ginibre_disk_gap(beta, N, r), -beta * N * N * std::pow(r, 4) / 8.0));
    const double tail = balayage::tail_exponent(2.0, {3.0, 1.0, 10.0});
    const double tail_hand = -0.5 * 1e6 * std::log(10.0);
    const double te = rel(tail, tail_hand);
    return {9, "hole energies and gap asymptotics", worst <= 1e-8 && gin <= 1e-8 && te <= 1e-15,
            fmt("disk energy rel %.1e (tol 1e-8); GinUE gap algebra rel %.1e; tail %.6e vs %.6e", worst, gin, tail, tail_hand)};
}

CriterionResult sampler(Suite s) {
    const bool full = s == Suite::full;
    const int N = 32;
    const double sq = std::sqrt(static_cast<double>(N));
    gas::ChainOptions opt;
    opt.keep_every = 10;
    const auto gin = gas::run_chain({2.0, N, gas::Ginibre{}}, full ? 200000 : 15000, 11, opt);
    const auto dens = gas::empirical_density(gin.samples, {gas::GridKind::radial, 20, 0.0, sq});
    const bool edge_ok = std::abs(dens.edge_moment / sq - 1.0) <= 0.05;
    double worst_bulk = 0.0;
    for (int b = 0; b < 20; ++b) {
        const double mid = 0.5 * (dens.edges[b] + dens.edges[b + 1]) / sq;
        if (mid < 0.2 || mid > 0.8) continue;
        worst_bulk = std::max(worst_bulk, std::abs(dens.density[b] * kPi - 1.0));
    }
    opt.keep_every = full ? 5 : 2;
    const auto ind = gas::run_chain({2.0, N, gas::Induced{1.0}}, full ? 50000 : 6000, 12, opt);
    const double hole = gas::density_in_disk(ind.samples, 0.9 * sq);

    // paired proposals from random states
    const gas::GasModel m{2.0, 8, gas::Ginibre{}};
    double db = 0.0;
    const int pairs = 10000;
    for (int k = 0; k < pairs; ++k) {
        rng::CounterRng r(33, 1, static_cast<std::uint64_t>(k));
        std::vector<gas::cplx> x(m.N);
        for (auto& z : x) z = gas::cplx(2.0 * r.normal(), 2.0 * r.normal());
        const int j = static_cast<int>(r.next_u64() % m.N);
        const gas::cplx y = x[j] + 0.7 * gas::cplx(r.normal(), r.normal());
        auto xy = x;
        xy[j] = y;
        const double du = gas::delta_energy(m, x, j, y);
        const double fwd = gas::acceptance_probability(m, x, j, y);
        const double bwd = gas::acceptance_probability(m, xy, j, x[j]);
        db = std::max(db, std::abs(fwd / bwd * std::exp(m.beta * du) - 1.0));
    }
    const bool ok = edge_ok && worst_bulk <= 0.10 && hole < 0.05 / kPi && db <= 1e-12;
    return {10, "Metropolis sampler", ok,
            fmt("edge %.3f vs sqrt(N) %.3f (quantile edge %.3f); bulk density max dev %.1f%%; induced hole %.4f/pi; "
                "balance %.1e; acceptance %.2f",
                dens.edge_moment, sq, dens.edge_quantile, 100.0 * worst_bulk, hole * kPi, db, gin.state.acceptance_rate)};
}

CriterionResult green_functions(Suite s) {
    using namespace conformal;
    const int pairs = s == Suite::full ? 200 : 40;
    Draw draw{1111};
    double sym = 0.0, bnd = 0.0, transport = 0.0;
    auto ext = [&](double R) { return std::polar(draw(1.001 * R, 4.0 * R), draw(0.0, 2.0 * kPi)); };
    const DiskGeometry disk{1.3};
    const Mapped ell{LaurentMap::ellipse(2.0, 1.0)};
    const Mapped slit{LaurentMap::interval()};
    for (int i = 0; i < pairs; ++i) {
        const cplx z = ext(disk.R), w = ext(disk.R);
        sym = std::max(sym, std::abs(green_two_point(disk, z, w) - green_two_point(disk, w, z)));
        bnd = std::max(bnd, std::abs(green_two_point(disk, std::polar(disk.R, draw(0.0, 2.0 * kPi)), w)));

        const cplx hz(draw(-3.0, 3.0), draw(0.01, 3.0)), hw(draw(-3.0, 3.0), draw(0.01, 3.0));
        sym = std::max(sym, std::abs(green_two_point(HalfPlane{}, hz, hw) - green_two_point(HalfPlane{}, hw, hz)));
        bnd = std::max(bnd, std::abs(green_two_point(HalfPlane{}, cplx(draw(-3.0, 3.0), 0.0), hw)));
        // upper half plane onto the exterior of the unit disk
        auto cayley = [](cplx q) { return (q + cplx(0, 1)) / (q - cplx(0, 1)); };
        transport = std::max(transport, std::abs(green_two_point(HalfPlane{}, hz, hw) -
                                                 green_two_point(DiskGeometry{1.0}, cayley(hz), cayley(hw))));

        for (const Mapped* mp : {&ell, &slit}) {
            const cplx a = mp->map.xi(ext(1.0)), b = mp->map.xi(ext(1.0));
            sym = std::max(sym, std::abs(green_two_point(*mp, a, b) - green_two_point(*mp, b, a)));
            bnd = std::max(bnd, std::abs(green_two_point(*mp, mp->map.xi(std::polar(1.0, draw(0.0, 2.0 * kPi))), b)));
        }

        auto vec3 = [&](double lo, double hi) {
            const double r = draw(lo, hi), t = std::acos(draw(-1.0, 1.0)), ph = draw(0.0, 2.0 * kPi);
            return Vec3{r * std::sin(t) * std::cos(ph), r * std::sin(t) * std::sin(ph), r * std::cos(t)};
        };
        const Sphere3 sp{0.8};
        const Vec3 a = vec3(0.81, 3.0), b = vec3(0.81, 3.0);
        sym = std::max(sym, std::abs(green3d(sp, a, b) - green3d(sp, b, a)));
        bnd = std::max(bnd, std::abs(green3d(sp, vec3(0.8, 0.8), b)));
        const Vec3 p{draw(-2, 2), draw(-2, 2), draw(0.01, 2)}, q{draw(-2, 2), draw(-2, 2), draw(0.01, 2)};
        sym = std::max(sym, std::abs(green3d(HalfSpace3{}, p, q) - green3d(HalfSpace3{}, q, p)));
        bnd = std::max(bnd, std::abs(green3d(HalfSpace3{}, Vec3{p[0], p[1], 0.0}, q)));
    }
    const bool ok = sym <= 1e-12 && bnd <= 1e-12 && transport <= 1e-12;
    return {11, "Green functions", ok,
            fmt("%d pairs per geometry: symmetry %.1e, boundary %.1e, half-plane/disk transport %.1e, tol 1e-12", pairs, sym,
                bnd, transport)};
}

} // namespace

CriterionResult run_criterion(int id, Suite suite) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = closed_form_vs_oracle(suite); break;
        case 2: r = demagnetising_sum_rule(suite); break;
        case 3: r = cube_self_energy(suite); break;
        case 4: r = riesz_circle(suite); break;
        case 5: r = free_energy(suite); break;
        case 6: r = sinh_model(suite); break;
        case 7: r = fluctuations(suite); break;
        case 8: r = balayage_check(suite); break;
        case 9: r = hole_probability(suite); break;
        case 10: r = sampler(suite); break;
        case 11: r = green_functions(suite); break;
        default: r = {id, "unknown criterion", false, "no such criterion"};
        }
    } catch (const std::exception& e) {
        r.id = id;
        r.title = "criterion " + std::to_string(id);
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_suite(Suite suite, const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
        out.push_back(run_criterion(id, suite));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    return fmt("%s [%d] %s: %s (%.1fs)", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(), r.seconds);
}

} // namespace coulomb::acceptance
