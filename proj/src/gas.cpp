#include "coulomb/gas.hpp"
#include "coulomb/domains.hpp"
#include "coulomb/rng.hpp"
#include "coulomb/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coulomb::gas {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ln|2 sinh u| without overflow for large |u|
double log_abs_2sinh(double u) {
    const double a = std::abs(u);
    return a + std::log1p(-std::exp(-2.0 * a));
}

double pair_energy(const GasModel& m, cplx a, cplx b) {
    if (const auto* s = std::get_if<Sinh>(&m.ensemble)) return -log_abs_2sinh(kPi * (a.real() - b.real()) / s->L);
    return -std::log(std::abs(a - b));
}

// one-body energy; for the contour ensemble the argument is the angle in z.real()
double one_body(const GasModel& m, cplx z) {
    return std::visit(overloaded{
                          [&](const Ginibre&) { return 0.5 * std::norm(z); },
                          [&](const Elliptic& e) {
                              return (std::norm(z) - e.tau * std::real(z * z)) / (2.0 * (1.0 - e.tau * e.tau));
                          },
                          [&](const Induced& i) { return 0.5 * std::norm(z) - i.alpha * m.N * std::log(std::abs(z)); },
                          [&](const Contour& c) {
                              return -std::log(std::abs(c.map.dxi(std::polar(1.0, z.real())))) / m.beta;
                          },
                          [&](const Sinh& s) { return 0.5 * s.c * z.real() * z.real(); },
                      },
                      m.ensemble);
}

bool is_contour(const GasModel& m) { return std::holds_alternative<Contour>(m.ensemble); }

// energy change when particle j moves from z[j] to y, with one-body terms supplied
double delta_with(const GasModel& m, std::span<const cplx> z, int j, cplx y, double u_old, double u_new) {
    double d = u_new - u_old;
    for (int k = 0; k < static_cast<int>(z.size()); ++k) {
        if (k == j) continue;
        d += pair_energy(m, y, z[k]) - pair_energy(m, z[j], z[k]);
    }
    return d;
}

double contour_angle(const GasModel& m, cplx z) {
    const auto& map = std::get<Contour>(m.ensemble).map;
    return std::arg(map.preimage(z));
}

double default_step(const GasModel& m) {
    return std::visit(overloaded{
                          [&](const Contour&) { return kPi / m.N; },
                          [&](const Sinh& s) { return kPi / (s.c * s.L); },
                          [&](const auto&) { return 0.8; },
                      },
                      m.ensemble);
}

struct Initial {
    std::vector<cplx> positions;
    std::vector<double> angles;
};

Initial initial_state(const GasModel& m, std::uint64_t key) {
    Initial out;
    out.positions.resize(m.N);
    const double N = m.N;
    for (int j = 0; j < m.N; ++j) {
        rng::CounterRng r(key, ~std::uint64_t{0}, static_cast<std::uint64_t>(j));
        const double u = r.uniform(), v = r.uniform();
        const double t = 2.0 * kPi * v;
        std::visit(overloaded{
                       [&](const Ginibre&) { out.positions[j] = std::polar(std::sqrt(N * u), t); },
                       [&](const Elliptic& e) {
                           const double s = std::sqrt(N * u);
                           out.positions[j] = cplx((1.0 + e.tau) * s * std::cos(t), (1.0 - e.tau) * s * std::sin(t));
                       },
                       [&](const Induced& i) {
                           out.positions[j] = std::polar(std::sqrt(N * (i.alpha + u)), t);
                       },
                       [&](const Contour& c) {
                           const double a = 2.0 * kPi * (j + 0.25 + 0.5 * u) / N;
                           out.angles.push_back(a);
                           out.positions[j] = c.map.xi(std::polar(1.0, a));
                       },
                       [&](const Sinh& s) {
                           const double R = kPi * N / (s.c * s.L);
                           out.positions[j] = cplx(R * (2.0 * u - 1.0), 0.0);
                       },
                   },
                   m.ensemble);
    }
    return out;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    // shift by the first sample so constant statistics give exactly zero
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i] - a[0];
        mb += b[i] - b[0];
    }
    ma /= n;
    mb /= n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (a[i] - a[0] - ma) * (b[i] - b[0] - mb);
    return s / static_cast<double>(n - 1);
}

double require_beta2(const GasModel& m) {
    if (std::abs(m.beta - 2.0) > 1e-12) throw UnsupportedError("exact partition functions are tabulated at beta = 2 only");
    return 2.0;
}

// N C0 + U_bb for the neutralising body of the ensemble at size N
double background_constant(const GasModel& m, double N) {
    using namespace domains;
    return std::visit(
        overloaded{
            [&](const Ginibre&) {
                const UniformDomain d{Ball{2, std::sqrt(N)}, N};
                return N * background_potential(d, {0.0, 0.0}) + self_energy(d);
            },
            [&](const Elliptic& e) {
                const UniformDomain d{Ellipse2D{std::sqrt(N) * (1.0 + e.tau), std::sqrt(N) * (1.0 - e.tau)}, N};
                return N * background_potential(d, {0.0, 0.0}) + self_energy(d);
            },
            [&](const Induced& i) {
                const double R = std::sqrt((1.0 + i.alpha) * N), c = std::sqrt(i.alpha / (1.0 + i.alpha));
                const UniformDomain d{Annulus2D{R, c}, N};
                const double r = 0.5 * (1.0 + c) * R;
                const double c0 = background_potential(d, {r, 0.0}) - (0.5 * r * r - i.alpha * N * std::log(r));
                return N * c0 + self_energy(d);
            },
            [&](const Sinh& s) {
                const UniformDomain d{Segment1D{kPi * N / (s.c * s.L)}, N};
                return N * background_potential(d, {0.0}) + self_energy(d);
            },
            [&](const Contour&) -> double { throw UnsupportedError("no background for the contour ensemble"); },
        },
        m.ensemble);
}

} // namespace

std::string ensemble_name(const Ensemble& e) {
    return std::visit(overloaded{
                          [](const Ginibre&) { return std::string("ginibre"); },
                          [](const Elliptic&) { return std::string("elliptic"); },
                          [](const Induced&) { return std::string("induced"); },
                          [](const Contour&) { return std::string("contour"); },
                          [](const Sinh&) { return std::string("sinh"); },
                      },
                      e);
}

void validate(const GasModel& m) {
    if (!(m.beta > 0.0) || !std::isfinite(m.beta)) throw DomainError("beta must be positive");
    if (m.N < 1) throw DomainError("N must be at least 1");
    std::visit(overloaded{
                   [](const Ginibre&) {},
                   [](const Elliptic& e) {
                       if (!(e.tau >= 0.0 && e.tau < 1.0)) throw DomainError("elliptic ensemble needs 0 <= tau < 1");
                   },
                   [](const Induced& i) {
                       if (!(i.alpha >= 0.0) || !std::isfinite(i.alpha)) throw DomainError("induced ensemble needs alpha >= 0");
                   },
                   [](const Contour&) {},
                   [](const Sinh& s) {
                       if (!(s.c > 0.0 && s.L > 0.0)) throw DomainError("sinh ensemble needs c > 0 and L > 0");
                   },
               },
               m.ensemble);
}

bool is_real_line(const GasModel& m) { return std::holds_alternative<Sinh>(m.ensemble); }

double energy(const GasModel& m, std::span<const cplx> z) {
    validate(m);
    if (static_cast<int>(z.size()) != m.N) throw DomainError("energy: expected N positions");
    double u = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        u += is_contour(m) ? one_body(m, contour_angle(m, z[j])) : one_body(m, z[j]);
        for (std::size_t k = j + 1; k < z.size(); ++k) u += pair_energy(m, z[j], z[k]);
    }
    return u;
}

double delta_energy(const GasModel& m, std::span<const cplx> z, int j, cplx y) {
    if (j < 0 || j >= static_cast<int>(z.size())) throw DomainError("delta_energy: particle index out of range");
    if (is_contour(m)) {
        return delta_with(m, z, j, y, one_body(m, contour_angle(m, z[j])), one_body(m, contour_angle(m, y)));
    }
    return delta_with(m, z, j, y, one_body(m, z[j]), one_body(m, y));
}

double acceptance_probability(const GasModel& m, std::span<const cplx> z, int j, cplx y) {
    const double d = delta_energy(m, z, j, y);
    if (std::isnan(d)) throw OverflowError("acceptance_probability: energy change is not a number");
    return std::min(1.0, std::exp(-m.beta * d));
}

ChainResult run_chain(const GasModel& m, std::int64_t sweeps, std::uint64_t seed, ChainOptions opt,
                      const SampleSink& sink) {
    validate(m);
    if (sweeps < 1) throw DomainError("run_chain: sweeps must be at least 1");
    if (!(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 1.0)) throw DomainError("burn-in fraction must lie in [0, 1)");
    if (!(opt.target_acceptance > 0.0 && opt.target_acceptance < 1.0)) throw DomainError("target acceptance must lie in (0, 1)");

    const std::uint64_t key = rng::mix64(seed ^ rng::mix64(opt.chain_id + 1));
    auto init = initial_state(m, key);
    ChainResult out;
    ChainState& st = out.state;
    st.positions = std::move(init.positions);
    st.angles = std::move(init.angles);
    st.rng_seed = seed;
    st.step_scale = opt.initial_step > 0.0 ? opt.initial_step : default_step(m);
    st.running_energy = 0.0;
    for (int j = 0; j < m.N; ++j) {
        st.running_energy += one_body(m, is_contour(m) ? cplx(st.angles[j]) : st.positions[j]);
        for (int k = j + 1; k < m.N; ++k) st.running_energy += pair_energy(m, st.positions[j], st.positions[k]);
    }
    if (!std::isfinite(st.running_energy)) throw OverflowError("run_chain: initial energy is not finite");

    out.samples.N = m.N;
    const auto burn = static_cast<std::int64_t>(opt.burn_in_fraction * static_cast<double>(sweeps));
    const bool contour = is_contour(m);
    const bool real_line = is_real_line(m);
    const Contour* cmap = std::get_if<Contour>(&m.ensemble);
    std::int64_t window_acc = 0, window_prop = 0;

    for (std::int64_t sweep = 0; sweep < sweeps; ++sweep) {
        const bool measuring = sweep >= burn;
        for (int j = 0; j < m.N; ++j) {
            rng::CounterRng r(key, static_cast<std::uint64_t>(sweep), static_cast<std::uint64_t>(j));
            const double g1 = r.normal(), g2 = r.normal(), u = r.uniform();
            cplx y;
            double u_old, u_new;
            if (contour) {
                const double a = st.angles[j] + st.step_scale * g1;
                y = cmap->map.xi(std::polar(1.0, a));
                u_old = one_body(m, cplx(st.angles[j]));
                u_new = one_body(m, cplx(a));
                const double d = delta_with(m, st.positions, j, y, u_old, u_new);
                if (std::isnan(d)) throw OverflowError("run_chain: energy change is not a number");
                const bool acc = u < std::exp(-m.beta * d);
                if (acc) {
                    st.angles[j] = std::remainder(a, 2.0 * kPi);
                    st.positions[j] = y;
                    st.running_energy += d;
                }
                (measuring ? st.accepted : window_acc) += acc;
                (measuring ? st.proposed : window_prop) += 1;
                continue;
            }
            y = real_line ? cplx(st.positions[j].real() + st.step_scale * g1, 0.0)
                          : st.positions[j] + st.step_scale * cplx(g1, g2);
            u_old = one_body(m, st.positions[j]);
            u_new = one_body(m, y);
            const double d = delta_with(m, st.positions, j, y, u_old, u_new);
            if (std::isnan(d)) throw OverflowError("run_chain: energy change is not a number");
            const bool acc = u < std::exp(-m.beta * d);
            if (acc) {
                st.positions[j] = y;
                st.running_energy += d;
            }
            (measuring ? st.accepted : window_acc) += acc;
            (measuring ? st.proposed : window_prop) += 1;
        }
        if (!std::isfinite(st.running_energy)) throw OverflowError("run_chain: running energy is not finite");
        st.sweep_count = sweep + 1;

        if (!measuring) {
            if ((sweep + 1) % 10 == 0 && window_prop > 0) {
                const double a = static_cast<double>(window_acc) / static_cast<double>(window_prop);
                st.step_scale *= std::exp(std::clamp(2.0 * (a - opt.target_acceptance), -0.7, 0.7));
                window_acc = window_prop = 0;
            }
            continue;
        }
        if (sink) sink(sweep, st.positions);
        if (opt.keep_every > 0 && (sweep - burn) % opt.keep_every == 0) {
            out.samples.data.insert(out.samples.data.end(), st.positions.begin(), st.positions.end());
            out.samples.sweeps.push_back(sweep);
        }
    }
    st.acceptance_rate = st.proposed > 0 ? static_cast<double>(st.accepted) / static_cast<double>(st.proposed) : 0.0;
    return out;
}

DensityEstimate empirical_density(const Samples& s, const GridSpec& grid) {
    const std::size_t nc = s.configs();
    if (nc < 1000) throw DomainError("empirical_density: need at least 1000 retained configurations");
    if (grid.bins < 1) throw DomainError("empirical_density: need at least one bin");
    DensityEstimate out;
    out.configs = nc;
    const bool radial = grid.kind == GridKind::radial;

    std::vector<double> mags;
    mags.reserve(s.data.size());
    double m2 = 0.0, mx = 0.0, my = 0.0;
    for (const auto& z : s.data) {
        mags.push_back(radial ? std::abs(z) : std::abs(z.real()));
        m2 += std::norm(z);
        mx += z.real() * z.real();
        my += z.imag() * z.imag();
    }
    const double count = static_cast<double>(s.data.size());
    m2 /= count;
    mx /= count;
    my /= count;
    out.edge_moment = radial ? std::sqrt(2.0 * m2) : std::sqrt(3.0 * mx);
    out.semi_axis_x = 2.0 * std::sqrt(mx);
    out.semi_axis_y = 2.0 * std::sqrt(my);

    auto q = mags;
    const auto qi = static_cast<std::size_t>(0.995 * static_cast<double>(q.size() - 1));
    std::nth_element(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(qi), q.end());
    out.edge_quantile = q[qi];

    const double lo = radial ? std::max(0.0, grid.lo) : grid.lo;
    double hi = grid.hi;
    if (hi <= 0.0) hi = *std::max_element(mags.begin(), mags.end()) * (1.0 + 1e-12);
    // an unspecified linear range is symmetric about the origin
    const double lo_eff = radial ? lo : (grid.hi <= 0.0 && grid.lo == 0.0 ? -hi : lo);
    if (!(hi > lo_eff)) throw DomainError("empirical_density: empty grid range");
    out.edges.resize(grid.bins + 1);
    for (int b = 0; b <= grid.bins; ++b) out.edges[b] = lo_eff + (hi - lo_eff) * b / grid.bins;
    std::vector<double> counts(grid.bins, 0.0);
    for (const auto& z : s.data) {
        const double v = radial ? std::abs(z) : z.real();
        if (v < lo_eff || v >= hi) continue;
        const int b = std::min(grid.bins - 1, static_cast<int>((v - lo_eff) / (hi - lo_eff) * grid.bins));
        counts[b] += 1.0;
    }
    out.density.resize(grid.bins);
    for (int b = 0; b < grid.bins; ++b) {
        const double r0 = out.edges[b], r1 = out.edges[b + 1];
        const double measure = radial ? kPi * (r1 * r1 - r0 * r0) : (r1 - r0);
        out.density[b] = counts[b] / (static_cast<double>(nc) * measure);
    }
    return out;
}

double density_in_disk(const Samples& s, double r) {
    if (s.configs() == 0) throw DomainError("density_in_disk: no samples");
    if (!(r > 0.0)) throw DomainError("density_in_disk: radius must be positive");
    double inside = 0.0;
    for (const auto& z : s.data) inside += std::abs(z) < r;
    return inside / (static_cast<double>(s.configs()) * kPi * r * r);
}

double LogPartition::over_factorial(int N) const {
    return includes_factorial ? value - specfun::log_gamma(N + 1.0) : value;
}

LogPartition exact_log_partition(const GasModel& m) {
    validate(m);
    require_beta2(m);
    const int N = m.N;
    const double dN = N;
    auto barnes = [&] {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += specfun::log_gamma(j + 1.0);
        return s;
    };
    return std::visit(
        overloaded{
            [&](const Ginibre&) { return LogPartition{dN * std::log(kPi) + barnes(), false}; },
            [&](const Elliptic& e) {
                return LogPartition{dN * std::log(kPi) + 0.5 * dN * std::log1p(-e.tau * e.tau) + barnes(), false};
            },
            [&](const Induced& i) {
                double s = specfun::log_gamma(dN + 1.0) + dN * std::log(kPi);
                for (int j = 1; j <= N; ++j) s += specfun::log_gamma(i.alpha * dN + j);
                return LogPartition{s, true};
            },
            [&](const Contour& c) {
                for (const auto& a : c.map.coeffs())
                    if (a != cplx(0.0)) throw UnsupportedError("exact contour partition is available for circles only");
                const double R = c.map.scale();
                return LogPartition{dN * std::log(2.0 * kPi * R) + specfun::log_gamma(dN + 1.0) + dN * (dN - 1.0) * std::log(R),
                                    true};
            },
            [&](const Sinh& s) {
                const double g = 2.0 * kPi * kPi / (s.c * s.L * s.L);
                double v = 0.5 * dN * std::log(kPi / s.c) + specfun::log_gamma(dN + 1.0) + g * dN * (dN * dN - 1.0) / 6.0;
                for (int j = 1; j < N; ++j) v += (N - j) * std::log1p(-std::exp(-g * j));
                return LogPartition{v, true};
            },
        },
        m.ensemble);
}

double AsymptoticPrediction::evaluate(double N) const {
    const double l = std::log(N);
    return n3 * N * N * N + n2logn * N * N * l + n2 * N * N + nlogn * N * l;
}

AsymptoticPrediction free_energy_prediction(const GasModel& m) {
    validate(m);
    AsymptoticPrediction p;
    const double beta = m.beta;
    if (const auto* c = std::get_if<Contour>(&m.ensemble)) {
        const double robin = -std::log(c->map.scale());
        // no N^2 ln N term: the circle integral is exactly N ln(2 pi) at beta = 2
        p.n2logn = 0.0;
        p.n2 = -0.5 * beta * robin;
        p.nlogn = 0.5 * beta - 1.0;
        p.target = "log Z/N!";
        return p;
    }
    if (const auto* s = std::get_if<Sinh>(&m.ensemble)) {
        // background energy scales as N^3, times the effective coupling beta pi / L
        p.n3 = beta * kPi / s->L * background_constant(m, 1.0);
        p.nlogn = 1.0;
        p.target = "log Z";
        return p;
    }
    // N C0 + U_bb = N^2 (a ln N + b) for the planar ensembles
    const double e1 = background_constant(m, 1.0);
    const double ee = background_constant(m, std::numbers::e);
    p.n2 = beta * e1;
    p.n2logn = beta * (ee / (std::numbers::e * std::numbers::e) - e1);
    p.target = "log Z/N!";
    return p;
}

double free_energy_remainder(const GasModel& m) {
    const auto exact = exact_log_partition(m);
    const auto pred = free_energy_prediction(m);
    const double lhs = pred.target == "log Z" ? exact.value : exact.over_factorial(m.N);
    const double N = m.N;
    return (lhs - pred.evaluate(N)) / (N * N);
}

double walker_prefactor_exponent(int N, double a, double D, double t) {
    if (N < 1 || !(D > 0.0) || !(t > 0.0)) throw DomainError("walker prefactor needs N >= 1, D > 0, t > 0");
    double s = 0.0;
    const double h = 0.5 * (N - 1);
    for (int j = 1; j <= N; ++j) s += h * h - (j - 1.0) * (j - 1.0);
    return a * a * s / (2.0 * D * t);
}

WalkerCancellation walker_leading_cancellation(double a, double D, double t) {
    if (!(a > 0.0) || !(D > 0.0) || !(t > 0.0)) throw DomainError("walker cancellation needs a, D, t > 0");
    WalkerCancellation w;
    // exponent is a cubic in N; its leading coefficient from three exact evaluations
    const double f1 = walker_prefactor_exponent(1, a, D, t), f2 = walker_prefactor_exponent(2, a, D, t);
    const double f3 = walker_prefactor_exponent(3, a, D, t), f4 = walker_prefactor_exponent(4, a, D, t);
    w.prefactor_n3 = (f4 - 3.0 * f3 + 3.0 * f2 - f1) / 6.0;
    const GasModel walkers{1.0, 1, Sinh{1.0 / (D * t), 2.0 * kPi * D * t / a}};
    w.integral_n3 = free_energy_prediction(walkers).n3;
    return w;
}

CovarianceEstimate statistic_covariance(const GasModel& m, const std::function<double(cplx)>& f,
                                        const std::function<double(cplx)>& g, int chains, std::int64_t sweeps,
                                        std::uint64_t seed) {
    if (chains < 4) throw DomainError("statistic_covariance: need at least 4 chains");
    std::vector<double> per_chain;
    for (int c = 0; c < chains; ++c) {
        std::vector<double> sf, sg;
        ChainOptions opt;
        opt.keep_every = 0;
        opt.chain_id = static_cast<std::uint64_t>(c);
        run_chain(m, sweeps, seed, opt, [&](std::int64_t, std::span<const cplx> z) {
            double a = 0.0, b = 0.0;
            for (const auto& p : z) {
                a += f(p);
                b += g(p);
            }
            sf.push_back(a);
            sg.push_back(b);
        });
        per_chain.push_back(sample_cov(sf, sg));
    }
    CovarianceEstimate out;
    out.chains = chains;
    double mean = 0.0;
    for (double v : per_chain) mean += v;
    mean /= chains;
    double var = 0.0;
    for (double v : per_chain) var += (v - mean) * (v - mean);
    var /= (chains - 1);
    out.value = mean;
    out.stderr_ = std::sqrt(var / chains);
    return out;
}

} // namespace coulomb::gas
