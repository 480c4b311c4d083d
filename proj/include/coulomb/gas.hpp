#pragma once

#include "coulomb/conformal.hpp"
#include "coulomb/errors.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace coulomb::gas {

using cplx = std::complex<double>;

/// Weight e^{-|z|^2} per particle at beta = 2.
struct Ginibre {};
/// Weight exp(-(|z|^2 - tau Re z^2) / (1 - tau^2)) per particle at beta = 2.
struct Elliptic { double tau = 0.5; };
/// Ginibre times |z|^{2 alpha N}, i.e. n = (1 + alpha) N.
struct Induced { double alpha = 1.0; };
/// Particles confined to the image of the unit circle, arc-length measure, no background.
struct Contour { conformal::LaurentMap map = conformal::LaurentMap::identity(); };
/// Real particles, weight e^{-beta c x^2 / 2} and |2 sinh(pi (x_k - x_j) / L)|^beta.
struct Sinh { double c = 1.0; double L = 2.0 * 3.14159265358979323846; };

using Ensemble = std::variant<Ginibre, Elliptic, Induced, Contour, Sinh>;

struct GasModel {
    double beta = 2.0;
    int N = 1;
    Ensemble ensemble = Ginibre{};
};

std::string ensemble_name(const Ensemble& e);
void validate(const GasModel& m);
/// True for ensembles whose particles live on the real line.
bool is_real_line(const GasModel& m);

/// Total energy U with weight e^{-beta U}. Positions are complex; real-line
/// ensembles use the real part, contour positions must lie on the curve.
double energy(const GasModel& m, std::span<const cplx> z);

struct ChainOptions {
    double burn_in_fraction = 0.2;
    double target_acceptance = 0.35;
    double initial_step = 0.0; // 0 picks a model default
    /// Keep every k-th configuration after burn-in in the returned samples (0 keeps none).
    int keep_every = 1;
    std::uint64_t chain_id = 0; // RNG stream
};

struct ChainState {
    std::vector<cplx> positions;
    /// Angles on the unit circle for the contour ensemble, empty otherwise.
    std::vector<double> angles;
    double step_scale = 0.0;
    std::uint64_t rng_seed = 0;
    std::int64_t sweep_count = 0;
    std::int64_t accepted = 0;
    std::int64_t proposed = 0;
    double acceptance_rate = 0.0; // measurement phase, accepted / proposed
    double running_energy = 0.0;
};

/// Retained configurations, configs x N, row-major.
struct Samples {
    int N = 0;
    std::vector<cplx> data;
    std::vector<std::int64_t> sweeps;

    std::size_t configs() const { return N == 0 ? 0 : data.size() / static_cast<std::size_t>(N); }
    std::span<const cplx> config(std::size_t k) const { return {data.data() + k * N, static_cast<std::size_t>(N)}; }
};

using SampleSink = std::function<void(std::int64_t sweep, std::span<const cplx> positions)>;

struct ChainResult {
    ChainState state;
    Samples samples;
};

/// Single-particle Metropolis chain. Step size adapts toward the target
/// acceptance during burn-in and is then frozen. Each retained configuration
/// (one per sweep after burn-in) goes to the sink if given.
ChainResult run_chain(const GasModel& m, std::int64_t sweeps, std::uint64_t seed, ChainOptions opt = {},
                      const SampleSink& sink = {});

/// Metropolis acceptance probability for moving particle j of state z to y.
double acceptance_probability(const GasModel& m, std::span<const cplx> z, int j, cplx y);

/// Energy change of moving particle j to y, computed in O(N).
double delta_energy(const GasModel& m, std::span<const cplx> z, int j, cplx y);

enum class GridKind { radial, linear };

struct GridSpec {
    GridKind kind = GridKind::radial;
    int bins = 40;
    double lo = 0.0;
    double hi = 0.0; // 0 picks the maximum observed value
};

struct DensityEstimate {
    std::vector<double> edges;
    std::vector<double> density; // particles per unit area (radial) or length (linear)
    /// 99.5% quantile of |z| (radial) or |x| (linear).
    double edge_quantile = 0.0;
    /// Edge of the uniform disk with the same second moment, sqrt(2 <|z|^2>).
    double edge_moment = 0.0;
    /// Semi-axes of the uniform ellipse with the same second moments, 2 sqrt(<x^2>), 2 sqrt(<y^2>).
    double semi_axis_x = 0.0;
    double semi_axis_y = 0.0;
    std::size_t configs = 0;
};

/// Histogram of retained configurations. Needs at least 1000 configurations.
DensityEstimate empirical_density(const Samples& s, const GridSpec& grid);

/// Mean particle density in the disk |z| < r.
double density_in_disk(const Samples& s, double r);

struct LogPartition {
    double value = 0.0;
    /// Whether the tabulated constant counts ordered configurations (contains N!).
    bool includes_factorial = false;

    /// ln(Z_N / N!) with Z_N the integral over all of space.
    double over_factorial(int N) const;
};

/// Log of the exact normalisation product at beta = 2.
LogPartition exact_log_partition(const GasModel& m);

/// Coefficients of a large-N expansion n3 N^3 + n2logn N^2 ln N + n2 N^2 + nlogn N ln N.
struct AsymptoticPrediction {
    double n3 = 0.0;
    double n2logn = 0.0;
    double n2 = 0.0;
    double nlogn = 0.0;
    /// "log Z/N!" or "log Z" depending on the tabulated quantity.
    std::string target;

    double evaluate(double N) const;
};

AsymptoticPrediction free_energy_prediction(const GasModel& m);

/// (exact - prediction) / N^2 at beta = 2, comparing like quantities.
double free_energy_remainder(const GasModel& m);

/// Brownian walkers started at spacing a with diffusion D over time t: the N^3
/// coefficient of the walker prefactor exponent and of the matching sinh
/// configuration integral at beta = 1. They cancel.
struct WalkerCancellation {
    double prefactor_n3 = 0.0;
    double integral_n3 = 0.0;
};
WalkerCancellation walker_leading_cancellation(double a, double D, double t);

/// Exponent of the walker prefactor, a^2 sum_j (((N-1)/2)^2 - (j-1)^2) / (2 D t).
double walker_prefactor_exponent(int N, double a, double D, double t);

struct CovarianceEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int chains = 0;
};

/// Across-chain covariance of sum f(z_j) and sum g(z_j), chains >= 4.
CovarianceEstimate statistic_covariance(const GasModel& m, const std::function<double(cplx)>& f,
                                        const std::function<double(cplx)>& g, int chains, std::int64_t sweeps,
                                        std::uint64_t seed);

} // namespace coulomb::gas
