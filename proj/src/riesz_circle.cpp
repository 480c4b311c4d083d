#include "coulomb/riesz_circle.hpp"
#include "coulomb/specfun.hpp"

#include <cmath>
#include <numbers>

namespace coulomb::riesz {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier compensated accumulator
struct Compensated {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            c += (sum - t) + v;
        else
            c += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

double sgn(double s) { return (s > 0) - (s < 0); }

} // namespace

double RieszCircle::rho_b() const { return N / (2.0 * kPi * R); }

void RieszCircle::validate() const {
    if (!(s > -2.0 && s < 1.0)) throw DomainError("riesz: exponent s must lie in (-2, 1)");
    if (N < 1) throw DomainError("riesz: N must be positive");
    if (!(R > 0.0)) throw DomainError("riesz: radius must be positive");
}

double riesz_kernel(double s, double r) {
    if (r <= 0.0) throw SingularityError("riesz kernel evaluated at zero distance");
    if (s == 0.0) return -std::log(r);
    const double p = std::pow(r, -s);
    return s > 0 ? p : -p;
}

double background_potential(const RieszCircle& gas) {
    gas.validate();
    if (gas.s == 0.0) return gas.N * std::log(gas.R);
    using specfun::log_gamma;
    const double ratio = std::exp(log_gamma(1.0 - gas.s) - 2.0 * log_gamma(1.0 - 0.5 * gas.s));
    return sgn(gas.s) * gas.N * std::pow(gas.R, -gas.s) * ratio;
}

double physical_background_potential(const RieszCircle& gas) {
    const double v0 = background_potential(gas);
    return gas.s == 0.0 ? v0 : -v0;
}

StaticEnergy static_energy(const RieszCircle& gas) {
    gas.validate();
    const int N = gas.N;
    // by rotation invariance every particle sees the same N-1 chords
    Compensated row;
    for (int k = 1; k < N; ++k) row.add(riesz_kernel(gas.s, 2.0 * gas.R * std::sin(kPi * k / N)));
    const double u_pp = 0.5 * N * row.value();
    StaticEnergy out;
    out.exact = u_pp + 0.5 * N * physical_background_potential(gas);
    if (gas.s == 0.0)
        out.asymptotic = -0.5 * N * std::log(2.0 * kPi * gas.rho_b());
    else
        out.asymptotic = N * sgn(gas.s) * std::pow(gas.rho_b(), gas.s) * specfun::riemann_zeta(gas.s);
    return out;
}

double point_energy(const RieszCircle& gas, double x, PointMode mode) {
    gas.validate();
    if (mode == PointMode::limit) {
        const double xt = x - std::floor(x);
        if (xt == 0.0) throw SingularityError("riesz point energy: x is a lattice site");
        if (gas.s == 0.0) return -std::log(std::abs(2.0 * std::sin(kPi * xt))); // |e^{2 pi i x} - 1|
        return specfun::hurwitz_zeta(gas.s, xt) + specfun::hurwitz_zeta(gas.s, 1.0 - xt);
    }
    if (x == std::floor(x)) throw SingularityError("riesz point energy: test charge on a particle");
    const int N = gas.N;
    const double phi = 2.0 * kPi * x / N;
    Compensated acc;
    for (int j = 0; j < N; ++j) {
        // chord between angles 2 pi j / N and phi
        const double half = 0.5 * (2.0 * kPi * j / N - phi);
        const double d = 2.0 * gas.R * std::abs(std::sin(half));
        if (d == 0.0) throw SingularityError("riesz point energy: test charge on a particle");
        acc.add(riesz_kernel(gas.s, d));
    }
    acc.add(physical_background_potential(gas));
    return acc.value();
}

} // namespace coulomb::riesz
