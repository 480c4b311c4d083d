#pragma once

#include "coulomb/errors.hpp"

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace coulomb::conformal {

using cplx = std::complex<double>;

/// Exterior map xi(w) = scale * w + a_0 + a_{-1} / w + a_{-2} / w^2 + ...
/// from |w| > 1 onto the exterior of a compact set. coeffs[k] multiplies w^{-k}.
/// Construction checks univalence numerically and throws DomainError on failure.
class LaurentMap {
public:
    LaurentMap(double scale, std::vector<cplx> coeffs);

    static LaurentMap identity() { return LaurentMap(1.0, {}); }
    /// z = (w + 1/w) / 2, exterior of [-1, 1].
    static LaurentMap interval() { return LaurentMap(0.5, {0.0, 0.5}); }
    /// z = (R/2)(w + c^2 / w): ellipse with semi-axes R(1 + c^2)/2 and R(1 - c^2)/2.
    static LaurentMap joukowski(double R, double c);
    /// Ellipse with semi-axes a >= b > 0 centred at the origin.
    static LaurentMap ellipse(double a, double b);

    double scale() const { return scale_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    cplx xi(cplx w) const;
    cplx dxi(cplx w) const;
    /// Inverse map onto |w| >= 1. Throws DomainError for interior points.
    cplx zeta(cplx z) const;
    /// Preimage without the exterior requirement (may have |w| < 1).
    cplx preimage(cplx z) const;

private:
    double scale_;
    std::vector<cplx> coeffs_;
};

struct GreenInfinity {
    double g = 0.0;        // ln |zeta(z)| >= 0
    double capacity = 0.0; // = scale
    double robin = 0.0;    // -ln capacity
};

GreenInfinity green_infinity(const LaurentMap& map, cplx z);

/// Equilibrium density per unit arc length at a boundary point, |zeta'(z)| / 2 pi.
double surface_density(const LaurentMap& map, cplx z);

struct DiskGeometry { double R = 1.0; };
struct HalfPlane {};
struct Mapped { LaurentMap map; };

/// Dirichlet Green functions with -ln|z - w| singularity.
double green_two_point(const DiskGeometry& g, cplx z, cplx w);
double green_two_point(const HalfPlane& g, cplx z, cplx w);
double green_two_point(const Mapped& g, cplx z, cplx w);

using Vec3 = std::array<double, 3>;
struct Sphere3 { double R = 1.0; };
struct HalfSpace3 {};

/// Image-charge Green functions in R^3 outside a grounded sphere, or above
/// the grounded half space z < 0.
double green3d(const Sphere3& g, const Vec3& r, const Vec3& rp);
double green3d(const HalfSpace3& g, const Vec3& r, const Vec3& rp);

/// Droplet for the potential |z|^2 + 2 alpha Re z^2 with given area:
/// scale a_1 = sqrt(area / (pi (1 - 4 alpha^2))), a_0 = 0, a_{-1} = -2 alpha a_1.
LaurentMap quadratic_droplet(double alpha, double area);

struct DropletRadii {
    double inner = 0.0;
    double outer = 0.0;
};

/// Inner and outer radii of the radial droplet: r q'(r) = 0 and r q'(r) = 2,
/// searched by bisection on [lo, hi].
DropletRadii droplet_radii(const std::function<double(double)>& q, const std::function<double(double)>& dq,
                           double lo = 0.0, double hi = 10.0);

} // namespace coulomb::conformal
