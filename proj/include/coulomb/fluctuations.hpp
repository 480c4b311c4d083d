#pragma once

#include "coulomb/conformal.hpp"
#include "coulomb/errors.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace coulomb::fluct {

using conformal::cplx;

/// Grid size used for Fourier coefficients of circle statistics.
inline constexpr int kFourierGrid = 4096;

/// A real function on the unit circle (as a function of the angle), with
/// optional cached Fourier coefficients f_n = (1/2 pi) int f e^{-i n theta}, n = 0..n_max.
struct LinearStatistic {
    std::function<double(double)> f;
    std::optional<std::vector<cplx>> fourier;

    /// Attach coefficients computed on the kFourierGrid-point grid.
    static LinearStatistic with_fourier(std::function<double(double)> f, int n_max);
    /// Max |f - sum f_n e^{i n theta}| on a 512-point grid (needs coefficients).
    double reconstruction_error() const;
};

/// Coefficients f_0..f_{n_max} from an FFT on kFourierGrid points.
std::vector<cplx> fourier_coefficients(const std::function<double(double)>& f, int n_max);

/// Circular unitary ensemble kernel, N / 2 pi on the diagonal.
double cue_kernel(int N, double theta, double theta_p);

/// (1/pi) sum_{j=1}^N j (z conj(z'))^{j-1}.
cplx subblock_kernel(int N, cplx z, cplx zp);

/// int_0^1 r dr int_0^1 r' dr' |K_N(r e^{i theta}, r' e^{i theta'})|^2 with the
/// radial integrals done term by term.
double subblock_kernel_smoothed(int N, double theta, double theta_p);

enum class CovRoute { quadrature, fourier };

struct QuadratureOptions {
    int nodes = 512; // per dimension for the periodic double integral
};

/// Limiting covariance of linear statistics on the circle, scaled by 2 / beta.
double covariance_circle(const LinearStatistic& f, const LinearStatistic& g, double beta, CovRoute route,
                         QuadratureOptions opt = {});

enum class Convention { contour, background, interval };

/// Double contour integral over |u| = |v| = 1 of
/// (f(xi(u)) - f(xi(v))) (g(conj xi(u)) - g(conj xi(v))) / |u - v|^2, over 4 pi^2,
/// scaled by 2/beta (contour), 1/beta (background) or 4/beta (interval).
double covariance_mapped(const conformal::LaurentMap& map, const std::function<double(cplx)>& f,
                         const std::function<double(cplx)>& g, double beta, Convention conv,
                         QuadratureOptions opt = {});

/// Bulk term (1 / 2 pi beta) int_{|z|<R} grad f . grad g of a background plasma on a disk.
double bulk_covariance_disk(double R, const std::function<double(cplx)>& f, const std::function<double(cplx)>& g,
                            double beta);

struct DiskBoundary { double R = 1.0; };
struct HalfPlaneBoundary {};
struct EllipseBoundary { double a1 = 2.0; double a2 = 1.0; };
struct HalfSpaceBoundary {};
/// Boundary of a mapped domain; uses the exterior Szego-kernel prediction.
struct MappedBoundary { conformal::LaurentMap map; };

using BoundaryGeometry = std::variant<DiskBoundary, HalfPlaneBoundary, EllipseBoundary, HalfSpaceBoundary, MappedBoundary>;

/// A boundary point: an angle (disk, ellipse, mapped), a coordinate x (half
/// plane) or a pair (x, y) (half space).
struct BoundaryPoint {
    double a = 0.0;
    double b = 0.0;
};

struct SurfaceCorrelation {
    double value = 0.0;
    bool conjectural = false;
};

/// Limiting smoothed truncated surface correlation.
SurfaceCorrelation surface_correlation(const BoundaryGeometry& geom, double beta, BoundaryPoint p1, BoundaryPoint p2);

/// Linear-response route for the disk: -(1 / beta (2 pi)^2) d^2 G / dr1 dr2 at
/// r1 = r2 = R by central differences of the image-charge Green function.
double disk_surface_correlation_fd(double R, double beta, double theta1, double theta2, double h = 1e-4);

/// Difference between the mapped (exterior Szego) prediction and the ellipse
/// formula at the same boundary angles. Reported, not adjudicated.
double ellipse_prediction_difference(double a1, double a2, double beta, double eta1, double eta2);

} // namespace coulomb::fluct
