#include "coulomb/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace coulomb::conformal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kUnivalenceGrid = 720;

double orient(cplx a, cplx b, cplx c) { return std::imag(std::conj(b - a) * (c - a)); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Closed curve xi(rho e^{it}) must be simple; checked just outside the unit
// circle so that slit images (the interval) count as univalent.
void check_univalent(const LaurentMap& m) {
    for (double rho : {1.0 + 1e-4, 1.05, 1.5}) {
        std::vector<cplx> pts(kUnivalenceGrid);
        for (int i = 0; i < kUnivalenceGrid; ++i)
            pts[i] = m.xi(std::polar(rho, 2.0 * kPi * i / kUnivalenceGrid));
        // a simple curve traversed clockwise means the map folds over between
        // these radii and the unit circle
        double area = 0.0;
        for (int i = 0; i < kUnivalenceGrid; ++i) area += std::imag(std::conj(pts[i]) * pts[(i + 1) % kUnivalenceGrid]);
        if (!(area > 0.0)) throw DomainError("LaurentMap: boundary image is not positively oriented, map is not univalent");
        for (int i = 0; i < kUnivalenceGrid; ++i) {
            if (std::abs(m.dxi(std::polar(rho, 2.0 * kPi * i / kUnivalenceGrid))) == 0.0)
                throw DomainError("LaurentMap: derivative vanishes outside the unit circle");
            const cplx a = pts[i], b = pts[(i + 1) % kUnivalenceGrid];
            for (int j = i + 2; j < kUnivalenceGrid; ++j) {
                if (i == 0 && j == kUnivalenceGrid - 1) continue;
                if (segments_cross(a, b, pts[j], pts[(j + 1) % kUnivalenceGrid]))
                    throw DomainError("LaurentMap: boundary image self-intersects, map is not univalent");
            }
        }
    }
}

void require_exterior_disk(double R, cplx z, const char* who) {
    if (std::abs(z) < R * (1.0 - 1e-12)) throw DomainError(std::string(who) + ": point lies inside the disk");
}

} // namespace

LaurentMap::LaurentMap(double scale, std::vector<cplx> coeffs) : scale_(scale), coeffs_(std::move(coeffs)) {
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("LaurentMap: scale must be positive");
    for (const auto& c : coeffs_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw DomainError("LaurentMap: coefficients must be finite");
    check_univalent(*this);
}

LaurentMap LaurentMap::joukowski(double R, double c) {
    if (!(R > 0.0) || c < 0.0 || c > 1.0) throw DomainError("joukowski map needs R > 0 and 0 <= c <= 1");
    return LaurentMap(0.5 * R, {0.0, 0.5 * R * c * c});
}

LaurentMap LaurentMap::ellipse(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("ellipse axes must be positive");
    // xi(w) = ((a + b) / 2) w + ((a - b) / 2) / w
    return LaurentMap(0.5 * (a + b), {0.0, 0.5 * (a - b)});
}

cplx LaurentMap::xi(cplx w) const {
    cplx acc = 0.0, inv = 1.0 / w, p = 1.0;
    for (const auto& c : coeffs_) {
        acc += c * p;
        p *= inv;
    }
    return scale_ * w + acc;
}

cplx LaurentMap::dxi(cplx w) const {
    cplx acc = scale_;
    const cplx inv = 1.0 / w;
    cplx p = inv * inv;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        acc -= static_cast<double>(k) * coeffs_[k] * p;
        p *= inv;
    }
    return acc;
}

cplx LaurentMap::preimage(cplx z) const {
    if (coeffs_.size() <= 2) {
        // scale w^2 - (z - a0) w + a1 = 0 in closed form; Newton stalls at the double root of a slit end
        const cplx a0 = coeffs_.empty() ? cplx(0.0) : coeffs_[0];
        const cplx a1 = coeffs_.size() < 2 ? cplx(0.0) : coeffs_[1];
        const cplx b = z - a0, root = std::sqrt(b * b - 4.0 * scale_ * a1);
        const cplx q = std::abs(b + root) >= std::abs(b - root) ? b + root : b - root;
        if (q != 0.0) return 0.5 * q / scale_;
    }
    const double tol = 1e-13 * (1.0 + std::abs(z));
    auto newton = [&](cplx w, cplx& out) {
        for (int it = 0; it < 50; ++it) {
            const cplx r = xi(w) - z;
            if (std::abs(r) <= tol) {
                // polish: the residual test is loose where xi' is small
                double last = 1e-3 * (1.0 + std::abs(w));
                for (int k = 0; k < 60; ++k) {
                    const cplx dd = dxi(w);
                    if (std::abs(dd) == 0.0) break;
                    const cplx st = (xi(w) - z) / dd;
                    if (!(std::abs(st) < last)) break;
                    w -= st;
                    last = std::abs(st);
                }
                out = w;
                return true;
            }
            const cplx d = dxi(w);
            if (std::abs(d) == 0.0) return false;
            cplx step = r / d;
            // damp steps that would jump across the origin
            while (std::abs(step) > 0.5 * std::abs(w) + 1.0) step *= 0.5;
            w -= step;
        }
        out = w;
        return std::abs(xi(w) - z) <= 1e3 * tol;
    };
    const cplx a0 = coeffs_.empty() ? cplx(0.0) : coeffs_[0];
    cplx w0 = (z - a0) / scale_;
    if (std::abs(w0) < 1.0) w0 = std::abs(w0) > 0 ? w0 / std::abs(w0) * 1.5 : cplx(1.5, 0.0);
    cplx best{};
    bool found = false;
    if (newton(w0, best)) {
        if (std::abs(best) >= 1.0 - 1e-12) return best;
        found = true;
    }
    // wrong branch or no convergence: restart from a ring of seeds outside the disk
    for (double rho : {1.0 + 1e-3, 1.2, 2.0, 4.0}) {
        for (int k = 0; k < 16; ++k) {
            cplx w;
            if (newton(std::polar(rho * std::max(1.0, std::abs(w0)), 2.0 * kPi * (k + 0.5) / 16), w)) {
                if (std::abs(w) >= 1.0 - 1e-12) return w;
                if (!found) {
                    best = w;
                    found = true;
                }
            }
        }
    }
    if (!found) throw BudgetError("LaurentMap: inversion did not converge", std::abs(best), 0.0);
    return best;
}

cplx LaurentMap::zeta(cplx z) const {
    const cplx w = preimage(z);
    if (std::abs(w) < 1.0 - 1e-12) throw DomainError("LaurentMap: point is not exterior to the set");
    return w;
}

GreenInfinity green_infinity(const LaurentMap& map, cplx z) {
    const cplx w = map.zeta(z);
    GreenInfinity out;
    out.g = std::max(0.0, std::log(std::abs(w)));
    out.capacity = map.scale();
    out.robin = -std::log(map.scale());
    return out;
}

double surface_density(const LaurentMap& map, cplx z) {
    const cplx w = map.preimage(z);
    if (std::abs(std::abs(w) - 1.0) > 1e-8) throw DomainError("surface_density: point is not on the boundary");
    return 1.0 / (2.0 * kPi * std::abs(map.dxi(w)));
}

double green_two_point(const DiskGeometry& g, cplx z, cplx w) {
    if (!(g.R > 0.0)) throw DomainError("disk radius must be positive");
    require_exterior_disk(g.R, z, "green_two_point");
    require_exterior_disk(g.R, w, "green_two_point");
    if (z == w) throw SingularityError("green_two_point: coincident points");
    // the extra factor R makes G vanish on |z| = R for every radius
    return -std::log(std::abs(z - w) / (g.R * std::abs(1.0 - z * std::conj(w) / (g.R * g.R))));
}

double green_two_point(const HalfPlane&, cplx z, cplx w) {
    if (z.imag() < 0.0 || w.imag() < 0.0) throw DomainError("green_two_point: points must lie in the upper half plane");
    if (z == w) throw SingularityError("green_two_point: coincident points");
    return -std::log(std::abs(z - w) / std::abs(z - std::conj(w)));
}

double green_two_point(const Mapped& g, cplx z, cplx w) {
    if (z == w) throw SingularityError("green_two_point: coincident points");
    const cplx u = g.map.zeta(z), v = g.map.zeta(w);
    return -std::log(std::abs(u - v) / std::abs(1.0 - u * std::conj(v)));
}

namespace {

double dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

} // namespace

double green3d(const Sphere3& g, const Vec3& r, const Vec3& rp) {
    if (!(g.R > 0.0)) throw DomainError("sphere radius must be positive");
    const Vec3 o{0, 0, 0};
    const double nr = dist(r, o), nrp = dist(rp, o);
    if (nr < g.R * (1.0 - 1e-12) || nrp < g.R * (1.0 - 1e-12))
        throw DomainError("green3d: points must lie outside the sphere");
    if (r == rp) throw SingularityError("green3d: coincident points");
    const double k = g.R * g.R / (nrp * nrp);
    const Vec3 image{k * rp[0], k * rp[1], k * rp[2]};
    return 1.0 / dist(r, rp) - g.R / (nrp * dist(r, image));
}

double green3d(const HalfSpace3&, const Vec3& r, const Vec3& rp) {
    if (r[2] < 0.0 || rp[2] < 0.0) throw DomainError("green3d: points must satisfy z >= 0");
    if (r == rp) throw SingularityError("green3d: coincident points");
    const Vec3 mirror{rp[0], rp[1], -rp[2]};
    return 1.0 / dist(r, rp) - 1.0 / dist(r, mirror);
}

LaurentMap quadratic_droplet(double alpha, double area) {
    if (!(area > 0.0)) throw DomainError("droplet area must be positive");
    if (!(alpha > -0.5 && alpha <= 0.0)) throw DomainError("quadratic droplet needs alpha in (-1/2, 0]");
    const double a1 = std::sqrt(area / (kPi * (1.0 - 4.0 * alpha * alpha)));
    return LaurentMap(a1, {0.0, -2.0 * alpha * a1});
}

DropletRadii droplet_radii(const std::function<double(double)>& q, const std::function<double(double)>& dq,
                           double lo, double hi) {
    if (!(hi > lo) || lo < 0.0) throw DomainError("droplet_radii: need 0 <= lo < hi");
    auto h = [&](double r) { return r * dq(r); };
    // subharmonic profiles have r q'(r) strictly increasing
    constexpr int samples = 200;
    double prev = h(lo);
    if (!std::isfinite(prev)) throw DomainError("droplet_radii: r q'(r) is not finite at the lower bracket end");
    for (int i = 1; i <= samples; ++i) {
        const double r = lo + (hi - lo) * i / samples;
        const double cur = h(r);
        if (!std::isfinite(cur) || !std::isfinite(q(r))) throw DomainError("droplet_radii: profile is not finite");
        if (cur <= prev) throw DomainError("droplet_radii: r q'(r) is not increasing; profile not subharmonic");
        prev = cur;
    }
    auto solve = [&](double target) {
        double a = lo, b = hi;
        const double fa = h(a) - target, fb = h(b) - target;
        if (fa == 0.0) return a;
        if (fa > 0.0 || fb < 0.0) throw DomainError("droplet_radii: no root on the bracket");
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
            const double m = 0.5 * (a + b);
            (h(m) < target ? a : b) = m;
        }
        return 0.5 * (a + b);
    };
    return {solve(0.0), solve(2.0)};
}

} // namespace coulomb::conformal
