#include "coulomb/cli.hpp"

#include "coulomb/acceptance.hpp"
#include "coulomb/balayage.hpp"
#include "coulomb/conformal.hpp"
#include "coulomb/errors.hpp"
#include "coulomb/fluctuations.hpp"
#include "coulomb/gas.hpp"
#include "coulomb/riesz_circle.hpp"
#include "coulomb/surfaces.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace coulomb::cli {

namespace {

using json = nlohmann::json;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// Malformed command-line value.
class ArgError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Spec {
    std::string name;
    std::map<std::string, std::string> keys;
};

// "name:k=v,k=v" -> name and keys
Spec split_spec(const std::string& text) {
    Spec s;
    const auto colon = text.find(':');
    s.name = text.substr(0, colon);
    if (s.name.empty()) throw ArgError("empty specification");
    if (colon == std::string::npos) return s;
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ArgError("expected key=value in '" + item + "'");
        s.keys[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return s;
}

double to_double(const std::string& v, const std::string& what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw ArgError("");
        return x;
    } catch (const std::exception&) {
        throw ArgError("'" + v + "' is not a number (" + what + ")");
    }
}

std::vector<double> to_list(const std::string& v, char sep, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(to_double(item, what));
    if (out.empty()) throw ArgError("empty list for " + what);
    return out;
}

/// Key lookup that rejects leftovers once every key has been read.
class Keys {
public:
    explicit Keys(Spec s) : spec_(std::move(s)) {}

    double num(const std::string& k, double fallback) { return has(k) ? to_double(take(k), k) : fallback; }
    double num(const std::string& k) {
        if (!has(k)) throw ArgError(spec_.name + " needs " + k + "=");
        return to_double(take(k), k);
    }
    std::vector<double> list(const std::string& k, std::vector<double> fallback) {
        return has(k) ? to_list(take(k), 'x', k) : fallback;
    }
    bool has(const std::string& k) const { return spec_.keys.count(k) > 0; }
    void done() const {
        if (!spec_.keys.empty()) throw ArgError("unknown key '" + spec_.keys.begin()->first + "' for " + spec_.name);
    }
    const std::string& name() const { return spec_.name; }

private:
    std::string take(const std::string& k) {
        auto it = spec_.keys.find(k);
        std::string v = it->second;
        spec_.keys.erase(it);
        return v;
    }
    Spec spec_;
};

template <std::size_t D>
std::array<double, D> fixed(const std::vector<double>& v, const char* what) {
    if (v.size() != D) throw ArgError(std::string(what) + " needs " + std::to_string(D) + " components");
    std::array<double, D> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

cplx to_complex(const std::vector<double>& v, const char* what) {
    if (v.size() != 2) throw ArgError(std::string(what) + " needs two components x,y");
    return {v[0], v[1]};
}

conformal::LaurentMap parse_map(const std::string& text) {
    Keys k(split_spec(text));
    std::optional<conformal::LaurentMap> m;
    if (k.name() == "identity" || k.name() == "disk") {
        m = conformal::LaurentMap(k.num("R", 1.0), {});
    } else if (k.name() == "interval") {
        m = conformal::LaurentMap::interval();
    } else if (k.name() == "ellipse") {
        m = conformal::LaurentMap::ellipse(k.num("a"), k.num("b"));
    } else if (k.name() == "joukowski") {
        m = conformal::LaurentMap::joukowski(k.num("R"), k.num("c"));
    } else if (k.name() == "laurent") {
        const double scale = k.num("scale");
        std::vector<cplx> c;
        for (double x : k.list("coeffs", {})) c.emplace_back(x, 0.0);
        m = conformal::LaurentMap(scale, c);
    } else {
        throw UnsupportedError("unsupported map '" + k.name() + "'");
    }
    k.done();
    return *m;
}

std::function<double(double)> parse_statistic(const std::string& text, json& echo) {
    Keys k(split_spec(text));
    echo = text;
    if (k.name() == "cos" || k.name() == "sin") {
        const double n = k.num("k", 1.0);
        const double a = k.num("a", 1.0);
        k.done();
        if (k.name() == "cos") return [n, a](double t) { return a * std::cos(n * t); };
        return [n, a](double t) { return a * std::sin(n * t); };
    }
    if (k.name() == "expcos") {
        const double s = k.num("t", 1.0);
        k.done();
        return [s](double t) { return std::exp(s * std::cos(t)); };
    }
    throw UnsupportedError("unsupported statistic '" + k.name() + "'");
}

gas::Ensemble parse_ensemble(const std::string& text) {
    Keys k(split_spec(text));
    gas::Ensemble e;
    if (k.name() == "ginibre") {
        e = gas::Ginibre{};
    } else if (k.name() == "elliptic") {
        e = gas::Elliptic{k.num("tau", 0.5)};
    } else if (k.name() == "induced") {
        e = gas::Induced{k.num("alpha", 1.0)};
    } else if (k.name() == "contour") {
        if (k.has("a") || k.has("b"))
            e = gas::Contour{conformal::LaurentMap::ellipse(k.num("a"), k.num("b"))};
        else
            e = gas::Contour{};
    } else if (k.name() == "sinh") {
        e = gas::Sinh{k.num("c", 1.0), k.num("L", 2.0 * kPi)};
    } else {
        throw UnsupportedError("unsupported ensemble '" + k.name() + "'");
    }
    k.done();
    return e;
}

json point_json(const std::vector<double>& p) { return json(p); }

/// Fields filled by a command handler.
struct Outcome {
    json inputs = json::object();
    json value = nullptr;
    json values = json::object();
    std::string method;
    json tolerance = nullptr;
    json provenance = nullptr;
    int exit_code = 0;
    json extra = json::object(); // additional top-level keys
    std::string text;             // replaces the key/value listing when set
};

json base_record(const std::string& command) {
    return json{{"command", command}, {"inputs", json::object()}, {"value", nullptr}, {"values", json::object()},
                {"method", ""},       {"tolerance", nullptr},       {"provenance", nullptr}};
}

void text_lines(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            text_lines(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    std::string v;
    if (j.is_number_float()) {
        v = format_double(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (!v.empty()) v += ' ';
            v += e.is_number_float() ? format_double(e.get<double>()) : (e.is_string() ? e.get<std::string>() : e.dump());
        }
    } else if (j.is_string()) {
        v = j.get<std::string>();
    } else {
        v = j.dump();
    }
    out += prefix + ": " + v + "\n";
}

std::string render_text(const json& rec) {
    std::string out;
    for (const char* key : {"command", "value", "values", "method", "tolerance", "provenance", "error"}) {
        if (!rec.contains(key) || rec[key].is_null()) continue;
        if ((rec[key].is_object() || rec[key].is_string()) && rec[key].empty()) continue;
        text_lines(rec[key], key, out);
    }
    for (auto it = rec.begin(); it != rec.end(); ++it) {
        static const std::vector<std::string> shown{"command", "inputs", "value", "values", "method",
                                                    "tolerance", "provenance", "error", "exit_code"};
        if (std::find(shown.begin(), shown.end(), it.key()) != shown.end()) continue;
        if (rec.contains("values") && rec["values"].contains(it.key())) continue; // already printed
        text_lines(it.value(), it.key(), out);
    }
    return out;
}

// ---------------------------------------------------------------- commands

struct Options {
    std::string config;
    bool json_out = false;
    std::string domain, point, points, axes, method, quantity, identity, geometry, z, w, map, kind, f, g, route,
        surface, p1, p2, suite = "quick", ensemble = "ginibre", out, tail;
    double N = 1.0, Q = 1.0, tol = 1e-10, alpha = 0.0, area = kPi, beta = 2.0, s = 0.0, R = 1.0, rho = 1.0,
           burn_in = 0.2, r = 0.0;
    std::optional<double> x, angle, ginibre_n;
    int d = 3, n = 16, moment = -1, chains = 4, thin = 1, id = 0, id_points = 10;
    std::int64_t sweeps = 10000;
    std::uint64_t seed = 1;
};

Outcome cmd_potential(const Options& o) {
    Outcome r;
    const auto dom = parse_domain(o.domain);
    const auto p = parse_point(o.point);
    r.inputs = {{"domain", o.domain}, {"point", point_json(p)}, {"method", o.method}};
    const std::string m = o.method.empty() ? "closed" : o.method;
    if (m != "closed" && m != "oracle" && m != "both") throw ArgError("--method must be closed, oracle or both");
    if (m != "oracle") {
        r.value = domains::background_potential(dom, p);
        r.values["potential"] = r.value;
        r.method = "closed form";
    }
    if (m != "closed") {
        const auto orc = domains::potential_oracle(dom, p, o.tol);
        r.values["oracle"] = orc.value;
        r.values["oracle_error"] = orc.est_error;
        r.tolerance = o.tol;
        r.provenance = "direct quadrature of the background integral";
        if (m == "oracle") {
            r.value = orc.value;
            r.method = "adaptive quadrature";
        } else {
            r.method = "closed form checked against quadrature";
            r.values["relative_gap"] = std::abs(orc.value - r.value.get<double>()) / std::abs(orc.value);
        }
    }
    return r;
}

Outcome cmd_energy(const Options& o) {
    Outcome r;
    const auto dom = parse_domain(o.domain);
    r.inputs = {{"domain", o.domain}, {"points", o.points}};
    const double self = domains::self_energy(dom);
    r.values["self_energy"] = self;
    r.values["rho_b"] = dom.rho_b();
    r.value = self;
    r.method = "closed form";
    if (!o.points.empty()) {
        std::vector<domains::Point> pts;
        std::stringstream ss(o.points);
        std::string item;
        while (std::getline(ss, item, ';')) pts.push_back(parse_point(item));
        const double e = domains::interaction_energy(dom, pts);
        r.values["interaction_energy"] = e;
        r.value = e;
    }
    return r;
}

Outcome cmd_coeffs(const Options& o) {
    Outcome r;
    const auto axes = to_list(o.axes, 'x', "axes");
    r.inputs = {{"axes", axes}, {"N", o.N}, {"method", o.method}};
    domains::CoeffMethod m = domains::CoeffMethod::automatic;
    if (o.method == "quadrature")
        m = domains::CoeffMethod::quadrature;
    else if (o.method == "carlson")
        m = domains::CoeffMethod::carlson;
    else if (!o.method.empty() && o.method != "auto")
        throw ArgError("--method must be auto, quadrature or carlson");
    const auto c = domains::hyperellipsoid_coefficients(axes, o.N, m);
    double sum = 0.0;
    for (double a : c.alpha) sum += a;
    r.value = c.alpha0;
    r.values = {{"alpha0", c.alpha0}, {"alpha", c.alpha}, {"alpha_sum", sum}};
    r.method = m == domains::CoeffMethod::carlson || (m == domains::CoeffMethod::automatic && axes.size() == 3)
                   ? "Carlson symmetric integrals"
                   : (axes.size() <= 2 ? "closed form" : "Gauss-Kronrod over the confocal parameter");
    return r;
}

Outcome cmd_surface(const Options& o) {
    Outcome r;
    const std::string q = o.quantity.empty() ? "density" : o.quantity;
    r.inputs = {{"axes", o.axes}, {"Q", o.Q}, {"point", o.point}, {"quantity", q}};
    if (q == "identity") {
        static const std::map<std::string, surfaces::IdentityCase> cases{
            {"constant_potential", surfaces::IdentityCase::constant_potential},
            {"riesz_quadratic", surfaces::IdentityCase::riesz_quadratic},
            {"semicircle", surfaces::IdentityCase::semicircle},
            {"thin_slab", surfaces::IdentityCase::thin_slab}};
        const auto it = cases.find(o.identity);
        if (it == cases.end()) throw ArgError("--identity must be constant_potential, riesz_quadratic, semicircle or thin_slab");
        surfaces::IdentityOptions opt;
        opt.d = o.d;
        opt.R = o.R;
        opt.points = o.id_points;
        if (!o.axes.empty()) opt.axes = to_list(o.axes, 'x', "axes");
        const auto rep = surfaces::projection_identities(it->second, opt);
        r.inputs = {{"identity", o.identity}, {"d", o.d}, {"R", o.R}, {"points", o.id_points}};
        r.value = rep.max_residual;
        r.values = {{"max_residual", rep.max_residual}, {"points", rep.points}};
        if (rep.constant) r.values["constant"] = *rep.constant;
        if (rep.gamma) r.values["gamma"] = *rep.gamma;
        r.method = "adaptive quadrature on a point grid";
        return r;
    }
    const auto axes = to_list(o.axes, 'x', "axes");
    const surfaces::SurfaceChargeDensity sd{axes, o.Q};
    if (q == "total") {
        const auto t = sd.total();
        r.value = t.value;
        r.values = {{"total", t.value}, {"error", t.est_error}};
        r.method = "surface quadrature";
        r.provenance = "should equal Q";
        return r;
    }
    const auto p = parse_point(o.point);
    if (q == "density") {
        r.value = sd.density(p);
        r.values["density"] = r.value;
        r.method = "closed form";
    } else if (q == "potential") {
        r.value = surfaces::ellipsoid_surface_potential(axes, o.Q, p);
        r.values["potential"] = r.value;
        r.method = "closed form";
    } else {
        throw ArgError("--quantity must be density, potential, total or identity");
    }
    return r;
}

Outcome cmd_green(const Options& o) {
    Outcome r;
    Keys k(split_spec(o.geometry));
    const auto z = parse_point(o.z), w = parse_point(o.w);
    r.inputs = {{"geometry", o.geometry}, {"z", z}, {"w", w}};
    r.method = "image charges";
    if (k.name() == "disk") {
        const double R = k.num("R", 1.0);
        k.done();
        r.value = conformal::green_two_point(conformal::DiskGeometry{R}, to_complex(z, "--z"), to_complex(w, "--w"));
    } else if (k.name() == "halfplane") {
        k.done();
        r.value = conformal::green_two_point(conformal::HalfPlane{}, to_complex(z, "--z"), to_complex(w, "--w"));
    } else if (k.name() == "sphere") {
        const double R = k.num("R", 1.0);
        k.done();
        r.value = conformal::green3d(conformal::Sphere3{R}, fixed<3>(z, "--z"), fixed<3>(w, "--w"));
    } else if (k.name() == "halfspace") {
        k.done();
        r.value = conformal::green3d(conformal::HalfSpace3{}, fixed<3>(z, "--z"), fixed<3>(w, "--w"));
    } else {
        const conformal::Mapped m{parse_map(o.geometry)};
        r.value = conformal::green_two_point(m, to_complex(z, "--z"), to_complex(w, "--w"));
        r.method = "conformal transport to the disk exterior";
    }
    r.values["green"] = r.value;
    return r;
}

Outcome cmd_capacity(const Options& o) {
    Outcome r;
    const auto m = parse_map(o.map);
    r.inputs = {{"map", o.map}, {"point", o.point}, {"angle", o.angle ? json(*o.angle) : json(nullptr)}};
    const auto gi = conformal::green_infinity(m, m.xi(cplx(2.0, 0.0)));
    r.value = gi.capacity;
    r.values = {{"capacity", gi.capacity}, {"robin", gi.robin}};
    r.method = "leading Laurent coefficient";
    if (!o.point.empty()) r.values["green_infinity"] = conformal::green_infinity(m, to_complex(parse_point(o.point), "--point")).g;
    if (o.angle) {
        const cplx b = m.xi(std::polar(1.0, *o.angle));
        r.values["boundary_point"] = {b.real(), b.imag()};
        r.values["surface_density"] = conformal::surface_density(m, b);
    }
    return r;
}

Outcome cmd_droplet(const Options& o) {
    Outcome r;
    const std::string kind = o.kind.empty() ? "quadratic" : o.kind;
    r.inputs = {{"kind", kind}, {"alpha", o.alpha}, {"area", o.area}};
    if (kind == "quadratic") {
        const auto m = conformal::quadratic_droplet(o.alpha, o.area);
        const double a1 = m.scale(), am1 = m.coeffs().size() > 1 ? m.coeffs()[1].real() : 0.0;
        r.values = {{"scale", a1}, {"a_minus1", am1}, {"semi_axis_x", a1 + am1}, {"semi_axis_y", a1 - am1}};
        r.value = a1;
        r.method = "closed form";
    } else if (kind == "induced") {
        // q(r) = r^2 - 2 alpha ln r
        const double a = o.alpha;
        if (!(a >= 0.0)) throw DomainError("induced droplet needs alpha >= 0");
        const auto rad = conformal::droplet_radii([a](double x) { return x * x - 2.0 * a * std::log(x); },
                                                  [a](double x) { return 2.0 * x - 2.0 * a / x; }, 1e-9,
                                                  2.0 * std::sqrt(1.0 + a) + 1.0);
        r.values = {{"inner", rad.inner}, {"outer", rad.outer}};
        r.value = rad.outer;
        r.method = "bisection on r q'(r)";
        r.tolerance = 1e-15;
    } else {
        throw ArgError("--kind must be quadratic or induced");
    }
    return r;
}

fluct::BoundaryPoint boundary_point(const std::string& text) {
    const auto v = parse_point(text);
    if (v.size() > 2) throw ArgError("boundary points have one or two coordinates");
    return {v[0], v.size() > 1 ? v[1] : 0.0};
}

Outcome cmd_fluct(const Options& o) {
    Outcome r;
    if (!o.surface.empty()) {
        Keys k(split_spec(o.surface));
        fluct::BoundaryGeometry geom = fluct::DiskBoundary{};
        if (k.name() == "disk") {
            geom = fluct::DiskBoundary{k.num("R", 1.0)};
        } else if (k.name() == "halfplane") {
            geom = fluct::HalfPlaneBoundary{};
        } else if (k.name() == "ellipse") {
            geom = fluct::EllipseBoundary{k.num("a1"), k.num("a2")};
        } else if (k.name() == "halfspace") {
            geom = fluct::HalfSpaceBoundary{};
        } else {
            geom = fluct::MappedBoundary{parse_map(o.surface)};
            k = Keys(Spec{k.name(), {}});
        }
        k.done();
        const auto a = boundary_point(o.p1), b = boundary_point(o.p2);
        r.inputs = {{"surface", o.surface}, {"beta", o.beta}, {"p1", o.p1}, {"p2", o.p2}};
        const auto sc = fluct::surface_correlation(geom, o.beta, a, b);
        r.value = sc.value;
        r.values = {{"correlation", sc.value}, {"conjectural", sc.conjectural}};
        r.method = "closed form";
        if (const auto* disk = std::get_if<fluct::DiskBoundary>(&geom)) {
            r.values["finite_difference"] = fluct::disk_surface_correlation_fd(disk->R, o.beta, a.a, b.a);
            r.provenance = "finite differences of the image Green function";
        }
        return r;
    }
    json fe, ge;
    auto f = parse_statistic(o.f, fe);
    auto g = o.g.empty() ? f : parse_statistic(o.g, ge);
    if (o.g.empty()) ge = fe;
    r.inputs = {{"f", fe}, {"g", ge}, {"beta", o.beta}, {"route", o.route.empty() ? "both" : o.route}};
    const auto F = fluct::LinearStatistic::with_fourier(f, 256), G = fluct::LinearStatistic::with_fourier(g, 256);
    const std::string route = o.route.empty() ? "both" : o.route;
    if (route != "quadrature" && route != "fourier" && route != "both")
        throw ArgError("--route must be quadrature, fourier or both");
    if (route != "fourier") r.values["quadrature"] = fluct::covariance_circle(F, G, o.beta, fluct::CovRoute::quadrature);
    if (route != "quadrature") r.values["fourier"] = fluct::covariance_circle(F, G, o.beta, fluct::CovRoute::fourier);
    r.value = route == "fourier" ? r.values["fourier"] : r.values["quadrature"];
    if (route == "both")
        r.values["route_gap"] = std::abs(r.values["fourier"].get<double>() - r.values["quadrature"].get<double>());
    r.method = route == "both" ? "periodic double quadrature and Fourier sum" : route;
    return r;
}

Outcome cmd_riesz(const Options& o) {
    Outcome r;
    const riesz::RieszCircle gas{o.s, o.n, o.R};
    gas.validate();
    r.inputs = {{"s", o.s}, {"N", o.n}, {"R", o.R}, {"x", o.x ? json(*o.x) : json(nullptr)}};
    const auto e = riesz::static_energy(gas);
    r.values["asymptotic"] = e.asymptotic;
    if (e.exact) r.values["exact"] = *e.exact;
    r.values["background_constant"] = riesz::background_potential(gas);
    r.values["background_potential"] = riesz::physical_background_potential(gas);
    r.value = e.exact ? json(*e.exact) : json(e.asymptotic);
    r.method = e.exact ? "lattice sum" : "zeta asymptotic";
    if (o.x) {
        r.values["point_energy"] = riesz::point_energy(gas, *o.x, riesz::PointMode::finite);
        r.values["point_energy_limit"] = riesz::point_energy(gas, *o.x, riesz::PointMode::limit);
    }
    return r;
}

Outcome cmd_balayage(const Options& o) {
    Outcome r;
    const auto dom = parse_domain(o.domain);
    r.inputs = {{"domain", o.domain}, {"point", o.point}, {"moment", o.moment}};
    const auto m = balayage::balayage_measure(dom);
    r.values["total_mass"] = m.total_mass;
    if (std::holds_alternative<domains::Annulus2D>(dom.geometry)) {
        r.values["outer_weight"] = m.outer_weight;
        r.values["inner_weight"] = m.inner_weight;
    }
    r.method = "boundary measure";
    if (!o.point.empty()) {
        const auto p = parse_point(o.point);
        const auto bp = balayage::balayage_potential(m, p, o.tol);
        r.value = bp.value;
        r.values["potential"] = bp.value;
        r.values["potential_error"] = bp.est_error;
        r.tolerance = o.tol;
        if (!domains::contains(dom.geometry, p)) {
            r.values["body_potential"] = -domains::background_potential(dom, p);
            r.provenance = "closed-form potential of the uniform body";
        }
    }
    if (o.moment >= 0) {
        const auto mm = balayage::measure_moment(m, o.moment) / m.total_mass;
        const auto bm = balayage::exterior_moment(dom.geometry, o.moment) / domains::volume(dom.geometry);
        r.values["measure_moment"] = {mm.real(), mm.imag()};
        r.values["body_moment"] = {bm.real(), bm.imag()};
    }
    return r;
}

Outcome cmd_hole(const Options& o) {
    Outcome r;
    if (!o.tail.empty()) {
        Keys k(split_spec("tail:" + o.tail));
        const balayage::TailParams p{k.num("gamma", 3.0), k.num("alpha", 1.0), k.num("R", 10.0)};
        k.done();
        r.inputs = {{"tail", o.tail}, {"beta", o.beta}};
        r.value = balayage::tail_exponent(o.beta, p);
        r.values["tail_exponent"] = r.value;
        r.method = "closed form";
        return r;
    }
    if (o.ginibre_n) {
        r.inputs = {{"ginibre_n", *o.ginibre_n}, {"r", o.r}, {"beta", o.beta}};
        r.value = balayage::ginibre_disk_gap(o.beta, *o.ginibre_n, o.r);
        r.values["log_probability"] = r.value;
        r.values["reference"] = -o.beta * *o.ginibre_n * *o.ginibre_n * std::pow(o.r, 4) / 8.0;
        r.provenance = "-beta N^2 r^4 / 8";
        r.method = "hole energy by quadrature";
        return r;
    }
    const auto dom = parse_domain(o.domain);
    const balayage::HoleSpec spec{dom.geometry, o.rho, o.beta};
    r.inputs = {{"domain", o.domain}, {"rho_b", o.rho}, {"beta", o.beta}};
    const double e = balayage::hole_energy(spec);
    r.value = e;
    r.values = {{"energy_per_rho2", e},
                {"gap_exponent", balayage::gap_exponent(spec)},
                {"log_probability", o.rho * o.rho * balayage::gap_exponent(spec)}};
    r.method = "hole energy by quadrature";
    return r;
}

Outcome cmd_sample(const Options& o) {
    Outcome r;
    const auto t0 = std::chrono::steady_clock::now();
    const gas::GasModel model{o.beta, o.n, parse_ensemble(o.ensemble)};
    gas::validate(model);
    if (o.chains < 1) throw ArgError("--chains must be at least 1");
    if (o.sweeps < 1) throw ArgError("--sweeps must be at least 1");
    if (o.thin < 1) throw ArgError("--thin must be at least 1");
    r.inputs = {{"ensemble", o.ensemble}, {"beta", o.beta}, {"n", o.n},   {"sweeps", o.sweeps},
                {"seed", o.seed},         {"chains", o.chains}, {"thin", o.thin}, {"burn_in", o.burn_in},
                {"out", o.out}};

    std::ofstream csv;
    if (!o.out.empty()) {
        csv.open(o.out, std::ios::binary);
        if (!csv) throw ArgError("cannot open " + o.out);
        csv << "chain,sweep,particle,re,im\n";
    }
    const bool real_line = gas::is_real_line(model);
    std::vector<double> second_moment, energy_mean, acceptance;
    // chains run in id order so the file is identical for identical seeds
    for (int c = 0; c < o.chains; ++c) {
        gas::ChainOptions opt;
        opt.burn_in_fraction = o.burn_in;
        opt.keep_every = 0;
        opt.chain_id = static_cast<std::uint64_t>(c);
        double m2 = 0.0, en = 0.0;
        std::int64_t kept = 0, first = -1;
        char line[128];
        auto sink = [&](std::int64_t sweep, std::span<const cplx> z) {
            if (first < 0) first = sweep;
            if ((sweep - first) % o.thin != 0) return;
            for (std::size_t j = 0; j < z.size(); ++j) {
                m2 += real_line ? z[j].real() * z[j].real() : std::norm(z[j]);
                if (csv.is_open()) {
                    std::snprintf(line, sizeof line, "%d,%lld,%zu,%.17g,%.17g\n", c, static_cast<long long>(sweep), j,
                                  z[j].real(), real_line ? 0.0 : z[j].imag());
                    csv << line;
                }
            }
            en += gas::energy(model, z);
            ++kept;
        };
        const auto res = gas::run_chain(model, o.sweeps, o.seed, opt, sink);
        if (kept == 0) throw ArgError("no configurations kept after burn-in; raise --sweeps");
        second_moment.push_back(m2 / static_cast<double>(kept * model.N));
        energy_mean.push_back(en / static_cast<double>(kept));
        acceptance.push_back(res.state.acceptance_rate);
    }
    auto mean_err = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        if (v.size() < 2) return std::pair<double, json>{m, nullptr};
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair<double, json>{m, std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
    };
    const auto [m2, m2e] = mean_err(second_moment);
    const auto [en, ene] = mean_err(energy_mean);
    const auto [acc, acce] = mean_err(acceptance);
    const json estimates{{"second_moment", m2}, {"energy", en}, {"acceptance_rate", acc}};
    const json stderr_{{"second_moment", m2e}, {"energy", ene}, {"acceptance_rate", acce}};
    const double runtime = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.value = m2;
    r.values = {{"estimates", estimates}, {"stderr", stderr_}};
    r.method = "single-particle Metropolis, across-chain standard errors";
    r.extra = {{"estimates", estimates}, {"stderr", stderr_}, {"runtime_ms", runtime}};
    return r;
}

Outcome cmd_check(const Options& o) {
    Outcome r;
    if (o.suite != "quick" && o.suite != "full") throw ArgError("--suite must be quick or full");
    const auto suite = o.suite == "full" ? acceptance::Suite::full : acceptance::Suite::quick;
    r.inputs = {{"suite", o.suite}, {"criterion", o.id}};
    std::vector<acceptance::CriterionResult> results;
    if (o.id != 0) {
        if (o.id < 1 || o.id > acceptance::kCriteria) throw ArgError("--criterion must be in 1..11");
        results.push_back(acceptance::run_criterion(o.id, suite));
    } else {
        results = acceptance::run_suite(suite);
    }
    json lines = json::array();
    int failed = 0;
    for (const auto& c : results) {
        lines.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
        if (!c.passed) ++failed;
        r.text += acceptance::format_line(c) + "\n";
    }
    r.extra["criteria"] = lines;
    r.value = failed;
    r.values["failed"] = failed;
    r.values["passed"] = static_cast<int>(results.size()) - failed;
    r.method = "acceptance suite";
    r.exit_code = failed > 0 ? 1 : 0;
    return r;
}

struct Command {
    const char* name;
    const char* help;
    std::function<void(CLI::App&, Options&)> add;
    std::function<Outcome(const Options&)> run;
};

std::vector<Command> commands() {
    return {
        {"potential", "background potential of a uniform body",
         [](CLI::App& a, Options& o) {
             a.add_option("--domain", o.domain, "geometry, e.g. ball:d=3,R=1,N=1")->required();
             a.add_option("--point", o.point, "comma-separated coordinates")->required();
             a.add_option("--method", o.method, "closed | oracle | both");
             a.add_option("--tol", o.tol, "oracle tolerance");
         },
         cmd_potential},
        {"energy", "self energy, optionally with particles",
         [](CLI::App& a, Options& o) {
             a.add_option("--domain", o.domain, "geometry")->required();
             a.add_option("--points", o.points, "particle positions x,y;x,y");
         },
         cmd_energy},
        {"coeffs", "quadratic coefficients of a uniformly charged hyperellipsoid",
         [](CLI::App& a, Options& o) {
             a.add_option("--axes", o.axes, "semi-axes, e.g. 1x1x2")->required();
             a.add_option("--N", o.N, "total charge");
             a.add_option("--method", o.method, "auto | quadrature | carlson");
         },
         cmd_coeffs},
        {"surface", "conductor charge on a hyperellipsoid and projection identities",
         [](CLI::App& a, Options& o) {
             a.add_option("--axes", o.axes, "semi-axes, e.g. 1x1x2");
             a.add_option("--Q", o.Q, "total charge");
             a.add_option("--point", o.point, "surface or field point");
             a.add_option("--quantity", o.quantity, "density | potential | total | identity");
             a.add_option("--identity", o.identity, "constant_potential | riesz_quadratic | semicircle | thin_slab");
             a.add_option("--d", o.d, "dimension for identities");
             a.add_option("--R", o.R, "radius for identities");
             a.add_option("--points", o.id_points, "grid points for identities");
         },
         cmd_surface},
        {"green", "Dirichlet Green function",
         [](CLI::App& a, Options& o) {
             a.add_option("--geometry", o.geometry, "disk:R= | halfplane | sphere:R= | halfspace | map spec")->required();
             a.add_option("--z", o.z, "first point")->required();
             a.add_option("--w", o.w, "second point")->required();
         },
         cmd_green},
        {"capacity", "capacity and Robin constant of a mapped set",
         [](CLI::App& a, Options& o) {
             a.add_option("--map", o.map, "interval | ellipse:a=,b= | joukowski:R=,c= | laurent:scale=,coeffs=")
                 ->required();
             a.add_option("--point", o.point, "exterior point for the Green function with pole at infinity");
             a.add_option("--angle", o.angle, "boundary angle for the equilibrium density");
         },
         cmd_capacity},
        {"droplet", "droplet of a quadratic or induced potential",
         [](CLI::App& a, Options& o) {
             a.add_option("--kind", o.kind, "quadratic | induced");
             a.add_option("--alpha", o.alpha, "potential parameter");
             a.add_option("--area", o.area, "droplet area (quadratic)");
         },
         cmd_droplet},
        {"fluct", "covariance of linear statistics or surface correlation",
         [](CLI::App& a, Options& o) {
             a.add_option("--f", o.f, "cos:k=,a= | sin:k=,a= | expcos:t=");
             a.add_option("--g", o.g, "second statistic, defaults to f");
             a.add_option("--beta", o.beta, "inverse temperature");
             a.add_option("--route", o.route, "quadrature | fourier | both");
             a.add_option("--surface", o.surface, "disk:R= | halfplane | ellipse:a1=,a2= | halfspace | map spec");
             a.add_option("--p1", o.p1, "first boundary point");
             a.add_option("--p2", o.p2, "second boundary point");
         },
         cmd_fluct},
        {"riesz", "Riesz gas on a circle",
         [](CLI::App& a, Options& o) {
             a.add_option("--s", o.s, "Riesz exponent in (-2, 1)");
             a.add_option("--n", o.n, "particles");
             a.add_option("--R", o.R, "radius");
             a.add_option("--x", o.x, "test-charge offset in lattice units");
         },
         cmd_riesz},
        {"balayage", "boundary measure with the exterior potential of a body",
         [](CLI::App& a, Options& o) {
             a.add_option("--domain", o.domain, "ball, annulus or ellipse")->required();
             a.add_option("--point", o.point, "field point");
             a.add_option("--moment", o.moment, "moment order");
             a.add_option("--tol", o.tol, "quadrature tolerance");
         },
         cmd_balayage},
        {"hole", "hole energies and gap exponents",
         [](CLI::App& a, Options& o) {
             a.add_option("--domain", o.domain, "planar hole geometry");
             a.add_option("--beta", o.beta, "inverse temperature");
             a.add_option("--rho", o.rho, "background density");
             a.add_option("--ginibre-n", o.ginibre_n, "Ginibre particle number");
             a.add_option("--r", o.r, "scaled hole radius");
             a.add_option("--tail", o.tail, "counting tail gamma=,alpha=,R=");
         },
         cmd_hole},
        {"sample", "Metropolis sampling of a two-dimensional or line gas",
         [](CLI::App& a, Options& o) {
             a.add_option("--ensemble", o.ensemble, "ginibre | elliptic:tau= | induced:alpha= | contour[:a=,b=] | sinh:c=,L=");
             a.add_option("--beta", o.beta, "inverse temperature");
             a.add_option("--n", o.n, "particles");
             a.add_option("--sweeps", o.sweeps, "sweeps per chain including burn-in");
             a.add_option("--seed", o.seed, "random seed");
             a.add_option("--chains", o.chains, "independent chains");
             a.add_option("--thin", o.thin, "write every k-th configuration");
             a.add_option("--burn-in", o.burn_in, "burn-in fraction");
             a.add_option("--out", o.out, "CSV file chain,sweep,particle,re,im");
             a.add_option("--config", o.config, "key = value file with the options above; flags given later win");
         },
         cmd_sample},
        {"check", "acceptance suite",
         [](CLI::App& a, Options& o) {
             a.add_option("--suite", o.suite, "quick | full");
             a.add_option("--criterion", o.id, "single criterion 1..11");
         },
         cmd_check},
    };
}

json error_record(const std::string& command, const std::string& type, const std::string& message) {
    json rec = base_record(command);
    rec["error"] = {{"type", type}, {"message", message}};
    return rec;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_point(const std::string& text) {
    if (text.empty()) throw ArgError("missing point");
    return to_list(text, ',', "point");
}

domains::UniformDomain parse_domain(const std::string& text) {
    Keys k(split_spec(text));
    domains::UniformDomain dom;
    const std::string& n = k.name();
    if (n == "ball") {
        dom.geometry = domains::Ball{static_cast<int>(k.num("d", 3.0)), k.num("R", 1.0)};
    } else if (n == "annulus") {
        dom.geometry = domains::Annulus2D{k.num("R", 1.0), k.num("c", 0.5)};
    } else if (n == "segment") {
        dom.geometry = domains::Segment1D{k.num("R", 1.0)};
    } else if (n == "ellipse") {
        dom.geometry = domains::Ellipse2D{k.num("a1", 1.0), k.num("a2", 1.0)};
    } else if (n == "ellipsoid") {
        dom.geometry = domains::Hyperellipsoid{k.list("axes", {1.0, 1.0, 1.0})};
    } else if (n == "cuboid") {
        dom.geometry = domains::Cuboid{fixed<3>(k.list("lo", {0, 0, 0}), "lo"), fixed<3>(k.list("hi", {1, 1, 1}), "hi")};
    } else if (n == "rectangle") {
        dom.geometry = domains::Rectangle{fixed<2>(k.list("lo", {0, 0}), "lo"), fixed<2>(k.list("hi", {1, 1}), "hi")};
    } else {
        throw UnsupportedError("unsupported geometry '" + n + "'");
    }
    dom.N = k.num("N", 1.0);
    k.done();
    domains::validate(dom.geometry);
    if (!(dom.N > 0.0)) throw DomainError("N must be positive");
    return dom;
}

namespace {

// CLI11 only reads config files attached to the root app, so the sampler's
// file is spliced in as ordinary flags ahead of the explicit ones.
std::vector<std::string> expand_config(const std::vector<std::string>& argv) {
    auto it = std::find(argv.begin(), argv.end(), "--config");
    if (argv.empty() || it == argv.end() || it + 1 == argv.end()) return argv;
    std::vector<std::string> out{argv.front()};
    for (const auto& item : CLI::ConfigTOML().from_file(*(it + 1))) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty() && item.parents != std::vector<std::string>{argv.front()}) continue;
        out.push_back("--" + item.name);
        out.insert(out.end(), item.inputs.begin(), item.inputs.end());
    }
    out.insert(out.end(), argv.begin() + 1, argv.end());
    return out;
}

} // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
    CommandResult res;
    const std::string name = argv.empty() ? std::string() : argv.front();
    Options o;
    CLI::App app{"Coulomb and log-gas toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    const auto cmds = commands();
    std::map<CLI::App*, const Command*> lookup;
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_flag("--json", o.json_out, "print the JSON record");
        c.add(*sub, o);
        lookup[sub] = &c;
    }
    bool json_requested = std::find(argv.begin(), argv.end(), "--json") != argv.end();
    auto finish = [&](json rec, int code) {
        res.exit_code = code;
        res.record = std::move(rec);
        res.output = json_requested ? res.record.dump() + "\n" : render_text(res.record);
        return res;
    };
    try {
        const auto expanded = expand_config(argv);
        std::vector<std::string> args(expanded.rbegin(), expanded.rend());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        json rec = base_record(name);
        res.exit_code = 0;
        res.record = rec;
        res.output = app.help();
        for (auto* sub : app.get_subcommands()) res.output = sub->help();
        return res;
    } catch (const CLI::ParseError& e) {
        return finish(error_record(name, "argument", e.what()), 2);
    }
    const Command* cmd = nullptr;
    for (auto* sub : app.get_subcommands()) cmd = lookup.at(sub);
    json_requested = o.json_out;

    auto fail = [&](const char* type, const std::string& msg, int code) {
        return finish(error_record(cmd->name, type, msg), code);
    };
    try {
        const Outcome out = cmd->run(o);
        json rec = base_record(cmd->name);
        rec["inputs"] = out.inputs;
        rec["value"] = out.value;
        rec["values"] = out.values;
        rec["method"] = out.method;
        rec["tolerance"] = out.tolerance;
        rec["provenance"] = out.provenance;
        for (auto it = out.extra.begin(); it != out.extra.end(); ++it) rec[it.key()] = it.value();
        if (out.exit_code != 0) rec["error"] = {{"type", "check"}, {"message", "acceptance criteria failed"}};
        finish(std::move(rec), out.exit_code);
        if (!json_requested && !out.text.empty()) res.output = out.text;
        return res;
    } catch (const SingularityError& e) {
        return fail("singularity", e.what(), 2);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), 2);
    } catch (const UnsupportedError& e) {
        return fail("unsupported", e.what(), 2);
    } catch (const ArgError& e) {
        return fail("argument", e.what(), 2);
    } catch (const BudgetError& e) {
        json rec = error_record(cmd->name, "budget", e.what());
        rec["error"]["best_estimate"] = e.best_estimate;
        rec["error"]["error_estimate"] = e.error_estimate;
        return finish(std::move(rec), 3);
    } catch (const OverflowError& e) {
        return fail("overflow", e.what(), 3);
    } catch (const std::logic_error& e) {
        return fail("argument", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("numerical", e.what(), 3);
    }
}

} // namespace coulomb::cli
