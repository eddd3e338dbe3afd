#include "lzlab/exact_wkb.hpp"

#include "lzlab/error.hpp"
#include "lzlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lzlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);
constexpr int kRootSamples = 256;
constexpr int kMaxOrderPairs = 200;

void require_positive_eps(double eps, const char* what)
{
    if (!(eps > 0.0)) throw config_error(std::string(what) + ": exact WKB solutions need eps > 0");
}

cplx radicand(const Potential& p, double eps, cplx t)
{
    const cplx v = p(t);
    return v * v + eps * eps;
}

// sqrt(V^2+eps^2) continued from the positive real value at Re t up the vertical line.
cplx vertical_root(const Potential& p, double eps, double x, double y)
{
    SqrtContinuation c(cplx(std::hypot(p(x), eps), 0.0));
    if (y == 0.0) return c.value();
    auto q = [&](double tau) { return radicand(p, eps, cplx(x, tau * y)); };
    constexpr int steps = 64;
    for (int i = 0; i < steps; ++i) c.advance(q, static_cast<double>(i) / steps, static_cast<double>(i + 1) / steps);
    return c.value();
}

// int_0^1 sqrt(V(x + i tau y)^2 + eps^2) d tau on the continued branch.
cplx vertical_root_integral(const Potential& p, double eps, double x, double y)
{
    auto q = [&](double tau) { return radicand(p, eps, cplx(x, tau * y)); };
    const auto& gl = gauss_legendre_32();
    const double start = std::hypot(p(x), eps);
    auto estimate = [&](int panels) {
        SqrtContinuation c(cplx(start, 0.0));
        double prev = 0.0;
        cplx sum = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double a = static_cast<double>(i) / panels, b = static_cast<double>(i + 1) / panels;
            const double mid = 0.5 * (a + b), r = 0.5 * (b - a);
            cplx panel = 0.0;
            for (int j = 0; j < 32; ++j) {
                const double tau = mid + r * gl.x[j];
                panel += gl.w[j] * c.advance(q, prev, tau);
                prev = tau;
            }
            sum += panel * r;
        }
        return sum;
    };
    cplx prev = estimate(1);
    for (int panels = 2; panels <= 4096; panels *= 2) {
        cplx cur = estimate(panels);
        if (std::abs(cur - prev) <= 1e-13 * std::max(std::abs(cur), start)) return cur;
        prev = cur;
    }
    throw numerical_error("phase_primitive: vertical quadrature did not converge (point close to a branch cut?)");
}

std::vector<cplx> upper_turning_points(const Potential& p, double eps)
{
    std::vector<cplx> z;
    for (int k = 0; k < p.crossing_count(); ++k) z.push_back(turning_point(p, k, eps));
    return z;
}

double distance_to_turning_points(const std::vector<cplx>& zeta, cplx t)
{
    double d = std::numeric_limits<double>::infinity();
    for (cplx z : zeta) d = std::min({d, std::abs(t - z), std::abs(t - std::conj(z))});
    return d;
}

// Does the closed segment [a, b] meet a cut {Re = Re zeta, |Im| >= Im zeta}?
bool crosses_cut(cplx a, cplx b, cplx zeta)
{
    const double c = zeta.real(), top = zeta.imag();
    const double da = a.real() - c, db = b.real() - c;
    if (da == 0.0 && db == 0.0)
        return std::max(a.imag(), b.imag()) >= top || std::min(a.imag(), b.imag()) <= -top;
    if (da * db > 0.0) return false;
    const double s = da / (da - db);
    const double y = a.imag() + s * (b.imag() - a.imag());
    return y >= top || y <= -top;
}

cplx node_point(cplx from, cplx to, int j, int nodes)
{
    return from + (to - from) * (static_cast<double>(j) / nodes);
}

// The continued root along one segment, sampled at s = j / kRootSamples.
struct SegmentRoots {
    cplx from, delta;
    std::vector<cplx> r;

    cplx at(const Potential& p, double eps, double s) const
    {
        const double x = std::clamp(s, 0.0, 1.0) * kRootSamples;
        const int idx = std::min(static_cast<int>(x), kRootSamples - 1);
        const double f = x - idx;
        const cplx guess = (1.0 - f) * r[idx] + f * r[idx + 1];
        const cplx c = std::sqrt(radicand(p, eps, from + s * delta));
        return std::abs(c - guess) <= std::abs(c + guess) ? c : -c;
    }
};

std::vector<SegmentRoots> track_roots(const Potential& p, double eps, const PolylinePath& path)
{
    std::vector<SegmentRoots> segs;
    const auto& w = path.waypoints;
    SqrtContinuation c(continued_root(p, eps, w.front()));
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        SegmentRoots s{w[i], w[i + 1] - w[i], {}};
        s.r.reserve(kRootSamples + 1);
        s.r.push_back(c.value());
        auto q = [&](double u) { return radicand(p, eps, s.from + u * s.delta); };
        for (int j = 1; j <= kRootSamples; ++j)
            s.r.push_back(c.advance(q, static_cast<double>(j - 1) / kRootSamples, static_cast<double>(j) / kRootSamples));
        segs.push_back(std::move(s));
    }
    return segs;
}

void check_path(const PolylinePath& path)
{
    if (path.waypoints.size() < 2) throw config_error("polyline path needs at least two waypoints");
    if (path.nodes_per_segment < 1) throw config_error("polyline path needs nodes_per_segment >= 1");
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i)
        if (path.waypoints[i] == path.waypoints[i + 1]) throw config_error("polyline path has a zero-length segment");
}

PathCertificate certify_with_roots(const Potential& p, double eps, const PolylinePath& path, int sign, double radius,
                                   const std::vector<SegmentRoots>& segs)
{
    PathCertificate c;
    c.min_distance = std::numeric_limits<double>::infinity();
    c.min_rate = std::numeric_limits<double>::infinity();
    const auto zeta = upper_turning_points(p, eps);
    const auto& w = path.waypoints;
    const int nodes = path.nodes_per_segment;
    std::ostringstream why;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        for (cplx z : zeta) {
            if (crosses_cut(w[i], w[i + 1], z)) {
                why << "segment " << i << " crosses the branch cut of turning point " << z;
                c.reason = why.str();
                return c;
            }
        }
        const cplx delta = w[i + 1] - w[i];
        for (int j = 0; j <= nodes; ++j) {
            const double s = static_cast<double>(j) / nodes;
            const cplx t = node_point(w[i], w[i + 1], j, nodes);
            if (!p.in_sector(t)) {
                why << "node " << t << " lies outside the analyticity sector";
                c.reason = why.str();
                return c;
            }
            c.min_distance = std::min(c.min_distance, distance_to_turning_points(zeta, t));
            const cplx zp = kI * segs[i].at(p, eps, s);
            c.min_rate = std::min(c.min_rate, sign * (zp * delta).real() / std::abs(delta));
        }
        // The path-continued root must agree with the vertically continued one at every waypoint.
        const cplx tracked = segs[i].r.back(), vertical = continued_root(p, eps, w[i + 1]);
        if (std::abs(tracked - vertical) > 1e-8 * std::abs(vertical)) {
            why << "square-root branch at waypoint " << w[i + 1] << " differs from the vertical continuation";
            c.reason = why.str();
            return c;
        }
    }
    if (c.min_distance < radius) {
        why << "path comes within " << c.min_distance << " of a turning point (exclusion radius " << radius << ")";
        c.reason = why.str();
        return c;
    }
    if (!(c.min_rate > 0.0)) {
        why << "sign * Re z is not increasing along the path (min rate " << c.min_rate << ")";
        c.reason = why.str();
        return c;
    }
    c.ok = true;
    return c;
}

SymbolSum collect(cplx t, const Dop853::cvec& y, int k_max)
{
    SymbolSum s;
    s.t = t;
    s.even = 1.0;
    s.odd = 0.0;
    for (int j = 1; j <= 2 * k_max; ++j) {
        if (j % 2 == 0) s.even += y[j];
        else s.odd += y[j];
        s.term_magnitudes.push_back(std::abs(y[j]));
    }
    if (k_max > 0) s.truncation = std::max(std::abs(y[2 * k_max - 1]), std::abs(y[2 * k_max]));
    return s;
}

Vec2 assemble(cplx K, cplx z_over_h, int sign, const SymbolSum& w)
{
    const cplx e = std::exp(static_cast<double>(sign) * z_over_h);
    const cplx phi1 = e * (w.even + w.odd) / K;
    const cplx phi2 = e * (-static_cast<double>(sign)) * kI * K * (w.even - w.odd);
    return Vec2(0.5 * (phi1 + kI * phi2), 0.5 * (kI * phi1 + phi2));
}

// U^{-1} = I - i sigma_x.
Vec2 to_phi(const Vec2& psi) { return Vec2(psi(0) - kI * psi(1), psi(1) - kI * psi(0)); }

PolylinePath reversed(const PolylinePath& path)
{
    PolylinePath r = path;
    std::reverse(r.waypoints.begin(), r.waypoints.end());
    return r;
}

}  // namespace

double default_exclusion_radius(const Potential& p, double eps, double h, double safety)
{
    if (!(h > 0.0)) throw config_error("default_exclusion_radius: h must be positive");
    double r = 4.0 * std::sqrt(h);
    for (double v : p.slopes()) r = std::max(r, 2.0 * eps / v);
    return safety * r;
}

cplx continued_root(const Potential& p, double eps, cplx t)
{
    require_positive_eps(eps, "continued_root");
    return vertical_root(p, eps, t.real(), t.imag());
}

cplx phase_primitive(const Potential& p, double eps, cplx t)
{
    require_positive_eps(eps, "phase_primitive");
    if (p.crossing_count() == 0) throw config_error("phase_primitive: potential has no crossings");
    if (!p.in_sector(t)) throw numerical_error("phase_primitive: point outside the analyticity sector");
    const double x = t.real(), y = t.imag();
    auto f = [&](double s) { return std::hypot(p(s), eps); };
    const double real_part = integrate(f, p.zeros()[0], x, 1e-14);
    // i * int_0^y sqrt(..) * i du
    const cplx vertical = y == 0.0 ? cplx(0.0) : -y * vertical_root_integral(p, eps, x, y);
    return kI * real_part + vertical;
}

cplx phase_z(const Potential& p, cplx a, cplx t, double eps)
{
    return phase_primitive(p, eps, t) - phase_primitive(p, eps, a);
}

cplx log_K_derivative(const Potential& p, cplx t, double eps)
{
    const cplx v = p(t);
    return -0.5 * kI * eps * p.derivative(t) / (v * v + eps * eps);
}

cplx symbol_K(const Potential& p, cplx t, double eps)
{
    require_positive_eps(eps, "symbol_K");
    const double x = t.real(), y = t.imag();
    cplx logK = -0.25 * kI * (kPi + 2.0 * std::atan2(p(x), eps));
    if (y != 0.0) {
        auto g = [&](double u) { return log_K_derivative(p, cplx(x, u), eps) * kI; };
        logK += integrate(g, 0.0, y, 1e-13, 1e-15);
    }
    // Snap to the exact fourth root of (V + i eps)/(V - i eps) nearest the integrated value.
    const cplx v = p(t);
    const cplx k4 = (v + kI * eps) / (v - kI * eps);
    const cplx guess = std::exp(logK);
    cplx best = std::pow(k4, 0.25);
    cplx pick = best;
    for (int m = 1; m < 4; ++m) {
        const cplx cand = best * std::pow(kI, m);
        if (std::abs(cand - guess) < std::abs(pick - guess)) pick = cand;
    }
    if (std::abs(pick - guess) > 0.1 * std::abs(guess))
        throw numerical_error("symbol_K: continuation of K lost its branch (point close to a turning point?)");
    return pick;
}

PathCertificate certify_path(const Potential& p, double eps, const PolylinePath& path, int sign, double radius)
{
    require_positive_eps(eps, "certify_path");
    check_path(path);
    if (sign != 1 && sign != -1) throw config_error("certify_path: sign must be +1 or -1");
    // root tracking needs V on every node, so the sector is checked first
    const auto& w = path.waypoints;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        for (int j = 0; j <= path.nodes_per_segment; ++j) {
            const cplx t = node_point(w[i], w[i + 1], j, path.nodes_per_segment);
            if (!p.in_sector(t)) {
                PathCertificate c;
                std::ostringstream why;
                why << "node " << t << " lies outside the analyticity sector";
                c.reason = why.str();
                return c;
            }
        }
    return certify_with_roots(p, eps, path, sign, radius, track_roots(p, eps, path));
}

std::vector<SymbolSum> resum_symbol(const Potential& p, double eps, const WKBSpec& spec, const PolylinePath& path,
                                    double h, int k_max, const ResumOptions& opt, bool profile)
{
    require_positive_eps(eps, "resum_symbol");
    check_path(path);
    if (!(h > 0.0)) throw config_error("resum_symbol: h must be positive");
    if (spec.sign != 1 && spec.sign != -1) throw config_error("resum_symbol: sign must be +1 or -1");
    if (k_max < 0 || k_max > kMaxOrderPairs) throw config_error("resum_symbol: k_max must lie in [0, 200]");
    if (std::abs(spec.symbol_base - path.waypoints.front()) > 1e-12 * (1.0 + std::abs(spec.symbol_base)))
        throw config_error("resum_symbol: the path must start at the symbol base point");

    const auto segs = track_roots(p, eps, path);
    if (opt.certify) {
        const double radius = opt.exclusion_radius < 0.0 ? default_exclusion_radius(p, eps, h) : opt.exclusion_radius;
        const auto cert = certify_with_roots(p, eps, path, spec.sign, radius, segs);
        if (!cert.ok) throw numerical_error("path certificate failed: " + cert.reason);
    }

    const int n = 2 * k_max + 1;
    Dop853 solver(static_cast<std::size_t>(n));
    Dop853::cvec y(static_cast<std::size_t>(n), cplx(0.0));
    Dop853Options o;
    o.rtol = opt.tol;
    o.atol = 1e-2 * opt.tol;
    const double sigma = spec.sign;

    std::vector<SymbolSum> out;
    if (profile) out.push_back(collect(path.waypoints.front(), y, k_max));
    const int nodes = profile ? path.nodes_per_segment : 1;
    for (const auto& seg : segs) {
        auto rhs = [&](double s, const cplx* w, cplx* dw) {
            const cplx t = seg.from + s * seg.delta;
            const cplx zp = kI * seg.at(p, eps, s) * seg.delta;
            const cplx g = log_K_derivative(p, t, eps) * seg.delta;
            dw[0] = zp;
            for (int j = 1; j < n; ++j) {
                dw[j] = g * (j == 1 ? cplx(1.0) : w[j - 1]);
                if (j % 2 == 1) dw[j] -= sigma * (2.0 / h) * zp * w[j];
            }
        };
        for (int j = 0; j < nodes; ++j) {
            const double s0 = static_cast<double>(j) / nodes, s1 = static_cast<double>(j + 1) / nodes;
            solver.integrate(rhs, s0, s1, y, o);
            if (profile) out.push_back(collect(seg.from + s1 * seg.delta, y, k_max));
        }
    }
    if (!profile) out.push_back(collect(path.waypoints.back(), y, k_max));
    return out;
}

cplx wronskian(const Potential& p, double eps, const PolylinePath& path, double h, int k_max, const ResumOptions& opt)
{
    check_path(path);
    WKBSpec spec{0.0, path.waypoints.front(), 1};
    const auto w = resum_symbol(p, eps, spec, path, h, k_max, opt, false);
    return 2.0 * kI * w.back().even;
}

Vec2 exact_wkb_solution(const Potential& p, double eps, const WKBSpec& spec, const PolylinePath& path, double h,
                        int k_max, const ResumOptions& opt)
{
    const auto w = resum_symbol(p, eps, spec, path, h, k_max, opt, false);
    const cplx t = path.waypoints.back();
    return assemble(symbol_K(p, t, eps), phase_z(p, spec.phase_base, t, eps) / h, spec.sign, w.back());
}

WronskianProfile wronskian_profile(const Potential& p, double eps, const PolylinePath& path, double h, cplx phase_base,
                                   int k_max, const ResumOptions& opt)
{
    check_path(path);
    const auto plus = resum_symbol(p, eps, {phase_base, path.waypoints.front(), 1}, path, h, k_max, opt, true);
    auto minus = resum_symbol(p, eps, {phase_base, path.waypoints.back(), -1}, reversed(path), h, k_max, opt, true);
    std::reverse(minus.begin(), minus.end());
    if (plus.size() != minus.size()) throw numerical_error("wronskian_profile: node lists do not match");

    WronskianProfile prof;
    const cplx fa = phase_primitive(p, eps, phase_base);
    for (std::size_t i = 0; i < plus.size(); ++i) {
        const cplx t = plus[i].t;
        const cplx K = symbol_K(p, t, eps);
        const cplx zh = (phase_primitive(p, eps, t) - fa) / h;
        const Vec2 a = to_phi(assemble(K, zh, 1, plus[i]));
        const Vec2 b = to_phi(assemble(K, zh, -1, minus[i]));
        prof.t.push_back(t);
        prof.values.push_back(a(0) * b(1) - a(1) * b(0));
    }
    const cplx w0 = prof.values.front();
    for (cplx w : prof.values) prof.defect = std::max(prof.defect, std::abs(w - w0) / std::abs(w0));
    return prof;
}

NearCrossingTerms leading_terms_near_crossing(const Potential& p, int k, double eps, double h, double t,
                                              double lambda0)
{
    require_positive_eps(eps, "leading_terms_near_crossing");
    if (!(h > 0.0) || !(lambda0 > 0.0)) throw config_error("leading_terms_near_crossing: need h > 0 and lambda0 > 0");
    if (k < 0 || k >= p.crossing_count()) throw config_error("leading_terms_near_crossing: crossing index out of range");
    const double tk = p.zeros()[k];
    if (!(p.derivative(tk) > 0.0))
        throw config_error("leading_terms_near_crossing: only crossings with V' > 0 are supported");
    const double s = t - tk;
    const double inner = lambda0 * std::sqrt(h);
    if (!(std::abs(s) > inner && std::abs(s) < 2.0 * inner)) {
        std::ostringstream os;
        os << "leading_terms_near_crossing: |t - t_k| = " << std::abs(s) << " outside the annulus (" << inner << ", "
           << 2.0 * inner << ")";
        throw config_error(os.str());
    }
    const double v = p.slopes()[k];
    const double mu = eps * eps / h;
    auto f = [&](double x) { return p(x); };
    const double Phi = integrate(f, tk, t, 1e-14);
    const cplx nu = std::polar(1.0, mu * std::log(eps / v) / (2.0 * v));
    const double small = eps / (2.0 * v * s);
    const double expo = mu / (2.0 * v);

    NearCrossingTerms r;
    r.right = s > 0.0;
    if (r.right) {
        const cplx ph = std::polar(1.0, Phi / h + expo * std::log(s));
        r.model_plus = -std::conj(nu) * ph * Vec2(-small, 1.0);
        r.model_minus = kI * nu * std::conj(ph) * Vec2(1.0, small);
    } else {
        const cplx ph = std::polar(1.0, -Phi / h - expo * std::log(-s));
        r.model_plus = nu * ph * Vec2(1.0, small);
        r.model_minus = kI * std::conj(nu) * std::conj(ph) * Vec2(-small, 1.0);
    }

    const cplx A = action_A(p, k, eps);
    const cplx Fk = phase_primitive(p, eps, tk);
    const cplx Ft = phase_primitive(p, eps, t);
    const cplx z_plus = Ft - (Fk + 0.5 * kI * A);
    const cplx z_minus = Ft - (Fk + 0.5 * kI * std::conj(A));
    const cplx K = symbol_K(p, t, eps);
    const cplx ep = std::exp(z_plus / h), em = std::exp(-z_minus / h);
    r.wkb_plus = 0.5 * ep * Vec2(1.0 / K + K, kI * (1.0 / K - K));
    r.wkb_minus = 0.5 * em * Vec2(1.0 / K - K, kI * (1.0 / K + K));
    r.rel_diff_plus = (r.wkb_plus - r.model_plus).norm() / r.model_plus.norm();
    r.rel_diff_minus = (r.wkb_minus - r.model_minus).norm() / r.model_minus.norm();
    return r;
}

double annulus_error_estimate(const Potential& p, int k, double eps, double h, double lambda0, int samples)
{
    require_positive_eps(eps, "annulus_error_estimate");
    if (!(h > 0.0) || !(lambda0 > 0.0) || samples < 4) throw config_error("annulus_error_estimate: bad arguments");
    const double tk = p.zeros().at(static_cast<std::size_t>(k));
    const cplx A = action_A(p, k, eps);
    const cplx Fk = phase_primitive(p, eps, tk);
    const cplx F_up = Fk + 0.5 * kI * A, F_down = Fk + 0.5 * kI * std::conj(A);
    double sup = 0.0;
    for (double rho : {lambda0 * std::sqrt(h), 2.0 * lambda0 * std::sqrt(h)}) {
        for (int j = 0; j < samples; ++j) {
            // Half-step offset keeps the samples off the vertical cuts.
            const double theta = 2.0 * kPi * (j + 0.5) / samples;
            const cplx t = tk + std::polar(rho, theta);
            if (!p.in_sector(t))
                throw config_error("annulus_error_estimate: annulus leaves the analyticity sector; lower h or lambda0");
            const cplx F = phase_primitive(p, eps, t);
            const double d = std::min(std::abs(F - F_up), std::abs(F - F_down));
            sup = std::max(sup, h / d);
        }
    }
    return sup;
}

}  // namespace lzlab
