#include "lzlab/geometry.hpp"

#include "lzlab/error.hpp"
#include "lzlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lzlab {

namespace {

void check_index(const Potential& p, int k, int count, const char* what)
{
    if (k < 0 || k >= count) {
        std::ostringstream os;
        os << what << " index " << k << " out of range for " << p.crossing_count() << " crossing(s)";
        throw config_error(os.str());
    }
}

double nearest_zero_gap(const Potential& p, int k)
{
    double gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < p.crossing_count(); ++j)
        if (j != k) gap = std::min(gap, std::abs(p.zeros()[j] - p.zeros()[k]));
    return gap;
}

// sqrt(V^2+eps^2) - lambda, written so the cancellation happens inside tail_residual.
double tail_integrand(const Potential& p, int side, double eps, double t)
{
    const double e = side > 0 ? p.e_right() : p.e_left();
    const double v = p(t);
    const double dv = p.tail_residual(t, side);
    const double lam = std::hypot(e, eps);
    return dv * (v + e) / (std::hypot(v, eps) + lam);
}

}  // namespace

cplx turning_point(const Potential& p, int k, double eps)
{
    check_index(p, k, p.crossing_count(), "crossing");
    const double tk = p.zeros()[k];
    if (eps == 0.0) return tk;
    if (!(eps > 0.0)) throw config_error("turning_point: eps must be non-negative");
    const double d1 = p.derivative(tk);
    const double s = d1 > 0 ? 1.0 : -1.0;
    const double gap = nearest_zero_gap(p, k);
    if (std::isfinite(gap) && eps >= 0.2 * gap * std::abs(d1)) {
        std::ostringstream os;
        os << "turning_point: eps=" << eps << " too large for an isolated Newton basin at t_" << k + 1
           << " (guard eps < 0.2*gap*v_k = " << 0.2 * gap * std::abs(d1) << ")";
        throw numerical_error(os.str());
    }
    const cplx target(0.0, s * eps);
    cplx z = tk + cplx(0.0, s * eps / d1);
    for (int it = 0; it < 50; ++it) {
        cplx f = p(z) - target;
        if (std::abs(f) <= 1e-14 * eps) {
            if (!(z.imag() > 0.0)) throw numerical_error("turning_point: Newton converged to Im zeta <= 0");
            if (std::abs(z - tk) > 0.5 * gap) throw numerical_error("turning_point: Newton escaped the basin of t_k");
            return z;
        }
        z -= f / p.derivative(z);
        if (std::abs(z - tk) > 0.5 * gap) throw numerical_error("turning_point: Newton escaped the basin of t_k");
    }
    cplx f = p(z) - target;
    if (std::abs(f) <= 1e-13 * eps && z.imag() > 0.0) return z;
    throw numerical_error("turning_point: Newton did not converge in 50 steps");
}

cplx action_A(const Potential& p, int k, double eps)
{
    if (eps == 0.0) return 0.0;
    const double tk = p.zeros()[k];
    const cplx zeta = turning_point(p, k, eps);
    const cplx d = zeta - tk;
    // t(u) = zeta - d u^2 maps u in [0,1] onto the segment and turns the endpoint
    // square-root zero into a smooth factor: sqrt(V^2+eps^2) = u g(u) with g analytic.
    auto q = [&](double u) {
        cplx v = p(zeta - d * (u * u));
        return (v * v + eps * eps) / (u * u);
    };
    const auto& gl = gauss_legendre_32();
    auto estimate = [&](int panels) {
        SqrtContinuation g(cplx(eps, 0.0));
        double u_prev = 1.0;
        cplx sum = 0.0;
        for (int i = panels - 1; i >= 0; --i) {
            const double a = static_cast<double>(i) / panels, b = static_cast<double>(i + 1) / panels;
            const double c = 0.5 * (a + b), r = 0.5 * (b - a);
            cplx panel = 0.0;
            for (int j = 31; j >= 0; --j) {
                double u = c + r * gl.x[j];
                cplx gv = g.advance(q, u_prev, u);
                u_prev = u;
                panel += gl.w[j] * gv * (u * u);
            }
            sum += panel * r;
        }
        return 4.0 * d * sum;
    };
    cplx prev = estimate(1);
    for (int panels = 2; panels <= 1024; panels *= 2) {
        cplx cur = estimate(panels);
        if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur;
        prev = cur;
    }
    throw numerical_error("action_A: quadrature did not converge");
}

double action_R(const Potential& p, int j, double eps)
{
    check_index(p, j, p.crossing_count() - 1, "interval");
    auto f = [&](double t) { return std::hypot(p(t), eps); };
    return 2.0 * integrate(f, p.zeros()[j + 1], p.zeros()[j], 1e-13);
}

double action_R0(const Potential& p, int j)
{
    check_index(p, j, p.crossing_count() - 1, "interval");
    auto f = [&](double t) { return std::abs(p(t)); };
    return 2.0 * integrate(f, p.zeros()[j + 1], p.zeros()[j], 1e-13);
}

double residual_phase_integral(const Potential& p, Side side, double eps, double t)
{
    const int s = side_sign(side);
    double delta = p.tail_exponent(s);
    if (!(delta > 1.0)) {
        std::ostringstream os;
        os << "tail decays too slowly (fitted delta=" << delta << " <= 1); improper action integral diverges";
        throw numerical_error(os.str());
    }
    auto f = [&](double x) { return tail_integrand(p, s, eps, x); };
    // int_{+-inf}^{t} = -(+-) int_t^{+-inf}
    double toward_inf = integrate_to_infinity(f, t, s, 1e-13, 1e-16);
    return s > 0 ? -toward_inf : toward_inf;
}

double action_infinity(const Potential& p, Side side, double eps)
{
    if (p.crossing_count() == 0) throw config_error("action_infinity: potential has no crossings");
    const double t_star = side == Side::right ? p.zeros().front() : p.zeros().back();
    return -2.0 * residual_phase_integral(p, side, eps, t_star);
}

CrossingGeometry compute_geometry(const Potential& p, double eps)
{
    if (!(eps > 0.0)) throw config_error("compute_geometry: eps must be positive");
    if (p.crossing_count() == 0) throw config_error("compute_geometry: potential has no crossings");
    CrossingGeometry g;
    g.epsilon = eps;
    g.crossings = p.zeros();
    g.slopes = p.slopes();
    const int n = p.crossing_count();
    for (int k = 0; k < n; ++k) {
        g.turning_points.push_back(turning_point(p, k, eps));
        g.actions_A.push_back(action_A(p, k, eps));
    }
    for (int j = 0; j + 1 < n; ++j) {
        g.actions_R.push_back(action_R(p, j, eps));
        g.actions_R0.push_back(action_R0(p, j));
    }
    g.action_right = action_infinity(p, Side::right, eps);
    g.action_left = action_infinity(p, Side::left, eps);
    g.lambda_right = std::hypot(p.e_right(), eps);
    g.lambda_left = std::hypot(p.e_left(), eps);
    return g;
}

AlphaK alpha_and_K(const std::vector<double>& slopes, const std::vector<cplx>& actions_A, double tie_tol)
{
    AlphaK out;
    if (slopes.empty()) return out;
    const double vmax = *std::max_element(slopes.begin(), slopes.end());
    out.alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < slopes.size(); ++k) {
        if (slopes[k] >= vmax * (1.0 - tie_tol)) {
            out.K.push_back(static_cast<int>(k));
            if (k < actions_A.size()) out.alpha = std::min(out.alpha, actions_A[k].imag());
        }
    }
    return out;
}

AlphaK alpha_and_K(const CrossingGeometry& g, double tie_tol) { return alpha_and_K(g.slopes, g.actions_A, tie_tol); }

}  // namespace lzlab
