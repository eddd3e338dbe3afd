#include "lzlab/propagator.hpp"

#include "lzlab/error.hpp"
#include "lzlab/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace lzlab {

Regime RegimeParams::regime(const RegimeThresholds& th) const
{
    if (mu() <= th.mu0) return Regime::nonadiabatic;
    if (epsilon > 0.0 && h / (epsilon * epsilon) <= th.adiabatic0) return Regime::adiabatic;
    return Regime::critical;
}

const char* regime_name(Regime r)
{
    switch (r) {
    case Regime::nonadiabatic: return "nonadiabatic";
    case Regime::adiabatic: return "adiabatic";
    case Regime::critical: return "critical";
    }
    return "critical";
}

namespace {

using cvec = Dop853::cvec;

void check_params(const RegimeParams& rp)
{
    if (!(rp.h > 0.0) || !std::isfinite(rp.h)) throw config_error("h must be positive and finite");
    if (!(rp.epsilon >= 0.0) || !std::isfinite(rp.epsilon)) throw config_error("epsilon must be non-negative");
}

// Rough step count for a DOP853 run: about one step per radian of the fastest phase.
double estimated_steps(const Potential& p, const RegimeParams& rp, double span)
{
    double vmax = std::max({std::abs(p.e_right()), std::abs(p.e_left()), rp.epsilon});
    return span * vmax / rp.h;
}

}  // namespace

Mat2 propagate_columns(const Potential& p, const RegimeParams& rp, double t_from, double t_to, const Mat2& m0,
                       double tol, PropagationStats* stats, long max_steps)
{
    check_params(rp);
    if (!(tol >= 1e-13)) throw config_error("propagate: tol must be >= 1e-13");
    const double span = std::abs(t_to - t_from);
    if (estimated_steps(p, rp, span) > static_cast<double>(max_steps)) {
        std::ostringstream os;
        os << "refusing run: estimated " << estimated_steps(p, rp, span) << " steps exceeds budget " << max_steps;
        throw budget_error(os.str());
    }
    const double eps = rp.epsilon, inv_h = 1.0 / rp.h;
    const std::complex<double> mi(0.0, -inv_h);
    auto rhs = [&](double t, const std::complex<double>* y, std::complex<double>* dy) {
        const double v = p(t);
        for (int c = 0; c < 2; ++c) {
            const auto a = y[2 * c], b = y[2 * c + 1];
            dy[2 * c] = mi * (v * a + eps * b);
            dy[2 * c + 1] = mi * (eps * a - v * b);
        }
    };
    cvec y{m0(0, 0), m0(1, 0), m0(0, 1), m0(1, 1)};
    const double n0 = m0.col(0).norm(), n1 = m0.col(1).norm();
    double drift = 0.0;
    auto on_step = [&](double, const cvec& s) {
        double a = std::hypot(std::abs(s[0]), std::abs(s[1]));
        double b = std::hypot(std::abs(s[2]), std::abs(s[3]));
        if (n0 > 0) drift = std::max(drift, std::abs(a - n0) / n0);
        if (n1 > 0) drift = std::max(drift, std::abs(b - n1) / n1);
    };
    Dop853 solver(4);
    Dop853Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    opt.max_steps = max_steps;
    solver.integrate(rhs, t_from, t_to, y, opt, on_step);
    if (stats) {
        stats->steps = solver.stats().accepted;
        stats->rejected = solver.stats().rejected;
        stats->tol = tol;
        stats->max_norm_drift = drift;
    }
    Mat2 out;
    out << y[0], y[2], y[1], y[3];
    return out;
}

Vec2 propagate(const Potential& p, const RegimeParams& rp, double t_from, double t_to, const Vec2& psi0, double tol,
               PropagationStats* stats)
{
    Mat2 m0;
    m0.col(0) = psi0;
    m0.col(1) = Vec2::Zero();
    return propagate_columns(p, rp, t_from, t_to, m0, tol, stats).col(0);
}

Vec2 jost_vector(const Potential& p, const RegimeParams& rp, Side side, int sign, double t)
{
    check_params(rp);
    const int s = side_sign(side);
    const double eps = rp.epsilon;
    const double e = s > 0 ? p.e_right() : p.e_left();
    const double dv = p.tail_residual(t, s);
    if (!(std::abs(dv) < 0.01 * eps) || t * s <= 0.0) {
        std::ostringstream os;
        os << "jost_vector: t=" << t << " is not in the asymptotic region (|V - E| = " << std::abs(dv)
           << ", guard 0.01*eps = " << 0.01 * eps << ")";
        throw numerical_error(os.str());
    }
    const double lam = std::hypot(e, eps);
    // Rotation angle of the instantaneous eigenvectors; tends to theta_star with
    // tan 2 theta_star = eps / E as t -> +-inf.
    const double theta = 0.5 * std::atan2(eps, p(t));
    const double phase = (lam * t + residual_phase_integral(p, side, eps, t)) / rp.h;
    const std::complex<double> f = std::polar(1.0, sign * phase);
    Vec2 v;
    if (sign > 0)
        v << -std::sin(theta), std::cos(theta);
    else
        v << std::cos(theta), std::sin(theta);
    return f * v;
}

double default_truncation(const Potential& p, double eps)
{
    if (!(eps > 0.0)) throw config_error("default_truncation: eps must be positive");
    double T = 1.0;
    for (double z : p.zeros()) T = std::max(T, std::abs(z) + 1.0);
    while (std::abs(p.tail_residual(T, 1)) >= 1e-3 * eps || std::abs(p.tail_residual(-T, -1)) >= 1e-3 * eps) {
        T *= 1.02;
        if (T > 1e9) throw numerical_error("default_truncation: tails do not reach the asymptotic region");
    }
    return 2.0 * T;
}

double unitarity_defect(const Mat2& s)
{
    double d = 0.0;
    d = std::max(d, std::abs(std::norm(s(0, 0)) + std::norm(s(1, 0)) - 1.0));
    d = std::max(d, std::abs(std::norm(s(0, 1)) + std::norm(s(1, 1)) - 1.0));
    d = std::max(d, std::abs(s(0, 1) + std::conj(s(1, 0))));
    d = std::max(d, std::abs(s(0, 0) - std::conj(s(1, 1))));
    d = std::max(d, std::abs(s(0, 0) * std::conj(s(0, 1)) + s(1, 0) * std::conj(s(1, 1))));
    return d;
}

namespace {

Mat2 jost_matrix(const Potential& p, const RegimeParams& rp, Side side, double t)
{
    Mat2 m;
    m.col(0) = jost_vector(p, rp, side, +1, t);
    m.col(1) = jost_vector(p, rp, side, -1, t);
    return m;
}

Mat2 run_once(const Potential& p, const RegimeParams& rp, double T, const ScatteringOptions& opt,
              PropagationStats& stats)
{
    if (!opt.reverse) {
        Mat2 jl = jost_matrix(p, rp, Side::left, -T);
        Mat2 y = propagate_columns(p, rp, -T, T, jl, opt.tol, &stats, opt.max_steps);
        return jost_matrix(p, rp, Side::right, T).inverse() * y;
    }
    Mat2 jr = jost_matrix(p, rp, Side::right, T);
    Mat2 y = propagate_columns(p, rp, T, -T, jr, opt.tol, &stats, opt.max_steps);
    return y.inverse() * jost_matrix(p, rp, Side::left, -T);
}

// eps = 0: the two diabatic components decouple, psi_1 = e^{-i Phi/h}, psi_2 = e^{+i Phi/h}
// with Phi(t) = int_0^t V; Jost solutions are these up to constant phases.
Mat2 decoupled_s_matrix(const Potential& p, double h)
{
    auto side_matrix = [&](int s) {
        auto res = [&](double t) { return p.tail_residual(t, s); };
        // Phi(t) = E t + Phi_star + o(1) on this side.
        double phi = s > 0 ? integrate_to_infinity(res, 0.0, 1, 1e-13, 1e-16)
                           : -integrate_to_infinity(res, 0.0, -1, 1e-13, 1e-16);
        const double e = s > 0 ? p.e_right() : p.e_left();
        const std::complex<double> plus = std::polar(1.0, phi / h), minus = std::polar(1.0, -phi / h);
        Mat2 m = Mat2::Zero();  // columns J_+, J_- in the basis (psi_1, psi_2)
        if (e > 0) {
            m(1, 0) = minus;
            m(0, 1) = plus;
        } else {
            m(0, 0) = -plus;
            m(1, 1) = minus;
        }
        return m;
    };
    return side_matrix(1).inverse() * side_matrix(-1);
}

}  // namespace

ScatteringResult scattering_matrix(const Potential& p, const RegimeParams& rp, const ScatteringOptions& opt)
{
    check_params(rp);
    if (p.crossing_count() == 0) throw config_error("scattering_matrix: potential has no crossings");
    if (p.e_right() == 0.0 || p.e_left() == 0.0) throw config_error("scattering_matrix: limits E_r, E_l must be non-zero");
    const auto t0 = std::chrono::steady_clock::now();
    ScatteringResult r;
    if (rp.epsilon == 0.0) {
        r.s_matrix = decoupled_s_matrix(p, rp.h);
    } else {
        double T = opt.T > 0 ? opt.T : default_truncation(p, rp.epsilon);
        r.s_matrix = run_once(p, rp, T, opt, r.stats);
        // An automatic T also has to resolve small |s21|: the truncated tails leave a spurious
        // amplitude of order h |V'(T)| / eps, so T grows until s21 is stable to 1e-3 relative.
        for (int grow = 0; opt.check_T; ++grow) {
            PropagationStats s2;
            Mat2 s_alt = run_once(p, rp, 1.5 * T, opt, s2);
            r.t_drift_P = std::abs(std::norm(s_alt(1, 0)) - std::norm(r.s_matrix(1, 0)));
            r.t_drift_S = (s_alt - r.s_matrix).cwiseAbs().maxCoeff();
            const double thr = opt.t_threshold > 0 ? opt.t_threshold : std::max(10.0 * opt.tol, 1e-8);
            if (r.t_drift_P > thr) {
                std::ostringstream os;
                os << "scattering_matrix: P changed by " << r.t_drift_P << " between T=" << T << " and 1.5T";
                throw numerical_error(os.str());
            }
            const double amp_drift = std::abs(s_alt(1, 0) - r.s_matrix(1, 0));
            if (opt.T > 0 || grow >= 6 || amp_drift <= 1e-3 * std::abs(s_alt(1, 0)) + 10.0 * opt.tol) break;
            T *= 1.5;
            r.s_matrix = s_alt;
            r.stats = s2;
        }
        r.truncation_T = T;
    }
    r.probability = std::norm(r.s_matrix(1, 0));
    r.unitarity_defect = unitarity_defect(r.s_matrix);
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ScatteringResult transition_probability(const Potential& p, const RegimeParams& rp, const ScatteringOptions& opt)
{
    return scattering_matrix(p, rp, opt);
}

}  // namespace lzlab
