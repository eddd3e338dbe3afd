#include "lzlab/asymptotics.hpp"

#include "lzlab/error.hpp"
#include "lzlab/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lzlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Phi_k = int_{t_1}^{t_k} V, accumulated segment by segment.
std::vector<double> crossing_phases(const Potential& p)
{
    const auto& z = p.zeros();
    std::vector<double> phi(z.size(), 0.0);
    for (std::size_t k = 1; k < z.size(); ++k) {
        auto f = [&](double t) { return p(t); };
        phi[k] = phi[k - 1] + integrate(f, z[k - 1], z[k], 1e-14);
    }
    return phi;
}

std::vector<int> slope_signs(const Potential& p)
{
    std::vector<int> s;
    for (double t : p.zeros()) s.push_back(p.derivative(t) > 0 ? 1 : -1);
    return s;
}

// sum_k e^{i phi_k} / sqrt(v_k); C_n is its squared modulus.
cplx crossing_amplitude(const std::vector<double>& phi, const std::vector<int>& sgn, const std::vector<double>& v,
                        double h)
{
    cplx sum = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k)
        sum += std::polar(1.0 / std::sqrt(v[k]), 2.0 * phi[k] / h + 0.25 * kPi * sgn[k]);
    return sum;
}

}  // namespace

double crossing_integral(const Potential& p, int j, int k)
{
    const int n = p.crossing_count();
    if (j < 0 || k < 0 || j >= n || k >= n) throw config_error("crossing_integral: index out of range");
    auto f = [&](double t) { return p(t); };
    return integrate(f, p.zeros()[k], p.zeros()[j], 1e-14);
}

double prefactor_Cn(const Potential& p, double h)
{
    if (!(h > 0.0)) throw config_error("prefactor_Cn: h must be positive");
    if (p.crossing_count() == 0) throw config_error("prefactor_Cn: potential has no crossings");
    return std::norm(crossing_amplitude(crossing_phases(p), slope_signs(p), p.slopes(), h));
}

AsymptoticPrediction predict_nonadiabatic(const Potential& p, double eps, double h, const RegimeThresholds& th)
{
    if (!(h > 0.0) || !(eps >= 0.0)) throw config_error("predict_nonadiabatic: need h > 0 and eps >= 0");
    AsymptoticPrediction r;
    r.regime = Regime::nonadiabatic;
    r.epsilon = eps;
    r.h = h;
    r.mu = eps * eps / h;
    if (r.mu > th.mu0) {
        std::ostringstream os;
        os << "regime error: mu = " << r.mu << " above the non-adiabatic threshold " << th.mu0;
        throw config_error(os.str());
    }
    r.error_orders = "O(sqrt(h) mu) + O(mu^(3/2))";
    r.prefactor = prefactor_Cn(p, h);
    const bool odd = p.crossing_count() % 2 == 1;
    const double raw = odd ? 1.0 - kPi * r.prefactor * r.mu : kPi * r.prefactor * r.mu;
    r.value = std::clamp(raw, 0.0, 1.0);
    r.log_value = raw > 0 ? std::log(raw) : -std::numeric_limits<double>::infinity();
    double inv_sum = 0.0;
    for (double v : p.slopes()) inv_sum += 1.0 / v;
    if (!odd && r.prefactor <= 1e-12 * inv_sum) {
        r.order_degenerate = true;
        r.warnings.push_back("C_n(h) vanishes: no leading term, prediction reported as 0");
    }
    return r;
}

AsymptoticPrediction predict_adiabatic(const CrossingGeometry& g, double h, const RegimeThresholds& th,
                                       double tie_tol)
{
    const double eps = g.epsilon;
    if (!(h > 0.0) || !(eps > 0.0)) throw config_error("predict_adiabatic: need h > 0 and eps > 0");
    AsymptoticPrediction r;
    r.regime = Regime::adiabatic;
    r.epsilon = eps;
    r.h = h;
    r.mu = eps * eps / h;
    if (h / (eps * eps) > th.adiabatic0) {
        std::ostringstream os;
        os << "regime error: h/eps^2 = " << h / (eps * eps) << " above the adiabatic threshold " << th.adiabatic0;
        throw config_error(os.str());
    }
    const AlphaK ak = alpha_and_K(g, tie_tol);
    r.alpha = ak.alpha;
    r.error_orders = "O((h/eps^2) exp(-2 alpha/h))";
    // Factor e^{-alpha/h} out of every term so the sum is evaluated without underflow.
    cplx sum = 0.0;
    for (int k : ak.K) {
        double r_sum = 0.0;
        for (int j = 0; j < k; ++j) r_sum += g.actions_R[j];
        const cplx A = g.actions_A[k];
        const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^m with m = k+1
        const double phase = (A.real() + A.real() - r_sum) / h;
        sum += sign * std::polar(std::exp(-(A.imag() - ak.alpha) / h), phase);
    }
    r.prefactor = std::norm(sum);
    r.log_value = std::log(r.prefactor) - 2.0 * ak.alpha / h;
    r.value = std::clamp(std::exp(r.log_value), 0.0, 1.0);
    const double vmax = *std::max_element(g.slopes.begin(), g.slopes.end());
    for (std::size_t k = 0; k < g.slopes.size(); ++k) {
        const bool in_k = std::find(ak.K.begin(), ak.K.end(), static_cast<int>(k)) != ak.K.end();
        if (!in_k && g.slopes[k] >= 0.9 * vmax) {
            std::ostringstream os;
            os << "crossing " << k + 1 << " has slope within 10% of the maximum; the omitted term may dominate the error";
            r.warnings.push_back(os.str());
        }
    }
    return r;
}

double landau_zener_exact(double v, double eps, double h)
{
    if (!(v > 0.0) || !(h > 0.0)) throw config_error("landau_zener_exact: need v > 0 and h > 0");
    return std::exp(-kPi * eps * eps / (v * h));
}

BohrSommerfeldRoots bohr_sommerfeld_roots(const Potential& p, double h_min, double h_max)
{
    if (!(h_min > 0.0) || !(h_max > h_min)) throw config_error("bohr_sommerfeld_roots: need 0 < h_min < h_max");
    const int n = p.crossing_count();
    if (n < 2) throw config_error("bohr_sommerfeld_roots: C_1 = 1/v_1 never vanishes");
    BohrSommerfeldRoots out;
    const auto& v = p.slopes();

    if (n == 2 && std::abs(v[0] - v[1]) <= 1e-6 * std::max(v[0], v[1])) {
        out.closed_form = true;
        const double J = -p.orientation() * crossing_integral(p, 0, 1);
        if (J == 0.0) {
            out.note = "int V vanishes between the crossings; C_2 is h-independent";
            return out;
        }
        // J = (N - 1/4) pi h, so N - 1/4 has the sign of J.
        const double nu_lo = std::abs(J) / (kPi * h_max), nu_hi = std::abs(J) / (kPi * h_min);
        const double shift = J > 0 ? -0.25 : 0.25;  // |N - 1/4| = M + shift, M = 1, 2, ... (or 0, 1, ...)
        for (long m = static_cast<long>(std::ceil(nu_lo - shift)); m + shift <= nu_hi; ++m) {
            if (m + shift <= 0.0) continue;
            out.roots.push_back(std::abs(J) / (kPi * (m + shift)));
        }
        std::sort(out.roots.begin(), out.roots.end());
        if (out.roots.empty()) out.note = "no root in range";
        return out;
    }

    double inv_sqrt_sum = 0.0, max_inv = 0.0;
    for (double x : v) {
        inv_sqrt_sum += 1.0 / std::sqrt(x);
        max_inv = std::max(max_inv, 1.0 / std::sqrt(x));
    }
    // |sum_k e^{i phi_k}/sqrt(v_k)| >= 2 max - sum; a positive bound rules out any zero.
    if (2.0 * max_inv - inv_sqrt_sum > 1e-12 * inv_sqrt_sum) {
        out.note = "C_n is bounded away from zero for every h";
        return out;
    }
    const auto phi = crossing_phases(p);
    const auto sgn = slope_signs(p);
    double span = 0.0;
    for (double x : phi) span = std::max(span, std::abs(x));
    // Phases are linear in x = 1/h; sample at 1/32 of the fastest period.
    const double x_lo = 1.0 / h_max, x_hi = 1.0 / h_min;
    const double dx = kPi / (32.0 * std::max(span, 1e-12));
    const long count = static_cast<long>(std::ceil((x_hi - x_lo) / dx)) + 1;
    if (count > 20'000'000) throw budget_error("bohr_sommerfeld_roots: h range too wide for the sampling grid");
    auto amp = [&](double x) { return std::abs(crossing_amplitude(phi, sgn, v, 1.0 / x)); };
    const double step = (x_hi - x_lo) / static_cast<double>(count - 1);
    double prev2 = amp(x_lo), prev1 = amp(x_lo + step);
    for (long i = 2; i < count; ++i) {
        const double x = x_lo + step * static_cast<double>(i);
        const double cur = amp(x);
        if (prev1 <= prev2 && prev1 <= cur) {
            auto [xm, am] = boost::math::tools::brent_find_minima(amp, x - 2.0 * step, x, 52);
            if (am <= 1e-6 * inv_sqrt_sum) out.roots.push_back(1.0 / xm);
        }
        prev2 = prev1;
        prev1 = cur;
    }
    std::sort(out.roots.begin(), out.roots.end());
    if (out.roots.empty()) out.note = "no root in range";
    return out;
}

}  // namespace lzlab
