// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "lzlab/asymptotics.hpp"
#include "lzlab/exact_wkb.hpp"
#include "lzlab/gamma.hpp"
#include "lzlab/geometry.hpp"
#include "lzlab/propagator.hpp"
#include "lzlab/transfer.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace lzlab;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
    mx /= x.size(), my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double prob(const Potential& p, double eps, double h)
{
    return transition_probability(p, {eps, h}).probability;
}

Outcome unitarity_and_symmetry()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ue(0.05, 0.3), uh(0.02, 0.1);
    double worst_u = 0, worst_s = 0;
    for (const char* name : {"one_zero", "two_zero"}) {
        const Potential p = Potential::preset(name);
        for (int i = 0; i < 10; ++i) {
            const double eps = ue(rng), h = uh(rng);
            const auto r = transition_probability(p, {eps, h});
            const Mat2& s = r.s_matrix;
            worst_u = std::max(worst_u, std::abs(std::norm(s(0, 0)) + std::norm(s(1, 0)) - 1.0));
            worst_s = std::max(worst_s, std::abs(s(0, 1) + std::conj(s(1, 0))));
        }
    }
    return {worst_u <= 1e-9 && worst_s <= 1e-9,
            fmt::format("max | |s11|^2+|s21|^2-1 | = {:.2e}, max |s12+conj s21| = {:.2e} over 20 points", worst_u,
                        worst_s)};
}

Outcome landau_zener_consistency()
{
    const Potential p = Potential::preset("one_zero");
    double worst = 0;
    for (double eps : {1e-2, 5e-3, 2e-3, 1e-3}) {
        const double ratio = action_A(p, 0, eps).imag() / (eps * eps);
        worst = std::max(worst, std::abs(ratio / (pi / 2) - 1.0));
    }
    // h/eps^2 = 0.05 at eps = 0.01: the action correction is O(eps^4/h) = 2e-3.
    const double eps_s = 0.01, h_s = 5e-6;
    const auto small = predict_adiabatic(compute_geometry(p, eps_s), h_s);
    const double lz_ratio = std::exp(small.log_value + pi * eps_s * eps_s / h_s);

    const double eps = 0.35, h = 0.01;
    const double P_ode = prob(p, eps, h);
    const double P_ad = predict_adiabatic(compute_geometry(p, eps), h).value;
    const double rel = std::abs(P_ode / P_ad - 1.0);
    return {worst <= 0.01 && std::abs(lz_ratio - 1.0) <= 0.01 && rel <= 0.2,
            fmt::format("max |Im A/eps^2 / (pi/2) - 1| = {:.2e}; prediction / e^(-pi eps^2/h) = {:.5f}; "
                        "P_ode = {:.6e}, P_adiabatic = {:.6e}, rel = {:.3f}",
                        worst, lz_ratio, P_ode, P_ad, rel)};
}

Outcome nonadiabatic_single()
{
    const Potential p = Potential::preset("one_zero");
    const double h = 0.01, v = p.slopes()[0];
    std::vector<double> mus{0.08, 0.04, 0.02, 0.01}, res;
    for (double mu : mus) res.push_back(std::abs(prob(p, std::sqrt(mu * h), h) - (1.0 - pi * mu / v)));
    const double slope = loglog_slope(mus, res);
    const double last = res.back() / (pi * 0.01);
    return {slope >= 1.4 && last <= 0.1,
            fmt::format("residual exponent {:.3f} (>= 1.4); residual/(pi mu) at mu=0.01 is {:.4f} (<= 0.1)", slope,
                        last)};
}

Outcome parity_even()
{
    const Potential p = Potential::preset("two_zero");
    const double h = 0.01, mu = 0.02, v = p.slopes()[0];
    const double P = prob(p, std::sqrt(mu * h), h);
    const double C = prefactor_Cn(p, h), pred = pi * C * mu;
    const bool away = C >= 0.5 * (2.0 / v);
    const bool band = !away || std::abs(P - pred) <= 0.5 * pred;
    return {P <= 0.25 && band,
            fmt::format("P_ode = {:.6f}, pi C_2 mu = {:.6f}, C_2 = {:.4f}{}", P, pred, C,
                        away ? "" : " (near a root, band not applied)")};
}

Outcome bohr_sommerfeld_dips()
{
    const Potential p = Potential::preset("two_zero");
    const auto bs = bohr_sommerfeld_roots(p, 0.005, 0.05);
    if (bs.roots.size() < 3) return {false, fmt::format("only {} roots found", bs.roots.size())};
    // The three largest roots: the dips are widest there.
    const std::vector<double> r(bs.roots.end() - 3, bs.roots.end());
    const double mu = 0.02;
    auto P_at = [&](double h) { return prob(p, std::sqrt(mu * h), h); };
    std::vector<double> Pr, Pm;
    for (double h : r) Pr.push_back(P_at(h));
    for (int i = 0; i < 2; ++i) Pm.push_back(P_at(0.5 * (r[i] + r[i + 1])));
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        double neighbour = std::numeric_limits<double>::infinity();
        if (i > 0) neighbour = std::min(neighbour, Pm[i - 1]);
        if (i < 2) neighbour = std::min(neighbour, Pm[i]);
        worst = std::min(worst, neighbour / Pr[i]);
    }
    return {worst >= 5.0, fmt::format("roots {:.6f} {:.6f} {:.6f}; P at roots {:.3e} {:.3e} {:.3e}; "
                                      "P at midpoints {:.3e} {:.3e}; min ratio {:.1f}",
                                      r[0], r[1], r[2], Pr[0], Pr[1], Pr[2], Pm[0], Pm[1], worst)};
}

Outcome branching_constants_check()
{
    double worst_pq = 0, worst_g = 0;
    for (int i = 0; i < 50; ++i) {
        const double mu = std::pow(10.0, -4.0 + 4.0 * i / 49.0);
        const auto c = branching_constants(mu);
        worst_pq = std::max(worst_pq, std::abs(std::norm(c.p) - std::norm(c.q) - 1.0));
        const double g2 = 1.0 / (std::exp(pi * mu / 2) - std::exp(-pi * mu / 2));
        worst_g = std::max(worst_g, std::abs(std::norm(c.gamma) / g2 - 1.0));
    }
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst_r = 0;
    for (int i = 0; i < 100; ++i) {
        const cplx z(u(rng), u(rng));
        const cplx lhs = complex_gamma(z) * complex_gamma(1.0 - z);
        const cplx rhs = pi / std::sin(pi * z);
        worst_r = std::max(worst_r, std::abs(lhs / rhs - 1.0));
    }
    return {worst_pq <= 1e-12 && worst_g <= 1e-12 && worst_r <= 1e-12,
            fmt::format("| |p|^2-|q|^2-1 | <= {:.2e}; |gamma|^2 rel <= {:.2e}; reflection rel <= {:.2e}", worst_pq,
                        worst_g, worst_r)};
}

cplx unit_phase(std::mt19937_64& rng)
{
    return std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2 * pi)(rng));
}

Outcome ring_algebra()
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    auto rc = [&] { return cplx(g(rng), g(rng)); };

    // 1000 random elements in chains of 1..8 factors.
    double worst_ring = 0;
    int used = 0;
    while (used < 1000) {
        const int len = 1 + used % 8;
        std::vector<RingElement> els;
        Mat2 dense = Mat2::Identity();
        for (int k = 0; k < len; ++k) {
            els.push_back({rc(), rc(), rc(), rc()});
            dense = dense * els.back().to_matrix();
        }
        used += len;
        const Mat2 diff = ring_product(els).to_matrix() - dense;
        worst_ring = std::max(worst_ring, diff.cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff());
    }

    double worst_closed = 0, worst_tau2 = 0;
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> a(n + 1), b(n), c(n);
            for (auto& x : a) x = unit_phase(rng);
            for (auto& x : b) x = 0.3 * rc();
            for (auto& x : c) x = rc();
            const auto st = sigma_tau(a, b, c);
            const cplx sc = sigma_closed_form(a, c), tc = tau_closed_form(a, b, c);
            worst_closed = std::max({worst_closed, std::abs(st.sigma - sc) / std::max(1.0, std::abs(sc)),
                                     std::abs(st.tau - tc) / std::max(1.0, std::abs(tc))});
            const double t2 = std::norm(st.tau);
            worst_tau2 = std::max(worst_tau2, std::abs(tau_squared(a, b, c) - t2) / std::max(1.0, t2));
        }
    }

    // Residual exponents in the scale beta of b; c unimodular as in the chain.
    double min_sigma = 1e9, min_tau = 1e9;
    for (int n = 1; n <= 6; ++n) {
        std::vector<cplx> a(n + 1), b0(n), c(n);
        for (auto& x : a) x = unit_phase(rng);
        for (auto& x : b0) x = unit_phase(rng);
        for (auto& x : c) x = unit_phase(rng);
        std::vector<double> betas{1e-2, 1e-3}, rs, rt;
        for (double beta : betas) {
            std::vector<cplx> b(b0);
            for (auto& x : b) x *= beta;
            const auto rep = expansion_check_lemma_D1(a, b, c);
            rs.push_back(std::max(rep.residual_sigma[0], rep.residual_sigma[1]));
            rt.push_back(std::max(rep.residual_tau[0], rep.residual_tau[1]));
        }
        // n = 1 leading terms are exact: residuals sit at rounding and carry no exponent.
        if (rs[0] > 1e-14) min_sigma = std::min(min_sigma, loglog_slope(betas, rs));
        if (rt[0] > 1e-14) min_tau = std::min(min_tau, loglog_slope(betas, rt));
    }
    const bool ok = worst_ring <= 1e-14 && worst_closed <= 1e-13 && worst_tau2 <= 1e-12 && min_sigma >= 1.9 &&
                    min_tau >= 2.8;
    return {ok, fmt::format("ring vs dense rel {:.1e}; sigma/tau closed forms {:.1e}; tau^2 {:.1e}; "
                            "residual exponents sigma {:.2f}, tau {:.2f}",
                            worst_ring, worst_closed, worst_tau2, min_sigma, min_tau)};
}

Outcome wkb_wronskian()
{
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3, radius = 0.1;
    PolylinePath path;
    path.waypoints = {cplx(1.2, 0.5), cplx(0.8, -0.5)};
    const auto cert = certify_path(p, eps, path, 1, radius);
    if (!cert.ok) return {false, "path not canonical: " + cert.reason};
    ResumOptions opt;
    opt.exclusion_radius = radius;
    std::vector<double> hs{0.04, 0.02, 0.01, 0.005}, dev;
    double worst_defect = 0;
    for (double h : hs) {
        dev.push_back(std::abs(wronskian(p, eps, path, h, 40, opt) - cplx(0, 2)));
        worst_defect = std::max(worst_defect, wronskian_profile(p, eps, path, h, 0.0, 40, opt).defect);
    }
    const double slope = loglog_slope(hs, dev);
    return {std::abs(slope - 1.0) <= 0.2 && worst_defect <= 1e-9,
            fmt::format("|W-2i| = {:.3e} {:.3e} {:.3e} {:.3e}; slope {:.3f}; t-defect {:.1e}; distance {:.3f}",
                        dev[0], dev[1], dev[2], dev[3], slope, worst_defect, cert.min_distance)};
}

Outcome chain_vs_ode()
{
    const Potential p = Potential::preset("one_zero");
    const double h = 0.01, mu = 0.02, eps = std::sqrt(mu * h);
    const double P_ode = prob(p, eps, h);
    const double P_chain = chain_product(assemble_chain(p, eps, h, Regime::nonadiabatic)).probability;
    const double band = std::sqrt(h) * mu + std::pow(mu, 1.5);
    const double C = std::abs(P_chain - P_ode) / band;
    return {C <= 10.0, fmt::format("P_chain = {:.8f}, P_ode = {:.8f}, fitted C = {:.3f}", P_chain, P_ode, C)};
}

Outcome prefactor_slope()
{
    const double h = 0.005;
    bool ok = true;
    std::string detail;
    for (const char* name : {"one_zero", "two_zero"}) {
        const Potential p = Potential::preset(name);
        const bool odd = p.crossing_count() % 2 == 1;
        double sxy = 0, sxx = 0;
        for (double mu : {0.005, 0.01, 0.015, 0.02}) {
            const double P = prob(p, std::sqrt(mu * h), h);
            const double y = odd ? 1.0 - P : P;
            sxy += mu * y, sxx += mu * mu;
        }
        const double slope = sxy / sxx, target = pi * prefactor_Cn(p, h);
        const double rel = std::abs(slope / target - 1.0);
        ok = ok && rel <= 0.05;
        detail += fmt::format("{}{}: slope {:.4f} vs pi C_n {:.4f} (rel {:.3f})", detail.empty() ? "" : "; ", name,
                              slope, target, rel);
    }
    return {ok, detail};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"unitarity and symmetry", unitarity_and_symmetry},
        {"Landau-Zener consistency", landau_zener_consistency},
        {"non-adiabatic single crossing", nonadiabatic_single},
        {"even-n parity", parity_even},
        {"Bohr-Sommerfeld dips", bohr_sommerfeld_dips},
        {"branching constants", branching_constants_check},
        {"ring and recursion algebra", ring_algebra},
        {"exact WKB Wronskian", wkb_wronskian},
        {"transfer chain vs ODE", chain_vs_ode},
        {"prefactor slope", prefactor_slope},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("{} criterion {:2d} ({}): {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                   o.detail, secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
