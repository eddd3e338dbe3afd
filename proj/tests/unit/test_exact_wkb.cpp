#include "lzlab/exact_wkb.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lzlab;

namespace {

const cplx I(0.0, 1.0);

PolylinePath vertical_path()
{
    PolylinePath path;
    path.waypoints = {cplx(1.2, 0.5), cplx(0.8, -0.5)};
    return path;
}

}  // namespace

TEST_CASE("continued root squares to V^2 + eps^2 and is positive on the real axis")
{
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3;
    for (cplx t : {cplx(0.7, 0.4), cplx(-1.1, -0.3), cplx(2.0, 0.0)}) {
        const cplx r = continued_root(p, eps, t), V = p(t);
        CHECK(std::abs(r * r - (V * V + eps * eps)) < 1e-12);
    }
    CHECK(continued_root(p, eps, cplx(-0.4, 0.0)).real() > 0);
}

TEST_CASE("phase primitive on the real axis against Simpson")
{
    const Potential p = Potential::preset("two_zero");
    const double eps = 0.2, a = p.zeros()[0], b = -0.3;
    const int n = 20000;
    const double d = (b - a) / n;
    double s = std::hypot(p(a), eps) + std::hypot(p(b), eps);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * std::hypot(p(a + i * d), eps);
    CHECK(std::abs(phase_primitive(p, eps, b) - I * (s * d / 3)) < 1e-10);
}

TEST_CASE("phase z is an antiderivative of i sqrt(V^2 + eps^2) off the axis")
{
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3, d = 1e-5;
    for (cplx t : {cplx(1.0, 0.3), cplx(1.0, -0.4), cplx(-0.9, 0.2)})
        for (cplx dir : {cplx(1, 0), I}) {
            const cplx num = (phase_z(p, 0.0, t + d * dir, eps) - phase_z(p, 0.0, t - d * dir, eps)) / (2 * d * dir);
            CHECK(std::abs(num - I * continued_root(p, eps, t)) < 1e-7);
        }
    CHECK(std::abs(phase_z(p, cplx(0.5, 0.1), cplx(0.5, 0.1), eps)) == 0.0);
}

TEST_CASE("K symbol normalisation and log derivative")
{
    const Potential p = Potential::preset("two_zero");
    const double eps = 0.25;
    for (double tk : p.zeros()) CHECK(std::abs(symbol_K(p, tk, eps) - std::exp(-I * std::numbers::pi / 4.0)) < 1e-12);
    const cplx t(0.4, 0.2), d = 1e-5;
    const cplx K = symbol_K(p, t, eps), V = p(t);
    CHECK(std::abs(std::pow(K, 4) - (V + I * eps) / (V - I * eps)) < 1e-10);
    const cplx num = (symbol_K(p, t + d, eps) - symbol_K(p, t - d, eps)) / (2.0 * d) / K;
    CHECK(std::abs(num - log_K_derivative(p, t, eps)) < 1e-7);
    CHECK(std::abs(log_K_derivative(p, t, eps) - (-0.5 * I * eps * p.derivative(t) / (V * V + eps * eps))) < 1e-13);
}

TEST_CASE("path certificate")
{
    const Potential p = Potential::preset("one_zero");
    const auto ok = certify_path(p, 0.3, vertical_path(), 1, 0.1);
    CHECK(ok.ok);
    CHECK(ok.min_rate > 0);
    // the opposite sign is not canonical on the same path
    CHECK_FALSE(certify_path(p, 0.3, vertical_path(), -1, 0.1).ok);
    // passes 0.05 from the turning point i atan(0.3)
    PolylinePath close;
    close.waypoints = {cplx(0.05, 0.4), cplx(0.05, -0.4)};
    const auto near = certify_path(p, 0.3, close, 1, 0.1);
    CHECK_FALSE(near.ok);
    CHECK(near.min_distance == doctest::Approx(0.05).epsilon(0.01));  // sampled at 64 nodes
    PolylinePath far;
    far.waypoints = {cplx(0.0, 0.8), cplx(0.0, -0.8)};
    CHECK_FALSE(certify_path(p, 0.3, far, 1, 0.1).ok);
}

TEST_CASE("resummed symbol against an independent Volterra quadrature")
{
    // w_1(t) = int_b^t e^{-(2/h)(z(t) - z(s))} g(s) ds and w_2(t) = int_b^t g w_1, on a straight
    // segment with the exponential-weight trapezoid rule.
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3, h = 0.05;
    const auto path = vertical_path();
    const cplx b = path.waypoints[0], e = path.waypoints[1], dt = e - b;
    const int n = 40000;
    std::vector<cplx> z(n + 1), g(n + 1);
    for (int j = 0; j <= n; ++j) {
        const cplx t = b + dt * (double(j) / n);
        z[j] = phase_z(p, b, t, eps);
        g[j] = log_K_derivative(p, t, eps);
    }
    const cplx ds = dt / double(n);
    cplx w1 = 0.0, w2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx E = std::exp(-(2.0 / h) * (z[j + 1] - z[j]));
        const cplx w1n = E * w1 + 0.5 * ds * (E * g[j] + g[j + 1]);
        w2 += 0.5 * ds * (g[j] * w1 + g[j + 1] * w1n);
        w1 = w1n;
    }
    ResumOptions opt;
    opt.exclusion_radius = 0.1;
    const auto sums = resum_symbol(p, eps, {b, b, 1}, path, h, 1, opt);
    REQUIRE(sums.size() == 1);
    CHECK(std::abs(sums[0].odd - w1) < 1e-6 * std::abs(w1));
    CHECK(std::abs(sums[0].even - (1.0 + w2)) < 1e-6 * std::abs(w2));
}

TEST_CASE("Wronskian tends to 2i linearly in h and is constant along the path")
{
    const Potential p = Potential::preset("one_zero");
    ResumOptions opt;
    opt.exclusion_radius = 0.1;
    const double d1 = std::abs(wronskian(p, 0.3, vertical_path(), 0.02, 40, opt) - 2.0 * I);
    const double d2 = std::abs(wronskian(p, 0.3, vertical_path(), 0.01, 40, opt) - 2.0 * I);
    CHECK(d1 < 1e-3);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(wronskian_profile(p, 0.3, vertical_path(), 0.02, 0.0, 40, opt).defect < 1e-9);
}

TEST_CASE("exact WKB solution solves the system along the path")
{
    // phi = U^{-1} psi satisfies h phi_1' = (V - i eps) phi_2, h phi_2' = -(V + i eps) phi_1.
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3, h = 0.05, d = 1e-4;
    ResumOptions opt;
    opt.exclusion_radius = 0.1;
    const cplx b(1.2, 0.5), e(1.0, 0.0);
    auto psi_at = [&](cplx end) {
        PolylinePath path;
        path.waypoints = {b, end};
        return exact_wkb_solution(p, eps, {0.0, b, 1}, path, h, 40, opt);
    };
    const Vec2 lo = psi_at(e - d), mid = psi_at(e), hi = psi_at(e + d);
    Mat2 Uinv;
    Uinv << 1.0, -I, -I, 1.0;
    const Vec2 phi = Uinv * mid, dphi = Uinv * (hi - lo) / (2 * d);
    const double V = p(e.real());
    CHECK(std::abs(h * dphi(0) - (V - I * eps) * phi(1)) < 1e-6 * phi.norm());
    CHECK(std::abs(h * dphi(1) + (V + I * eps) * phi(0)) < 1e-6 * phi.norm());
}

TEST_CASE("near-crossing leading terms: error is linear in mu")
{
    // relative difference O(sqrt h) + O(eps^2/h); at fixed h the mu part dominates
    const Potential p = Potential::preset("one_zero");
    const double h = 0.001;
    std::vector<double> diffs;
    for (double mu : {0.01, 0.001}) {
        const auto r = leading_terms_near_crossing(p, 0, std::sqrt(mu * h), h, 4.5 * std::sqrt(h));
        diffs.push_back(std::max(r.rel_diff_plus, r.rel_diff_minus));
        const auto l = leading_terms_near_crossing(p, 0, std::sqrt(mu * h), h, -4.5 * std::sqrt(h));
        CHECK_FALSE(l.right);
        CHECK(std::max(l.rel_diff_plus, l.rel_diff_minus) < 2 * mu);
    }
    CHECK(std::log10(diffs[0] / diffs[1]) == doctest::Approx(1.0).epsilon(0.05));
    // fixed mu, smaller h: no growth
    const auto r = leading_terms_near_crossing(p, 0, std::sqrt(0.01 * 2.5e-4), 2.5e-4, 4.5 * std::sqrt(2.5e-4));
    CHECK(r.rel_diff_plus < 1.05 * diffs[0]);
    CHECK_THROWS_AS(leading_terms_near_crossing(p, 0, 0.003, 0.001, 0.01), LabError);
}

TEST_CASE("doubling lambda0 shrinks the annulus estimate about fourfold")
{
    const Potential p = Potential::preset("one_zero");
    const double a = annulus_error_estimate(p, 0, 0.003, 0.001, 3.0);
    const double b = annulus_error_estimate(p, 0, 0.003, 0.001, 6.0);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.15));
}
