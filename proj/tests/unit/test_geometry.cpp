#include "lzlab/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lzlab;

namespace {

constexpr double pi = std::numbers::pi;

// Plain composite Simpson on [a, b].
template <class F>
double simpson(F f, double a, double b, int n = 20000)
{
    const double d = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * d);
    return s * d / 3.0;
}

}  // namespace

TEST_CASE("tanh turning point and action in closed form")
{
    // tanh(i theta) = i tan theta, so zeta = i atan(eps) and
    // A = 2i int_0^{atan eps} sqrt(eps^2 - tan^2) = i pi (sqrt(1 + eps^2) - 1).
    const Potential p = Potential::preset("one_zero");
    for (double eps : {0.01, 0.1, 0.35}) {
        const cplx z = turning_point(p, 0, eps);
        CHECK(std::abs(z - cplx(0.0, std::atan(eps))) < 1e-12);
        const cplx A = action_A(p, 0, eps);
        CHECK(std::abs(A.real()) < 1e-11);
        CHECK(A.imag() == doctest::Approx(pi * (std::sqrt(1 + eps * eps) - 1)).epsilon(1e-10));
    }
}

TEST_CASE("two-zero inner action at eps = 0")
{
    // 2 int_{-1}^{1} (1 - t^2)/(1 + t^2) dt = 2 (pi - 2)
    const Potential p = Potential::preset("two_zero");
    CHECK(action_R0(p, 0) == doctest::Approx(2 * (pi - 2)).epsilon(1e-12));
    const double eps = 0.2;
    const double oracle = 2 * simpson([&](double t) { return std::hypot(p(t), eps); }, -1.0, 1.0);
    CHECK(action_R(p, 0, eps) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("actions at infinity against a truncated Simpson sum")
{
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.3, lam = std::hypot(1.0, eps);
    // tail beyond 30 is below e^-60
    const double oracle = 2 * simpson([&](double t) { return std::hypot(std::tanh(t), eps) - lam; }, 0.0, 30.0, 200000);
    const double Ar = action_infinity(p, Side::right, eps);
    CHECK(Ar == doctest::Approx(oracle).epsilon(1e-9));
    // oriented integral to -inf
    CHECK(action_infinity(p, Side::left, eps) == doctest::Approx(-Ar).epsilon(1e-12));
}

TEST_CASE("residual phase integral vanishes at infinity and matches the action")
{
    const Potential p = Potential::preset("two_zero");
    const double eps = 0.25;
    // oriented from +inf to t
    CHECK(-2 * residual_phase_integral(p, Side::right, eps, p.zeros()[0]) ==
          doctest::Approx(action_infinity(p, Side::right, eps)).epsilon(1e-10));
    CHECK(std::abs(residual_phase_integral(p, Side::right, eps, 1e6)) < 1e-5);
}

TEST_CASE("geometry bundle is consistent")
{
    const Potential p = Potential::preset("two_zero");
    const auto g = compute_geometry(p, 0.2);
    REQUIRE(g.turning_points.size() == 2);
    CHECK(g.actions_R.size() == 1);
    CHECK(g.lambda_right == doctest::Approx(std::hypot(1.0, 0.2)));
    for (int k = 0; k < 2; ++k) {
        const cplx V = p(g.turning_points[k]);
        CHECK(std::abs(V * V + 0.04) < 1e-12);
        CHECK(g.turning_points[k].imag() > 0);
    }
}

TEST_CASE("alpha and K pick the steepest crossings")
{
    const std::vector<double> v{1.0, 2.0, 2.0};
    const std::vector<cplx> A{cplx(0, 0.1), cplx(0, 0.5), cplx(0.3, 0.4)};
    const auto r = alpha_and_K(v, A);
    CHECK(r.K == std::vector<int>{1, 2});
    CHECK(r.alpha == doctest::Approx(0.4));
}
