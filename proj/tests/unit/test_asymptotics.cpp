#include "lzlab/asymptotics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lzlab;

namespace {

constexpr double pi = std::numbers::pi;

// int_{-1}^{1} (t^2 - 1)/(t^2 + 1) dt = 2 - pi
constexpr double two_zero_integral = 2.0 - pi;

}  // namespace

TEST_CASE("crossing integral of the two-zero preset")
{
    const Potential p = Potential::preset("two_zero");
    CHECK(crossing_integral(p, 0, 1) == doctest::Approx(two_zero_integral).epsilon(1e-12));
}

TEST_CASE("C_1 is the inverse slope")
{
    CHECK(prefactor_Cn(Potential::preset("one_zero"), 0.03) == doctest::Approx(1.0));
    CHECK(prefactor_Cn(Potential::tanh_scaled(2.0), 0.03) == doctest::Approx(0.5));
}

TEST_CASE("C_2 of the two-zero preset in closed form")
{
    const Potential p = Potential::preset("two_zero");
    for (double h : {0.007, 0.013, 0.04}) {
        const double x = (2 / h) * two_zero_integral;
        CHECK(prefactor_Cn(p, h) == doctest::Approx(2 * (1 - std::sin(x))).epsilon(1e-9));
        // the same expression on -V, where it reads 2(1 + sin x') with x' = -x
        CHECK(prefactor_Cn(p.scaled(-1.0), h) == doctest::Approx(2 * (1 + std::sin(-x))).epsilon(1e-9));
    }
}

TEST_CASE("Bohr-Sommerfeld roots satisfy the quantisation rule")
{
    const Potential p = Potential::preset("two_zero");
    const auto bs = bohr_sommerfeld_roots(p, 0.005, 0.05);
    CHECK(bs.closed_form);
    REQUIRE(bs.roots.size() >= 3);
    for (double h : bs.roots) {
        const double N = -two_zero_integral / (pi * h) + 0.25;
        CHECK(std::abs(N - std::round(N)) < 1e-9);
        CHECK(prefactor_Cn(p, h) < 1e-9);
    }
    for (std::size_t i = 1; i < bs.roots.size(); ++i) CHECK(bs.roots[i] > bs.roots[i - 1]);
}

TEST_CASE("minimum search finds the closed-form roots")
{
    // equal slopes but offsets that differ from the rational preset: both routes must agree on C_n = 0
    const Potential p = Potential::preset("tanh_pair");
    const auto bs = bohr_sommerfeld_roots(p, 0.02, 0.2);
    for (double h : bs.roots) CHECK(prefactor_Cn(p, h) < 1e-8);
    CHECK_THROWS_AS(bohr_sommerfeld_roots(Potential::preset("one_zero"), 0.01, 0.1), LabError);
}

TEST_CASE("non-adiabatic predictions by parity")
{
    const Potential one = Potential::preset("one_zero"), two = Potential::preset("two_zero");
    const double h = 0.01, mu = 0.02, eps = std::sqrt(mu * h);
    CHECK(predict_nonadiabatic(one, eps, h).value == doctest::Approx(1 - pi * mu));
    CHECK(predict_nonadiabatic(two, eps, h).value == doctest::Approx(pi * mu * prefactor_Cn(two, h)));
    CHECK_THROWS_AS(predict_nonadiabatic(one, 0.3, h), LabError);
}

TEST_CASE("adiabatic prediction for one crossing is the action exponential")
{
    const Potential p = Potential::preset("one_zero");
    const auto g = compute_geometry(p, 0.4);
    const auto pr = predict_adiabatic(g, 0.01);
    CHECK(pr.log_value == doctest::Approx(-2 * g.actions_A[0].imag() / 0.01).epsilon(1e-12));
    CHECK(pr.alpha == doctest::Approx(g.actions_A[0].imag()));
}

TEST_CASE("Landau-Zener closed form")
{
    CHECK(landau_zener_exact(2.0, 0.1, 0.01) == doctest::Approx(std::exp(-pi * 0.5)));
}
