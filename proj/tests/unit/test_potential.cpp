#include "lzlab/config.hpp"
#include "lzlab/error.hpp"
#include "lzlab/potential.hpp"

#include <doctest.h>

#include <cmath>

using namespace lzlab;

TEST_CASE("presets have the expected crossings")
{
    const Potential one = Potential::preset("one_zero");
    REQUIRE(one.crossing_count() == 1);
    CHECK(one.zeros()[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(one.slopes()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.e_right() == 1.0);
    CHECK(one.e_left() == -1.0);

    // V = (t^2 - 1)/(t^2 + 1): zeros at +-1, V'(t) = 4t/(t^2+1)^2 = +-1 there.
    const Potential two = Potential::preset("two_zero");
    REQUIRE(two.crossing_count() == 2);
    CHECK(two.zeros()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.zeros()[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(two.slopes()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.slopes()[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.orientation() == 1);
    CHECK(two(0.5) == doctest::Approx((0.25 - 1) / (0.25 + 1)));
}

TEST_CASE("zeros are descending and are zeros")
{
    for (const auto& name : Potential::preset_names()) {
        const Potential p = Potential::preset(name);
        for (int k = 0; k < p.crossing_count(); ++k) {
            CHECK(std::abs(p(p.zeros()[k])) < 1e-12);
            if (k > 0) CHECK(p.zeros()[k] < p.zeros()[k - 1]);
        }
    }
}

TEST_CASE("derivative matches a central difference")
{
    const Potential p = Potential::tanh_product({-1.0, 0.5});
    for (double t : {-2.0, -0.3, 0.7, 1.9}) {
        const double d = 1e-5;
        CHECK(p.derivative(t) == doctest::Approx((p(t + d) - p(t - d)) / (2 * d)).epsilon(1e-8));
        CHECK(std::abs(p.derivative(cplx(t, 0.1)) - (p(cplx(t + d, 0.1)) - p(cplx(t - d, 0.1))) / (2 * d)) < 1e-8);
    }
}

TEST_CASE("tail residual avoids cancellation")
{
    const Potential p = Potential::preset("one_zero");
    // tanh t - 1 = -2/(e^{2t} + 1)
    CHECK(p.tail_residual(20.0, 1) == doctest::Approx(-2.0 / (std::exp(40.0) + 1.0)).epsilon(1e-10));
    const Potential two = Potential::preset("two_zero");
    // (t^2 - 1)/(t^2 + 1) - 1 = -2/(t^2 + 1)
    CHECK(two.tail_residual(1e4, 1) == doctest::Approx(-2.0 / (1e8 + 1.0)).epsilon(1e-10));
}

TEST_CASE("scaling flips orientation and keeps zeros")
{
    const Potential p = Potential::preset("two_zero").scaled(-1.0);
    CHECK(p.orientation() == -1);
    CHECK(p.zeros()[0] == doctest::Approx(1.0));
    CHECK(p(0.3) == doctest::Approx(-Potential::preset("two_zero")(0.3)));
}

TEST_CASE("validation accepts presets and reports tails")
{
    const auto rep = validate_assumptions(Potential::preset("two_zero"));
    CHECK(rep.all_pass());
    CHECK(rep.tail_exponent_right == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::isinf(validate_assumptions(Potential::preset("one_zero")).tail_exponent_right));
}

TEST_CASE("malformed rational potentials are rejected")
{
    CHECK_THROWS_AS(Potential::rational({1.0, 0.0, 0.0}, {1.0, 0.0}), LabError);  // unbounded
    CHECK_THROWS_AS(Potential::rational({1.0}, {1.0, -1.0}), LabError);           // real pole
    CHECK_THROWS_AS(Potential::rational_pair({1.0}), LabError);                    // odd count
    CHECK_THROWS_AS(Potential::preset("nope"), LabError);
}

TEST_CASE("complex evaluation outside the sector throws")
{
    const Potential p = Potential::preset("one_zero");
    CHECK_NOTHROW(p(cplx(0.0, 0.2)));
    CHECK_THROWS_AS(p(cplx(0.0, 5.0)), LabError);
}

TEST_CASE("potential tables build the same potentials")
{
    const auto j = nlohmann::json::parse(R"({"family": "rational_pair", "params": {"zeros": [1, -1]}})");
    const Potential p = build_potential(j);
    CHECK(p(0.3) == doctest::Approx(Potential::preset("two_zero")(0.3)));
    const auto s = nlohmann::json::parse(R"({"family": "tanh_scaled", "params": {"a": 2, "scale": -1}})");
    CHECK(build_potential(s)(0.4) == doctest::Approx(-std::tanh(0.8)));
    CHECK_THROWS_AS(build_potential(nlohmann::json::parse(R"({"family": "spline"})")), LabError);
}
