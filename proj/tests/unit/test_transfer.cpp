#include "lzlab/asymptotics.hpp"
#include "lzlab/gamma.hpp"
#include "lzlab/transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lzlab;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<cplx> phases(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    std::vector<cplx> out(n);
    for (auto& x : out) x = std::polar(1.0, u(rng));
    return out;
}

}  // namespace

TEST_CASE("branching constants match their definition")
{
    for (double mu : {1e-3, 0.05, 0.4})
        for (double v : {1.0, 2.5}) {
            const auto c = branching_constants(mu, v);
            const double x = mu / (2 * v);
            const cplx g = cplx(0, -1) * std::sqrt(v / (pi * mu)) * std::exp(cplx(0, -x) * std::log(mu)) *
                           complex_gamma(cplx(1, -x));
            CHECK(std::abs(c.gamma - g) < 1e-12 * std::abs(g));
            CHECK(std::abs(c.p - g * std::exp(pi * mu / (4 * v))) < 1e-12 * std::abs(c.p));
            CHECK(std::abs(c.q - g * std::exp(-pi * mu / (4 * v))) < 1e-12 * std::abs(c.q));
            // |Gamma(1 - ix)|^2 = pi x / sinh(pi x)
            CHECK(std::norm(c.p) - std::norm(c.q) == doctest::Approx(1.0).epsilon(1e-12));
        }
    CHECK(branching_phase(0.1) == doctest::Approx(-0.75 * pi + 0.1 * std::log(0.1)));
}

TEST_CASE("local transfer entries")
{
    const double mu = 0.03;
    const auto c = branching_constants(mu);
    const Mat2 t = local_transfer_nonadiabatic(mu);
    const cplx b = std::exp(cplx(0, branching_phase(mu))) / std::conj(c.p), cc = c.q / (cplx(0, 1) * c.p);
    CHECK(std::abs(t(0, 0) - b) < 1e-14);
    CHECK(std::abs(t(1, 1) - std::conj(b)) < 1e-14);
    CHECK(std::abs(t(0, 1) - cc) < 1e-14);
    CHECK(std::abs(t(1, 0) - cc) < 1e-14);
    CHECK_THROWS_AS(local_transfer_nonadiabatic(0.5), LabError);
}

TEST_CASE("ring multiplication equals the dense product")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    auto rc = [&] { return cplx(g(rng), g(rng)); };
    for (int i = 0; i < 200; ++i) {
        const RingElement x{rc(), rc(), rc(), rc()}, y{rc(), rc(), rc(), rc()};
        CHECK(((x * y).to_matrix() - x.to_matrix() * y.to_matrix()).cwiseAbs().maxCoeff() == 0.0);
        const RingElement back = RingElement::from_matrix(x.to_matrix());
        CHECK(back.d1 == x.d1);
        CHECK(back.n1 == x.n1);
        CHECK(back.n2 == x.n2);
    }
}

TEST_CASE("single-factor expansion is exact")
{
    std::mt19937_64 rng(5);
    const auto a = phases(rng, 2);
    const std::vector<cplx> b{cplx(0.01, 0.02)}, c{cplx(0.9, -0.3)};
    // (a0 D1 + conj a0 D2)(a1 b D1 + conj(a1 b) D2 + a1 c N1 + conj a1 c N2)
    const RingElement prod = RingElement{a[0], std::conj(a[0]), 0.0, 0.0} * chain_factor(a[1], b[0], c[0]);
    CHECK(std::abs(prod.d1 - a[0] * a[1] * b[0]) < 1e-15);
    CHECK(std::abs(prod.n2 - a[0] * std::conj(a[1]) * c[0]) < 1e-15);
    const auto st = sigma_tau(a, b, c);
    CHECK(std::abs(st.sigma - prod.n2) < 1e-15);
    CHECK(std::abs(st.tau - prod.d1) < 1e-15);
}

TEST_CASE("tau squared double sum equals |tau|^2")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 6; ++n) {
        const auto a = phases(rng, n + 1);
        std::vector<cplx> b(n), c(n);
        for (auto& x : b) x = cplx(g(rng), g(rng));
        for (auto& x : c) x = cplx(g(rng), g(rng));
        const cplx tau = tau_closed_form(a, b, c);
        CHECK(tau_squared(a, b, c) == doctest::Approx(std::norm(tau)).epsilon(1e-12));
    }
}

TEST_CASE("sigma/tau size mismatch is rejected")
{
    CHECK_THROWS_AS(sigma_tau({1.0, 1.0}, {0.1, 0.1}, {1.0}), LabError);
}

TEST_CASE("phase transfer moduli")
{
    const auto g = compute_geometry(Potential::preset("two_zero"), 0.05);
    const auto pt = phase_transfers(g, 0.02);
    REQUIRE(pt.a.size() == 1);
    CHECK(std::abs(pt.a[0]) == doctest::Approx(1.0).epsilon(1e-6));
    // the boundary phase carries half the tunnelling exponent
    CHECK(std::abs(pt.a_right) == doctest::Approx(std::exp(-g.actions_A[0].imag() / (2 * 0.02))).epsilon(1e-10));
}

TEST_CASE("non-adiabatic chain approaches 1 - pi mu for one crossing")
{
    const Potential p = Potential::preset("one_zero");
    const double h = 0.01, mu = 1e-3, eps = std::sqrt(mu * h);
    const auto chain = assemble_chain(p, eps, h, Regime::nonadiabatic);
    CHECK(chain.entries.size() == 3);
    const auto pr = chain_product(chain);
    CHECK(pr.probability == doctest::Approx(1.0 - pi * mu).epsilon(1e-4));
    CHECK(pr.probability == doctest::Approx(landau_zener_exact(1.0, eps, h)).epsilon(1e-5));
}

TEST_CASE("adiabatic chain reproduces the action exponent")
{
    const Potential p = Potential::preset("one_zero");
    const double eps = 0.5, h = 0.02;
    const auto g = compute_geometry(p, eps);
    const auto pr = chain_product(assemble_chain(p, eps, h, Regime::adiabatic));
    CHECK(pr.probability == doctest::Approx(std::exp(-2 * g.actions_A[0].imag() / h)).epsilon(1e-6));
}
