#pragma once

#include "lzlab/error.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace lzlab {

using cplx = std::complex<double>;

// 32-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre32 {
    std::array<double, 32> x{};
    std::array<double, 32> w{};
};
const GaussLegendre32& gauss_legendre_32();

template <class F>
auto gl_panel(F&& f, double a, double b)
{
    const auto& q = gauss_legendre_32();
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    decltype(f(a)) s{};
    for (int i = 0; i < 32; ++i) s += q.w[i] * f(c + r * q.x[i]);
    return s * r;
}

namespace detail {

template <class F, class T>
T adaptive_gl_rec(F& f, double a, double b, T whole, double rel_tol, double abs_tol, int depth, int& panels)
{
    const double m = 0.5 * (a + b);
    T left = gl_panel(f, a, m), right = gl_panel(f, m, b);
    panels += 2;
    T both = left + right;
    if (std::abs(both - whole) <= std::max(abs_tol, rel_tol * std::abs(both)) || depth >= 50) return both;
    if (panels > 400000) throw numerical_error("adaptive quadrature failed to converge");
    return adaptive_gl_rec(f, a, m, left, rel_tol, 0.5 * abs_tol, depth + 1, panels) +
           adaptive_gl_rec(f, m, b, right, rel_tol, 0.5 * abs_tol, depth + 1, panels);
}

}  // namespace detail

// Composite 32-node Gauss-Legendre with panel bisection until successive refinements agree.
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-300)
{
    using T = decltype(f(a));
    if (a == b) return T{};
    int panels = 1;
    T whole = gl_panel(f, a, b);
    return detail::adaptive_gl_rec(f, a, b, whole, rel_tol, abs_tol, 0, panels);
}

// Integral over [a, +inf) (dir=+1) or (-inf, a] (dir=-1) through t = a + dir*x/(1-x).
template <class F>
auto integrate_to_infinity(F&& f, double a, int dir, double rel_tol = 1e-12, double abs_tol = 1e-300)
{
    auto g = [&](double x) {
        double u = 1.0 - x;
        return f(a + dir * x / u) / (u * u);
    };
    return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

// Continues a square root sqrt(q(s)) along a real parameter. Each new value is the root
// closest to its predecessor; when the two candidates are nearly equidistant the step is
// bisected so the sheet cannot jump silently.
class SqrtContinuation {
public:
    explicit SqrtContinuation(cplx start) : value_(start) {}
    cplx value() const { return value_; }

    template <class Q>
    cplx advance(Q&& q, double s_from, double s_to, int depth = 0)
    {
        cplx r = std::sqrt(q(s_to));
        if (std::abs(r + value_) < std::abs(r - value_)) r = -r;
        // Accept when the new root lies within pi/4 of the previous argument.
        double turn = std::abs(std::arg(r / value_));
        if (r != cplx(0.0) && value_ != cplx(0.0) && turn > M_PI / 4) {
            if (depth > 48) throw numerical_error("square-root branch ambiguity: continuation step cannot be resolved");
            double mid = 0.5 * (s_from + s_to);
            advance(q, s_from, mid, depth + 1);
            return advance(q, mid, s_to, depth + 1);
        }
        value_ = r;
        return r;
    }

    void reset(cplx v) { value_ = v; }

private:
    cplx value_;
};

}  // namespace lzlab
