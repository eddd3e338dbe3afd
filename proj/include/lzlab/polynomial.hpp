#pragma once

// Dense real polynomials, coefficients stored highest power first.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace lzlab::poly {

inline void trim(std::vector<double>& c)
{
    std::size_t i = 0;
    while (i < c.size() && c[i] == 0.0) ++i;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i));
}

template <class T>
T eval(const std::vector<double>& c, T x)
{
    T acc = 0.0;
    for (double a : c) acc = acc * x + a;
    return acc;
}

template <class T>
std::pair<T, T> eval_with_derivative(const std::vector<double>& c, T x)
{
    T p = 0.0, dp = 0.0;
    for (double a : c) {
        dp = dp * x + p;
        p = p * x + a;
    }
    return {p, dp};
}

inline std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// 1 + max |a_i / a_0|: every root lies inside this radius.
inline double cauchy_bound(const std::vector<double>& c)
{
    double m = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) m = std::max(m, std::abs(c[i] / c[0]));
    return 1.0 + m;
}

// All complex roots by Aberth-Ehrlich iteration.
inline std::vector<std::complex<double>> roots(const std::vector<double>& c)
{
    using cd = std::complex<double>;
    const std::size_t n = c.size() ? c.size() - 1 : 0;
    std::vector<cd> z(n);
    if (n == 0) return z;
    const double r = cauchy_bound(c);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(0.5 * r, 2.0 * M_PI * (k + 0.25) / static_cast<double>(n));
    for (int it = 0; it < 500; ++it) {
        double change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            auto [p, dp] = eval_with_derivative(c, z[k]);
            if (p == cd(0.0)) continue;
            cd ratio = p / dp;
            cd s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            cd step = ratio / (1.0 - ratio * s);
            z[k] -= step;
            change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[k])));
        }
        if (change < 1e-15) break;
    }
    return z;
}

}  // namespace lzlab::poly
