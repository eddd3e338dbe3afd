#include "lzlab/gamma.hpp"

#include "lzlab/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lzlab {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

using cd = std::complex<double>;

cd lanczos_log_gamma(cd z)
{
    z -= 1.0;
    cd x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cd t = z + kG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cd principal(cd w)
{
    double im = std::remainder(w.imag(), 2.0 * std::numbers::pi);
    if (im <= -std::numbers::pi) im += 2.0 * std::numbers::pi;
    return {w.real(), im};
}

}  // namespace

std::complex<double> complex_log_gamma(std::complex<double> z)
{
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        std::ostringstream os;
        os << "log-gamma pole at z = " << z.real();
        throw numerical_error(os.str());
    }
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        const cd s = std::sin(std::numbers::pi * z);
        return principal(std::log(std::numbers::pi) - std::log(s) - lanczos_log_gamma(1.0 - z));
    }
    return principal(lanczos_log_gamma(z));
}

std::complex<double> complex_gamma(std::complex<double> z) { return std::exp(complex_log_gamma(z)); }

}  // namespace lzlab
