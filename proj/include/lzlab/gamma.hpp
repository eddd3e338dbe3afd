#pragma once

#include <complex>

namespace lzlab {

// Principal value of log Gamma(z) (imaginary part in (-pi, pi]); Lanczos g=7, n=9.
// Throws a numerical LabError at the poles z = 0, -1, -2, ...
std::complex<double> complex_log_gamma(std::complex<double> z);

std::complex<double> complex_gamma(std::complex<double> z);

}  // namespace lzlab
