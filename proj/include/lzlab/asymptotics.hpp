#pragma once

#include "lzlab/geometry.hpp"
#include "lzlab/propagator.hpp"

#include <string>
#include <vector>

namespace lzlab {

struct AsymptoticPrediction {
    Regime regime = Regime::nonadiabatic;
    double value = 0.0;      // predicted P, clipped to [0, 1]
    double log_value = 0.0;  // log of the unclipped prediction (adiabatic values underflow quickly)
    double prefactor = 0.0;  // C_n(h), or |action sum|^2 e^{2 alpha/h} in the adiabatic case
    double alpha = 0.0;
    std::string error_orders;
    double epsilon = 0.0, h = 0.0, mu = 0.0;
    bool order_degenerate = false;  // even n with C_n = 0: no leading term
    std::vector<std::string> warnings;
};

// int_{t_k}^{t_j} V dt between crossings (0-based indices).
double crossing_integral(const Potential& p, int j, int k);

// C_n(h) = |sum_k e^{i phi_k} / sqrt(v_k)|^2 with phi_k = (2/h) int_{t_1}^{t_k} V + (pi/4) sgn V'(t_k).
// Expanded, this is sum 1/v_k + 2 sum_{j<k} cos(phi_j - phi_k) / sqrt(v_j v_k).
double prefactor_Cn(const Potential& p, double h);

// 1 - pi C_n mu (odd n) or pi C_n mu (even n).
AsymptoticPrediction predict_nonadiabatic(const Potential& p, double eps, double h, const RegimeThresholds& th = {});

// |sum_{k in K} (-1)^k e^{(i/h)(A_k + Re A_k - sum_{j<k} R_j)}|^2 over the steepest crossings K.
AsymptoticPrediction predict_adiabatic(const CrossingGeometry& g, double h, const RegimeThresholds& th = {},
                                       double tie_tol = 1e-9);

double landau_zener_exact(double v, double eps, double h);

struct BohrSommerfeldRoots {
    std::vector<double> roots;  // ascending
    bool closed_form = false;   // n = 2 with equal slopes
    std::string note;           // set when no root exists in the range
};

// Values of h in [h_min, h_max] where C_n(h) vanishes. For n = 2 and v_1 = v_2 these are
// s int_{t_2}^{t_1} V = (N - 1/4) pi h with s = -sgn V'(t_1); otherwise zeros are located as
// minima of C_n, since C_n >= 0 touches zero without changing sign.
BohrSommerfeldRoots bohr_sommerfeld_roots(const Potential& p, double h_min, double h_max);

}  // namespace lzlab
