#pragma once

#include "lzlab/potential.hpp"

#include <complex>
#include <vector>

namespace lzlab {

enum class Side { right, left };

inline int side_sign(Side s) { return s == Side::right ? 1 : -1; }

// Complex turning point zeta_k with V(zeta_k) = i sgn(V'(t_k)) eps and Im zeta_k > 0.
// Crossing indices are 0-based here (crossing k is the paper's t_{k+1}).
cplx turning_point(const Potential& p, int k, double eps);

// A_k = 2 int_{t_k}^{zeta_k} sqrt(V^2 + eps^2) dt along the straight segment, root = +eps at t_k.
cplx action_A(const Potential& p, int k, double eps);

// R_j = 2 int_{t_{j+1}}^{t_j} sqrt(V^2 + eps^2) dt, j = 0..n-2.
double action_R(const Potential& p, int j, double eps);

// The eps = 0 limit 2 int |V| over the same interval.
double action_R0(const Potential& p, int j);

// A_r = 2 int_{t_1}^{+inf} (sqrt(V^2+eps^2) - lambda_r) dt, A_l likewise from t_n to -inf.
double action_infinity(const Potential& p, Side side, double eps);

// int_{t}^{+-inf} (sqrt(V^2+eps^2) - lambda) ds along the real axis (sign of the orientation kept).
double residual_phase_integral(const Potential& p, Side side, double eps, double t);

struct CrossingGeometry {
    double epsilon = 0.0;
    std::vector<double> crossings;
    std::vector<double> slopes;
    std::vector<cplx> turning_points;
    std::vector<cplx> actions_A;
    std::vector<double> actions_R;
    std::vector<double> actions_R0;
    double action_right = 0.0, action_left = 0.0;
    double lambda_right = 0.0, lambda_left = 0.0;
};

CrossingGeometry compute_geometry(const Potential& p, double eps);

struct AlphaK {
    double alpha = 0.0;
    std::vector<int> K;  // 0-based crossing indices attaining max v_k
};

AlphaK alpha_and_K(const std::vector<double>& slopes, const std::vector<cplx>& actions_A, double tie_tol = 1e-9);
AlphaK alpha_and_K(const CrossingGeometry& g, double tie_tol = 1e-9);

}  // namespace lzlab
