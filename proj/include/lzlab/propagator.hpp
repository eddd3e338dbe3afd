#pragma once

#include "lzlab/dop853.hpp"
#include "lzlab/geometry.hpp"
#include "lzlab/potential.hpp"

#include <Eigen/Dense>

namespace lzlab {

using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

enum class Regime { nonadiabatic, adiabatic, critical };

struct RegimeThresholds {
    double mu0 = 0.1;         // nonadiabatic when eps^2/h <= mu0
    double adiabatic0 = 0.1;  // adiabatic when h/eps^2 <= adiabatic0
};

struct RegimeParams {
    double epsilon = 0.0;
    double h = 1.0;

    double mu() const { return epsilon * epsilon / h; }
    Regime regime(const RegimeThresholds& th = {}) const;
};

const char* regime_name(Regime r);

struct PropagationStats {
    long steps = 0;
    long rejected = 0;
    double tol = 0.0;
    double max_norm_drift = 0.0;  // max relative deviation of |psi| along the trajectory
};

// Solves i h psi' = H(t; eps) psi from t_from to t_to (either direction).
Vec2 propagate(const Potential& p, const RegimeParams& rp, double t_from, double t_to, const Vec2& psi0, double tol,
               PropagationStats* stats = nullptr);

// Propagates the columns of a 2x2 matrix together (the fundamental-matrix form of propagate).
Mat2 propagate_columns(const Potential& p, const RegimeParams& rp, double t_from, double t_to, const Mat2& m0,
                       double tol, PropagationStats* stats = nullptr, long max_steps = 50'000'000);

// Jost solution J_sign^side evaluated at real t in the asymptotic region.
Vec2 jost_vector(const Potential& p, const RegimeParams& rp, Side side, int sign, double t);

// Smallest T (doubled) with |V(+-T) - E| < 1e-3 eps on both sides.
double default_truncation(const Potential& p, double eps);

struct ScatteringOptions {
    double T = 0.0;            // 0: default_truncation
    double tol = 1e-13;
    bool check_T = true;       // rerun at 1.5 T and compare
    double t_threshold = 0.0;  // 0: max(10 tol, 1e-8) on P
    bool reverse = false;      // propagate right-to-left and invert
    long max_steps = 50'000'000;
};

struct ScatteringResult {
    Mat2 s_matrix = Mat2::Identity();
    double probability = 0.0;
    double unitarity_defect = 0.0;
    double truncation_T = 0.0;
    double t_drift_P = 0.0;
    double t_drift_S = 0.0;
    PropagationStats stats;
    double runtime_s = 0.0;
};

double unitarity_defect(const Mat2& s);

ScatteringResult scattering_matrix(const Potential& p, const RegimeParams& rp, const ScatteringOptions& opt = {});

// P = |s21|^2 with automatic truncation; exact decoupled result when eps = 0.
ScatteringResult transition_probability(const Potential& p, const RegimeParams& rp, const ScatteringOptions& opt = {});

}  // namespace lzlab
