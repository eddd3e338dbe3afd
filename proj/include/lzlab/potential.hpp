#pragma once

#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace lzlab {

using cplx = std::complex<double>;

enum class Family { tanh_scaled, tanh_product, rational };

// Analytic scalar potential V(t) of the two-level Hamiltonian [[V, eps], [eps, -V]].
//
// Built-in families:
//   tanh_scaled(a)        V = tanh(a t)
//   tanh_product(o_1..m)  V = prod_i tanh(t - o_i)
//   rational(N, D)        V = N(t) / D(t), real coefficients, highest power first
//   rational_pair(z)      V = prod_i (t - z_i) / (t^2 + 1)^(m/2), m even
// Every family carries an overall real factor `scale` so that V -> -V is expressible.
class Potential {
public:
    static Potential tanh_scaled(double a);
    static Potential tanh_product(std::vector<double> offsets);
    static Potential rational(std::vector<double> numerator, std::vector<double> denominator);
    static Potential rational_pair(const std::vector<double>& zeros);
    static Potential preset(const std::string& name);
    static std::vector<std::string> preset_names();

    // Returns a copy multiplied by c (zeros are unchanged, slopes and limits rescale).
    Potential scaled(double c) const;
    // Replaces the zero-search window and the sector half-angle; zeros are recomputed.
    Potential with_window(double t_min, double t_max) const;
    Potential with_sector_angle(double theta0) const;

    Family family() const { return family_; }
    const std::string& description() const { return description_; }

    double operator()(double t) const;
    // Throws a numerical LabError when t is outside the analyticity sector.
    cplx operator()(cplx t) const;
    cplx eval_unchecked(cplx t) const;

    // V(t) - E_side evaluated without cancellation (side = +1 right, -1 left).
    double tail_residual(double t, int side) const;

    double derivative(double t) const;
    cplx derivative(cplx t) const;

    double e_right() const { return e_right_; }
    double e_left() const { return e_left_; }
    double sector_angle() const { return theta0_; }
    bool in_sector(cplx t) const;

    // Descending real zeros t_1 > ... > t_n and slopes v_k = |V'(t_k)|.
    const std::vector<double>& zeros() const { return zeros_; }
    const std::vector<double>& slopes() const { return slopes_; }
    int crossing_count() const { return static_cast<int>(zeros_.size()); }
    // sgn V'(t_1); the analysis assumes +1.
    int orientation() const;

    // Singularities closest to the real axis (one per strip of the family).
    std::vector<cplx> singularities() const;
    std::pair<double, double> window() const { return {window_lo_, window_hi_}; }

    // Fitted exponent delta of |V - E| ~ |t|^-delta on the right (+1) or left (-1) ray;
    // +infinity means faster than any power.
    double tail_exponent(int side) const;

    static constexpr double exponential_tail = std::numeric_limits<double>::infinity();

private:
    Potential() = default;
    void finalize();
    void find_zeros();

    Family family_ = Family::tanh_scaled;
    std::string description_;
    double scale_ = 1.0;
    double a_ = 1.0;
    std::vector<double> offsets_;
    std::vector<double> num_, den_;
    std::vector<double> residual_num_;  // b*N - a*D for leading coefficients a, b
    double e_right_ = 0.0, e_left_ = 0.0;
    double theta0_ = 3.14159265358979323846 / 6.0;
    double window_lo_ = -10.0, window_hi_ = 10.0;
    std::vector<double> zeros_, slopes_;
};

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;
    double tail_exponent_right = 0.0;
    double tail_exponent_left = 0.0;
    bool all_pass() const;
};

struct ValidationTolerances {
    double degenerate_slope = 1e-8;
    double min_decay = 1.0;
};

ValidationReport validate_assumptions(const Potential& p, const ValidationTolerances& tol = {});

}  // namespace lzlab
