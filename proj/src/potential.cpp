#include "lzlab/potential.hpp"

#include "lzlab/error.hpp"
#include "lzlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lzlab {

namespace {

constexpr double zero_grid_spacing = 0.05;
constexpr double degenerate_slope = 1e-8;

std::string join(const std::vector<double>& v)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

}  // namespace

Potential Potential::tanh_scaled(double a)
{
    if (!(a > 0.0) || !std::isfinite(a)) throw config_error("tanh_scaled: scale a must be positive");
    Potential p;
    p.family_ = Family::tanh_scaled;
    p.a_ = a;
    p.window_lo_ = -10.0 / a;
    p.window_hi_ = 10.0 / a;
    p.description_ = "tanh_scaled(a=" + join({a}) + ")";
    p.finalize();
    return p;
}

Potential Potential::tanh_product(std::vector<double> offsets)
{
    if (offsets.empty()) throw config_error("tanh_product: offsets must be non-empty");
    std::sort(offsets.begin(), offsets.end());
    for (std::size_t i = 1; i < offsets.size(); ++i)
        if (offsets[i] - offsets[i - 1] < 1e-6) throw config_error("tanh_product: offsets must be distinct");
    Potential p;
    p.family_ = Family::tanh_product;
    p.offsets_ = offsets;
    p.window_lo_ = offsets.front() - 5.0;
    p.window_hi_ = offsets.back() + 5.0;
    p.description_ = "tanh_product(offsets=" + join(offsets) + ")";
    p.finalize();
    return p;
}

Potential Potential::rational(std::vector<double> numerator, std::vector<double> denominator)
{
    poly::trim(numerator);
    poly::trim(denominator);
    if (numerator.empty()) throw config_error("rational: numerator is identically zero");
    if (denominator.empty()) throw config_error("rational: denominator is identically zero");
    if (numerator.size() > denominator.size())
        throw config_error("rational: numerator degree exceeds denominator degree (V unbounded)");
    for (const cplx& r : poly::roots(denominator))
        if (std::abs(r.imag()) < 1e-10 * std::max(1.0, std::abs(r)))
            throw config_error("rational: denominator has a real root (pole on the real axis)");
    Potential p;
    p.family_ = Family::rational;
    p.num_ = std::move(numerator);
    p.den_ = std::move(denominator);
    double bound = poly::cauchy_bound(p.num_);
    p.window_lo_ = -bound - 1.0;
    p.window_hi_ = bound + 1.0;
    p.description_ = "rational(num=[" + join(p.num_) + "],den=[" + join(p.den_) + "])";
    p.finalize();
    return p;
}

Potential Potential::rational_pair(const std::vector<double>& zeros)
{
    if (zeros.empty() || zeros.size() % 2 != 0)
        throw config_error("rational_pair: needs an even, non-zero number of zeros so both limits exist");
    std::vector<double> num{1.0};
    for (double z : zeros) num = poly::multiply(num, {1.0, -z});
    std::vector<double> den{1.0};
    for (std::size_t i = 0; i < zeros.size() / 2; ++i) den = poly::multiply(den, {1.0, 0.0, 1.0});
    Potential p = rational(num, den);
    p.description_ = "rational_pair(zeros=" + join(zeros) + ")";
    return p;
}

std::vector<std::string> Potential::preset_names()
{
    return {"one_zero", "two_zero", "tanh_pair", "three_zero"};
}

Potential Potential::preset(const std::string& name)
{
    if (name == "one_zero") return tanh_scaled(1.0);
    if (name == "two_zero") return rational_pair({1.0, -1.0});
    if (name == "tanh_pair") return tanh_product({-1.5, 1.5});
    if (name == "three_zero") return tanh_product({-2.0, 0.0, 2.0});
    throw config_error("unknown potential preset '" + name + "'");
}

Potential Potential::scaled(double c) const
{
    if (c == 0.0 || !std::isfinite(c)) throw config_error("potential scale must be finite and non-zero");
    Potential p = *this;
    p.scale_ *= c;
    std::ostringstream os;
    os.precision(17);
    os << c << "*" << description_;
    p.description_ = os.str();
    p.finalize();
    return p;
}

Potential Potential::with_window(double t_min, double t_max) const
{
    if (!(t_min < t_max)) throw config_error("zero-search window must satisfy t_min < t_max");
    Potential p = *this;
    p.window_lo_ = t_min;
    p.window_hi_ = t_max;
    p.finalize();
    return p;
}

Potential Potential::with_sector_angle(double theta0) const
{
    if (!(theta0 > 0.0 && theta0 < std::numbers::pi / 2))
        throw config_error("sector angle must lie in (0, pi/2)");
    Potential p = *this;
    p.theta0_ = theta0;
    return p;
}

void Potential::finalize()
{
    switch (family_) {
    case Family::tanh_scaled:
        e_right_ = scale_;
        e_left_ = -scale_;
        break;
    case Family::tanh_product:
        e_right_ = scale_;
        e_left_ = (offsets_.size() % 2 == 0) ? scale_ : -scale_;
        break;
    case Family::rational: {
        double lim = num_.size() == den_.size() ? scale_ * num_.front() / den_.front() : 0.0;
        e_right_ = lim;
        e_left_ = lim;
        if (num_.size() == den_.size()) {
            // den_0 * N - num_0 * D has its leading term cancelled exactly.
            residual_num_.assign(num_.size(), 0.0);
            for (std::size_t i = 0; i < num_.size(); ++i)
                residual_num_[i] = den_.front() * num_[i] - num_.front() * den_[i];
            poly::trim(residual_num_);
        } else {
            residual_num_ = num_;
        }
        break;
    }
    }
    find_zeros();
}

cplx Potential::eval_unchecked(cplx t) const
{
    switch (family_) {
    case Family::tanh_scaled:
        return scale_ * std::tanh(a_ * t);
    case Family::tanh_product: {
        cplx v = scale_;
        for (double o : offsets_) v *= std::tanh(t - o);
        return v;
    }
    case Family::rational:
        return scale_ * poly::eval(num_, t) / poly::eval(den_, t);
    }
    return 0.0;
}

double Potential::operator()(double t) const
{
    switch (family_) {
    case Family::tanh_scaled:
        return scale_ * std::tanh(a_ * t);
    case Family::tanh_product: {
        double v = scale_;
        for (double o : offsets_) v *= std::tanh(t - o);
        return v;
    }
    case Family::rational:
        return scale_ * poly::eval(num_, t) / poly::eval(den_, t);
    }
    return 0.0;
}

cplx Potential::operator()(cplx t) const
{
    if (!in_sector(t)) {
        std::ostringstream os;
        os << "potential evaluated outside the analyticity sector at t=" << t;
        throw numerical_error(os.str());
    }
    return eval_unchecked(t);
}

cplx Potential::derivative(cplx t) const
{
    switch (family_) {
    case Family::tanh_scaled: {
        cplx th = std::tanh(a_ * t);
        return scale_ * a_ * (1.0 - th * th);
    }
    case Family::tanh_product: {
        // Product rule; each factor's derivative is 1 - tanh^2.
        std::vector<cplx> th;
        th.reserve(offsets_.size());
        for (double o : offsets_) th.push_back(std::tanh(t - o));
        cplx sum = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            cplx term = 1.0 - th[i] * th[i];
            for (std::size_t j = 0; j < th.size(); ++j)
                if (j != i) term *= th[j];
            sum += term;
        }
        return scale_ * sum;
    }
    case Family::rational: {
        auto [n, dn] = poly::eval_with_derivative(num_, t);
        auto [d, dd] = poly::eval_with_derivative(den_, t);
        return scale_ * (dn * d - n * dd) / (d * d);
    }
    }
    return 0.0;
}

double Potential::derivative(double t) const { return derivative(cplx(t, 0.0)).real(); }

double Potential::tail_residual(double t, int side) const
{
    switch (family_) {
    case Family::tanh_scaled:
        // tanh x - 1 = -2/(e^{2x}+1), tanh x + 1 = 2/(e^{-2x}+1)
        return side > 0 ? -2.0 * scale_ / (std::exp(2.0 * a_ * t) + 1.0)
                        : 2.0 * scale_ / (std::exp(-2.0 * a_ * t) + 1.0);
    case Family::tanh_product: {
        // V = E * prod(1 - d_i) with d_i the distance of each |tanh| factor from 1.
        double log_prod = 0.0;
        for (double o : offsets_) {
            double x = t - o;
            double d = side > 0 ? 2.0 / (std::exp(2.0 * x) + 1.0) : 2.0 / (std::exp(-2.0 * x) + 1.0);
            log_prod += std::log1p(-d);
        }
        double e = side > 0 ? e_right_ : e_left_;
        return e * std::expm1(log_prod);
    }
    case Family::rational: {
        if (residual_num_.empty()) return 0.0;
        double d = poly::eval(den_, t);
        if (num_.size() == den_.size()) return scale_ * poly::eval(residual_num_, t) / (den_.front() * d);
        return scale_ * poly::eval(num_, t) / d;
    }
    }
    return 0.0;
}

bool Potential::in_sector(cplx t) const
{
    return std::abs(t.imag()) < std::tan(theta0_) * std::sqrt(1.0 + t.real() * t.real());
}

int Potential::orientation() const
{
    if (zeros_.empty()) return 0;
    return derivative(zeros_.front()) > 0.0 ? 1 : -1;
}

std::vector<cplx> Potential::singularities() const
{
    std::vector<cplx> out;
    const double half_pi = std::numbers::pi / 2;
    switch (family_) {
    case Family::tanh_scaled:
        out.emplace_back(0.0, half_pi / a_);
        out.emplace_back(0.0, -half_pi / a_);
        break;
    case Family::tanh_product:
        for (double o : offsets_) {
            out.emplace_back(o, half_pi);
            out.emplace_back(o, -half_pi);
        }
        break;
    case Family::rational:
        out = poly::roots(den_);
        break;
    }
    return out;
}

void Potential::find_zeros()
{
    zeros_.clear();
    slopes_.clear();
    const auto& self = *this;
    auto f = [&](double t) { return self(t); };
    const int m = std::max(2, static_cast<int>(std::ceil((window_hi_ - window_lo_) / zero_grid_spacing)));
    const double dx = (window_hi_ - window_lo_) / m;
    std::vector<double> found;
    double x0 = window_lo_, f0 = f(x0);
    if (f0 == 0.0) found.push_back(x0);
    for (int i = 1; i <= m; ++i) {
        double x1 = window_lo_ + i * dx, f1 = f(x1);
        if (f1 == 0.0) {
            found.push_back(x1);
        } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            double lo = x0, hi = x1, flo = f0;
            for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
                double mid = 0.5 * (lo + hi), fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double t = 0.5 * (lo + hi);
            for (int it = 0; it < 3; ++it) {
                double d = derivative(t);
                if (d == 0.0) break;
                double step = f(t) / d;
                if (std::abs(step) > dx) break;
                t -= step;
            }
            found.push_back(t);
        }
        x0 = x1;
        f0 = f1;
    }
    std::sort(found.begin(), found.end(), std::greater<>());
    for (double t : found) {
        if (!zeros_.empty() && std::abs(zeros_.back() - t) < 1e-9) continue;
        double v = std::abs(derivative(t));
        if (v < degenerate_slope) {
            std::ostringstream os;
            os << "degenerate zero at t=" << t << " (|V'|=" << v << "); crossings must be simple";
            throw config_error(os.str());
        }
        zeros_.push_back(t);
        slopes_.push_back(v);
    }
}

double Potential::tail_exponent(int side) const
{
    double t0 = 2.0;
    for (double z : zeros_) t0 = std::max(t0, 2.0 * std::abs(z) + 1.0);
    const double floor = 1e-280;
    double prev_t = 0.0, prev_d = 0.0, slope = 0.0;
    int valid = 0;
    for (int i = 0; i < 40; ++i) {
        double t = t0 * std::ldexp(1.0, i);
        double d = std::abs(tail_residual(side * t, side));
        if (d < floor) break;
        if (valid > 0) {
            slope = std::log(d / prev_d) / std::log(t / prev_t);
            if (slope < -12.0) return exponential_tail;
        }
        prev_t = t;
        prev_d = d;
        ++valid;
    }
    if (valid < 2) return exponential_tail;
    return -slope;
}

bool ValidationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.pass; });
}

ValidationReport validate_assumptions(const Potential& p, const ValidationTolerances& tol)
{
    ValidationReport r;
    std::ostringstream os;

    {
        AssumptionCheck c{"zeros_simple", !p.zeros().empty(), ""};
        os.str("");
        os << p.crossing_count() << " zero(s)";
        for (std::size_t k = 0; k < p.zeros().size(); ++k) {
            os << "; t" << k + 1 << "=" << p.zeros()[k] << " v=" << p.slopes()[k];
            if (p.slopes()[k] < tol.degenerate_slope) c.pass = false;
        }
        c.detail = os.str();
        r.checks.push_back(c);
    }
    {
        os.str("");
        os << "E_r=" << p.e_right() << " E_l=" << p.e_left();
        r.checks.push_back({"limits_nonzero", p.e_right() != 0.0 && p.e_left() != 0.0, os.str()});
    }
    {
        if (p.crossing_count() > 0) {
            bool odd = p.crossing_count() % 2 == 1;
            bool sign_change = std::signbit(p.e_right()) != std::signbit(p.e_left());
            os.str("");
            os << "n=" << p.crossing_count() << (odd ? " odd" : " even") << ", limits "
               << (sign_change ? "differ" : "agree") << " in sign";
            r.checks.push_back({"zero_count_parity", odd == sign_change, os.str()});
        }
    }
    {
        r.tail_exponent_right = p.tail_exponent(1);
        r.tail_exponent_left = p.tail_exponent(-1);
        os.str("");
        os << "delta_right=" << r.tail_exponent_right << " delta_left=" << r.tail_exponent_left;
        bool ok = r.tail_exponent_right > tol.min_decay && r.tail_exponent_left > tol.min_decay;
        r.checks.push_back({"tail_decay", ok, os.str()});
    }
    {
        os.str("");
        os << "sgn V'(t1)=" << p.orientation();
        r.checks.push_back({"orientation", p.orientation() > 0, os.str()});
    }
    {
        bool real = true, reflect = true;
        for (int i = -40; i <= 40; ++i) {
            double x = 0.37 * i;
            cplx v = p.eval_unchecked(cplx(x, 0.0));
            if (std::abs(v.imag()) > 1e-15 * std::max(1.0, std::abs(v))) real = false;
            cplx t(x, 0.3 * std::tan(p.sector_angle()) * std::sqrt(1 + x * x));
            cplx a = p.eval_unchecked(std::conj(t)), b = std::conj(p.eval_unchecked(t));
            if (std::abs(a - b) > 1e-13 * std::max(1.0, std::abs(a))) reflect = false;
        }
        r.checks.push_back({"real_on_axis", real, "sampled on [-14.8, 14.8]"});
        r.checks.push_back({"schwarz_reflection", reflect, "V(conj t) = conj V(t) on sampled sector points"});
    }
    {
        bool ok = true;
        os.str("");
        for (const cplx& s : p.singularities()) {
            if (p.in_sector(s)) {
                ok = false;
                os << "singularity " << s << " inside sector; ";
            }
        }
        if (ok) os << "no singularity inside the sector of half-angle " << p.sector_angle();
        r.checks.push_back({"analytic_in_sector", ok, os.str()});
    }
    return r;
}

}  // namespace lzlab
