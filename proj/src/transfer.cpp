#include "lzlab/transfer.hpp"

#include "lzlab/error.hpp"
#include "lzlab/gamma.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lzlab {

namespace {

constexpr cplx I(0.0, 1.0);

// Iterated conjugation C^(l): conjugate when l is odd.
cplx conj_pow(int l, cplx z) { return (l % 2 != 0) ? std::conj(z) : z; }

void require_nonadiabatic(double mu, const RegimeThresholds& th)
{
    if (!(mu > 0.0)) throw config_error("non-adiabatic transfer: mu must be positive");
    if (mu > th.mu0) {
        std::ostringstream os;
        os << "regime error: mu = " << mu << " above the non-adiabatic threshold " << th.mu0;
        throw config_error(os.str());
    }
}

}  // namespace

BranchingConstants branching_constants(double mu, double v)
{
    if (!(mu > 0.0)) throw config_error("branching_constants: mu must be positive");
    if (!(v > 0.0)) throw config_error("branching_constants: slope must be positive");
    const double y = mu / (2.0 * v);
    // mu^{-i y} Gamma(1 - i y) combined in the exponent to keep a single branch.
    const cplx lg = complex_log_gamma(cplx(1.0, -y)) - I * y * std::log(mu);
    BranchingConstants bc;
    bc.gamma = -I * std::sqrt(v / (std::numbers::pi * mu)) * std::exp(lg);
    bc.p = bc.gamma * std::exp(std::numbers::pi * mu / (4.0 * v));
    bc.q = bc.gamma * std::exp(-std::numbers::pi * mu / (4.0 * v));
    return bc;
}

double branching_phase(double mu) { return -0.75 * std::numbers::pi + mu * std::log(mu); }

namespace {

Mat2 transfer_from_constants(const BranchingConstants& bc, double mu)
{
    const cplx b = std::polar(1.0, branching_phase(mu)) / std::conj(bc.p);
    // q/p is real; take the real part so the two off-diagonal entries are identical.
    const cplx c = (bc.q / bc.p).real() / I;
    Mat2 t;
    t << b, c, c, std::conj(b);
    return t;
}

}  // namespace

Mat2 local_transfer_nonadiabatic(double mu, const RegimeThresholds& th)
{
    require_nonadiabatic(mu, th);
    return transfer_from_constants(branching_constants(mu, 1.0), mu);
}

Mat2 scaled_transfer_k(const Potential& p, int k, double eps, double h, const RegimeThresholds& th)
{
    if (k < 0 || k >= p.crossing_count()) throw config_error("scaled_transfer_k: crossing index out of range");
    const double mu = eps * eps / h;
    require_nonadiabatic(mu, th);
    return transfer_from_constants(branching_constants(mu, p.slopes()[k]), mu);
}

Mat2 adiabatic_transfer_k(const CrossingGeometry& g, int k, double h, const RegimeThresholds& th)
{
    if (k < 0 || k >= static_cast<int>(g.actions_A.size()))
        throw config_error("adiabatic_transfer_k: crossing index out of range");
    const double eps = g.epsilon;
    if (!(eps > 0.0) || h / (eps * eps) > th.adiabatic0) {
        std::ostringstream os;
        os << "regime error: h/eps^2 = " << h / (eps * eps) << " above the adiabatic threshold " << th.adiabatic0;
        throw config_error(os.str());
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx c = sign * I * std::exp(I * g.actions_A[k] / h);
    Mat2 t;
    t << 1.0, c, c, 1.0;
    return t;
}

PhaseTransfers phase_transfers(const CrossingGeometry& g, double h)
{
    const int n = static_cast<int>(g.crossings.size());
    if (n == 0) throw config_error("phase_transfers: empty geometry");
    PhaseTransfers out;
    const cplx f = I / (2.0 * h);
    for (int k = 0; k + 1 < n; ++k) {
        const cplx a = std::exp(f * (g.actions_A[k] - g.actions_A[k + 1] + g.actions_R[k]));
        out.a.push_back(a);
        out.between.push_back(Mat2(Eigen::Vector2cd(a, std::conj(a)).asDiagonal()));
    }
    out.a_right = std::exp(f * (g.actions_A.front() - g.action_right + 2.0 * g.lambda_right * g.crossings.front()));
    out.a_left = std::exp(f * (g.actions_A.back() - g.action_left + 2.0 * g.lambda_left * g.crossings.back()));
    out.right = Mat2(Eigen::Vector2cd(-out.a_right, std::conj(I * out.a_right)).asDiagonal());
    out.left = Mat2(Eigen::Vector2cd(-out.a_left, std::conj(I * out.a_left)).asDiagonal());
    return out;
}

TransferChain assemble_chain(const Potential& p, double eps, double h, Regime regime, const RegimeThresholds& th)
{
    if (!(h > 0.0)) throw config_error("assemble_chain: h must be positive");
    if (regime == Regime::critical) throw config_error("assemble_chain: no transfer chain in the critical regime");
    const CrossingGeometry g = compute_geometry(p, eps);
    const PhaseTransfers ph = phase_transfers(g, h);
    TransferChain chain;
    chain.n = p.crossing_count();
    chain.regime = regime;
    chain.epsilon = eps;
    chain.h = h;
    chain.entries.push_back({"T_r^-1", ph.right.inverse()});
    for (int k = 0; k < chain.n; ++k) {
        Mat2 tk = regime == Regime::nonadiabatic ? scaled_transfer_k(p, k, eps, h, th) : adiabatic_transfer_k(g, k, h, th);
        chain.entries.push_back({"T_" + std::to_string(k + 1), tk});
        if (k + 1 < chain.n)
            chain.entries.push_back({"T_" + std::to_string(k + 1) + "," + std::to_string(k + 2), ph.between[k]});
    }
    chain.entries.push_back({"T_l", ph.left});
    return chain;
}

ChainProduct chain_product(const TransferChain& chain)
{
    ChainProduct out;
    out.s = Mat2::Identity();
    for (const auto& e : chain.entries) out.s = out.s * e.m;
    out.probability = std::norm(out.s(1, 0));
    return out;
}

Mat2 RingElement::to_matrix() const
{
    Mat2 m;
    m << d1, n2, n1, d2;
    return m;
}

RingElement RingElement::from_matrix(const Mat2& m) { return {m(0, 0), m(1, 1), m(1, 0), m(0, 1)}; }

RingElement RingElement::operator*(const RingElement& o) const
{
    // D1^2 = D1, D2^2 = D2, N2 N1 = D1, N1 N2 = D2, D1 N2 = N2, N2 D2 = N2, D2 N1 = N1, N1 D1 = N1.
    return {d1 * o.d1 + n2 * o.n1, d2 * o.d2 + n1 * o.n2, n1 * o.d1 + d2 * o.n1, d1 * o.n2 + n2 * o.d2};
}

RingElement ring_product(const std::vector<RingElement>& elements)
{
    RingElement acc{1.0, 1.0, 0.0, 0.0};
    for (const auto& e : elements) acc = acc * e;
    return acc;
}

RingElement chain_factor(cplx a, cplx b, cplx c) { return {a * b, std::conj(a * b), a * c, std::conj(a) * c}; }

namespace {

void check_sizes(const std::vector<cplx>& a, std::size_t nb, std::size_t nc)
{
    if (nc == 0 || a.size() != nc + 1 || nb != nc)
        throw config_error("sigma/tau: need a of length n+1 and b, c of length n with n >= 1");
}

}  // namespace

SigmaTau sigma_tau(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c)
{
    check_sizes(a, b.size(), c.size());
    const int n = static_cast<int>(c.size());
    SigmaTau st;
    st.sigma = a[0] * std::conj(a[1]) * c[0];
    st.tau = a[0] * a[1] * b[0];
    for (int m = 2; m <= n; ++m) {
        const cplx sigma_prev = st.sigma;
        st.sigma = sigma_prev * conj_pow(m, a[m]) * c[m - 1];
        st.tau = st.tau * conj_pow(m - 1, a[m]) * c[m - 1] + sigma_prev * conj_pow(m - 1, a[m] * b[m - 1]);
    }
    return st;
}

cplx sigma_closed_form(const std::vector<cplx>& a, const std::vector<cplx>& c)
{
    check_sizes(a, c.size(), c.size());
    const int n = static_cast<int>(c.size());
    cplx s = 1.0;
    for (int l = 0; l <= n; ++l) s *= conj_pow(l, a[l]);
    for (int l = 1; l <= n; ++l) s *= c[l - 1];
    return s;
}

cplx tau_closed_form(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c)
{
    check_sizes(a, b.size(), c.size());
    const int n = static_cast<int>(c.size());
    cplx sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        cplx term = conj_pow(k - 1, b[k - 1]) / c[k - 1];
        for (int l = 0; l <= k - 1; ++l) term *= conj_pow(l, a[l]);
        for (int l = k - 1; l <= n - 1; ++l) term *= conj_pow(l, a[l + 1]);
        sum += term;
    }
    cplx prod_c = 1.0;
    for (const auto& x : c) prod_c *= x;
    return prod_c * sum;
}

double tau_squared(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c)
{
    check_sizes(a, b.size(), c.size());
    const int n = static_cast<int>(c.size());
    double prod_c2 = 1.0, prod_a2 = 1.0;
    for (const auto& x : c) prod_c2 *= std::norm(x);
    for (const auto& x : a) prod_a2 *= std::norm(x);
    double diag = 0.0;
    for (int k = 1; k <= n; ++k) diag += std::norm(b[k - 1] / c[k - 1]);
    cplx cross = 0.0;
    for (int k = 2; k <= n; ++k) {
        double tail_a2 = 1.0;
        for (int l = k; l <= n; ++l) tail_a2 *= std::norm(a[l]);
        cplx inner = 0.0;
        for (int j = 1; j <= k - 1; ++j) {
            double head_a2 = 1.0;
            for (int l = 0; l <= j - 1; ++l) head_a2 *= std::norm(a[l]);
            cplx mid = 1.0;
            for (int l = j - 1; l <= k - 2; ++l) mid *= conj_pow(l, a[l + 1] * a[l + 1]);
            inner += head_a2 * mid * conj_pow(j - 1, b[j - 1]) / c[j - 1];
        }
        cross += tail_a2 * conj_pow(k, b[k - 1]) * std::conj(1.0 / c[k - 1]) * inner;
    }
    return prod_a2 * prod_c2 * diag + 2.0 * prod_c2 * cross.real();
}

LemmaD1Report expansion_check_lemma_D1(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                       const std::vector<cplx>& c)
{
    check_sizes(a, b.size(), c.size());
    const int n = static_cast<int>(c.size());
    std::vector<RingElement> factors;
    factors.push_back({a[0], std::conj(a[0]), 0.0, 0.0});
    for (int k = 1; k <= n; ++k) factors.push_back(chain_factor(a[k], b[k - 1], c[k - 1]));
    LemmaD1Report r;
    r.count = n;
    r.product = ring_product(factors);

    std::vector<cplx> cbar(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cbar[i] = std::conj(c[i]);
    const SigmaTau st = sigma_tau(a, b, c);
    const SigmaTau st_bar = sigma_tau(a, b, cbar);
    const cplx tau_a = st.tau, tau_b = std::conj(st_bar.tau);
    const cplx sigma_a = st.sigma, sigma_b = std::conj(st_bar.sigma);
    if (n % 2 == 1) {
        r.leading = {tau_a, tau_b, sigma_b, sigma_a};
        r.residual_tau = {std::abs(r.product.d1 - tau_a), std::abs(r.product.d2 - tau_b)};
        r.residual_sigma = {std::abs(r.product.n2 - sigma_a), std::abs(r.product.n1 - sigma_b)};
    } else {
        r.leading = {sigma_a, sigma_b, tau_b, tau_a};
        r.residual_tau = {std::abs(r.product.n2 - tau_a), std::abs(r.product.n1 - tau_b)};
        r.residual_sigma = {std::abs(r.product.d1 - sigma_a), std::abs(r.product.d2 - sigma_b)};
    }
    return r;
}

}  // namespace lzlab
