#pragma once

#include "lzlab/geometry.hpp"
#include "lzlab/propagator.hpp"

#include <array>
#include <string>
#include <vector>

namespace lzlab {

// Connection constants of the local crossing model with slope v:
//   gamma = (1/i) sqrt(v/(pi mu)) mu^{-i mu/(2v)} Gamma(1 - i mu/(2v)),
//   p = gamma e^{pi mu/(4v)},  q = gamma e^{-pi mu/(4v)}.
struct BranchingConstants {
    cplx p, q, gamma;
};

BranchingConstants branching_constants(double mu, double v = 1.0);

// Diagonal phase of the local transfer matrix, theta = -3 pi/4 + mu log mu.
double branching_phase(double mu);

// Principal part [[b, c], [c, conj b]] with b = e^{i theta}/conj(p), c = q/(i p), for slope v = 1.
Mat2 local_transfer_nonadiabatic(double mu, const RegimeThresholds& th = {});

// The same for crossing k (0-based) after the rescaling t -> sqrt(v_k)(t - t_k).
Mat2 scaled_transfer_k(const Potential& p, int k, double eps, double h, const RegimeThresholds& th = {});

// [[1, (-1)^k i e^{i A_k/h}], [same, 1]] for 0-based k.
Mat2 adiabatic_transfer_k(const CrossingGeometry& g, int k, double h, const RegimeThresholds& th = {});

struct PhaseTransfers {
    std::vector<cplx> a;      // a_k between crossings k and k+1 (0-based), n-1 values
    cplx a_right, a_left;     // boundary phases a_r, a_l
    std::vector<Mat2> between;  // diag(a_k, conj a_k)
    Mat2 right, left;           // T_r = diag(-a_r, conj(i a_r)), T_l likewise
};

PhaseTransfers phase_transfers(const CrossingGeometry& g, double h);

struct LabeledMatrix {
    std::string label;
    Mat2 m;
};

// Ordered factors [T_r^-1, T_1, T_12, ..., T_n, T_l] of the scattering matrix.
struct TransferChain {
    int n = 0;
    Regime regime = Regime::nonadiabatic;
    double epsilon = 0.0, h = 0.0;
    std::vector<LabeledMatrix> entries;
};

TransferChain assemble_chain(const Potential& p, double eps, double h, Regime regime,
                             const RegimeThresholds& th = {});

struct ChainProduct {
    Mat2 s;
    double probability = 0.0;
};

ChainProduct chain_product(const TransferChain& chain);

// d1 D1 + d2 D2 + n1 N1 + n2 N2 with D1 = diag(1,0), D2 = diag(0,1), N1 = e_21, N2 = e_12.
struct RingElement {
    cplx d1, d2, n1, n2;

    Mat2 to_matrix() const;
    static RingElement from_matrix(const Mat2& m);
    RingElement operator*(const RingElement& o) const;
};

RingElement ring_product(const std::vector<RingElement>& elements);

// Factor T_k T_{k,k+1} = a b D1 + conj(a b) D2 + a c N1 + conj(a) c N2.
RingElement chain_factor(cplx a, cplx b, cplx c);

// a has n+1 entries (a_0..a_n); b and c have n entries (b_1..b_n, c_1..c_n).
struct SigmaTau {
    cplx sigma, tau;
};

SigmaTau sigma_tau(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c);
cplx sigma_closed_form(const std::vector<cplx>& a, const std::vector<cplx>& c);
cplx tau_closed_form(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c);

// |tau_n|^2 from the double-sum expansion (diagonal sum plus 2 Re of the cross terms).
double tau_squared(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c);

// Compares the dense product (a_0 D1 + conj a_0 D2) * prod_k chain_factor(a_k, b_k, c_k)
// against the sigma/tau leading terms. For an odd count the diagonal carries tau (error
// O(b^3)) and the off-diagonal sigma (error O(b^2)); an even count swaps the two.
struct LemmaD1Report {
    int count = 0;
    RingElement product;
    RingElement leading;
    std::array<double, 2> residual_tau{};    // the two tau slots, O(b^3)
    std::array<double, 2> residual_sigma{};  // the two sigma slots, O(b^2)
};

LemmaD1Report expansion_check_lemma_D1(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                       const std::vector<cplx>& c);

}  // namespace lzlab
