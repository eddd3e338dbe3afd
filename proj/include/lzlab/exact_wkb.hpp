#pragma once

#include "lzlab/dop853.hpp"
#include "lzlab/geometry.hpp"
#include "lzlab/propagator.hpp"

#include <string>
#include <vector>

namespace lzlab {

// Exact WKB solutions psi_+-(t, a, b; h) = U e^{+-z_a(t)/h} M_+-(t) w_+-(t, b; h) with
// U = (1/2)[[1, i], [i, 1]], z_a(t) = i int_a^t sqrt(V^2 + eps^2), K = ((eps - iV)/(-eps - iV))^{1/4}
// and M_+- = [[1/K, 1/K], [-+iK, +-iK]]. Square roots and K are continued from the real axis
// (where sqrt > 0 and K(t_k) = e^{-i pi/4}) along vertical lines; the branch cuts run vertically
// from each turning point away from the real axis.
struct WKBSpec {
    cplx phase_base = 0.0;   // a
    cplx symbol_base = 0.0;  // b
    int sign = 1;            // +1 or -1
};

struct PolylinePath {
    std::vector<cplx> waypoints;
    int nodes_per_segment = 64;  // sample points used by the certificate and by profiles
};

// max over crossings of max(2 eps/v_k, 4 sqrt h) * safety.
double default_exclusion_radius(const Potential& p, double eps, double h, double safety = 1.5);

struct PathCertificate {
    bool ok = false;
    double min_distance = 0.0;  // to the nearest turning point, over all sampled nodes
    double min_rate = 0.0;      // min of sign * d(Re z)/ds over the nodes, per unit path length
    std::string reason;
};

// Checks the exclusion radius, the analyticity sector, that no segment crosses a branch cut,
// and that sign * Re z strictly increases along the path.
PathCertificate certify_path(const Potential& p, double eps, const PolylinePath& path, int sign, double radius);

// i int_{t_1}^{t} sqrt(V^2+eps^2): real axis to Re t, then vertically.
cplx phase_primitive(const Potential& p, double eps, cplx t);

// z_a(t) = F(t) - F(a).
cplx phase_z(const Potential& p, cplx a, cplx t, double eps);

// sqrt(V(t)^2 + eps^2) on the branch used by phase_primitive.
cplx continued_root(const Potential& p, double eps, cplx t);

// K(t_k) = e^{-i pi/4} at every crossing.
cplx symbol_K(const Potential& p, cplx t, double eps);

// (1/K) dK/dt = -(i/2) eps V' / (V^2 + eps^2).
cplx log_K_derivative(const Potential& p, cplx t, double eps);

struct SymbolSum {
    cplx t;
    cplx even = 1.0;          // sum_k w_{2k}
    cplx odd = 0.0;           // sum_k w_{2k-1}
    double truncation = 0.0;  // magnitude of the last included pair
    std::vector<double> term_magnitudes;  // |w_1|, |w_2|, ...
};

struct ResumOptions {
    double tol = 1e-12;
    bool certify = true;
    double exclusion_radius = -1.0;  // < 0: default_exclusion_radius
};

// Partial sums of the resummed symbol w_{sign}(z(t), z(b); h) through order 2 k_max, integrated
// along the polyline from b = first waypoint. One entry per node when profile is set, otherwise
// only the endpoint.
std::vector<SymbolSum> resum_symbol(const Potential& p, double eps, const WKBSpec& spec, const PolylinePath& path,
                                    double h, int k_max, const ResumOptions& opt = {}, bool profile = false);

// Wronskian of psi_+(., a, b_+) and psi_-(., a, b_-) in the phi normalisation (det M = 2i):
// 2i sum_k w_{+,2k}(z(b_-), z(b_+)). The path runs from b_+ to b_- and must be canonical of type +.
cplx wronskian(const Potential& p, double eps, const PolylinePath& path, double h, int k_max,
               const ResumOptions& opt = {});

// psi_sign(t) at the end of the path; spec.symbol_base must be the first waypoint.
Vec2 exact_wkb_solution(const Potential& p, double eps, const WKBSpec& spec, const PolylinePath& path, double h,
                        int k_max, const ResumOptions& opt = {});

struct WronskianProfile {
    std::vector<cplx> t;
    std::vector<cplx> values;  // det(phi_+, phi_-) with phi = U^{-1} psi
    double defect = 0.0;       // max |W(t) - W(t_0)| / |W(t_0)|
};

// Assembles psi_+ (symbol base = first waypoint) and psi_- (symbol base = last waypoint) at every
// path node and evaluates their Wronskian there.
WronskianProfile wronskian_profile(const Potential& p, double eps, const PolylinePath& path, double h, cplx phase_base,
                                   int k_max, const ResumOptions& opt = {});

struct NearCrossingTerms {
    bool right = true;        // t > t_k
    Vec2 model_plus, model_minus;  // closed-form leading terms psi_{+-,0}
    Vec2 wkb_plus, wkb_minus;      // (1/2)(1/K +- K, i(1/K -+ K)) e^{+-z_{zeta_+-}(t)/h}
    double rel_diff_plus = 0.0, rel_diff_minus = 0.0;
};

// Leading terms of the exact WKB solutions on the real annulus lambda0 sqrt(h) < |t - t_k| < 2 lambda0 sqrt(h)
// around an increasing crossing, written for slope v: phase e^{+-(i/h) int_{t_k}^t V}, power |t - t_k|^{+-i mu/(2v)},
// nu = e^{i mu log(eps/v)/(2v)} and the small component eps/(2 v (t - t_k)).
NearCrossingTerms leading_terms_near_crossing(const Potential& p, int k, double eps, double h, double t,
                                              double lambda0 = 3.0);

// sup of h / |z_zeta(t)| over both circles of the complex annulus, zeta in {zeta_k, conj zeta_k}.
double annulus_error_estimate(const Potential& p, int k, double eps, double h, double lambda0 = 3.0,
                              int samples = 64);

}  // namespace lzlab
