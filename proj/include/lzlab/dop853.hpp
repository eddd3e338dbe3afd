#pragma once

// Dormand-Prince 8(5,3) embedded Runge-Kutta integrator for complex-valued systems.
// Coefficients are those of Hairer & Wanner's DOP853.

#include "lzlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

namespace lzlab {

struct Dop853Options {
    double rtol = 1e-11;
    double atol = 1e-11;
    double h_max = 0.0;             // 0 means |t1 - t0|
    double h_init = 0.0;            // 0 means automatic
    long max_steps = 50'000'000;
    double min_step_fraction = 1e-15;  // step underflow relative to the span
};

struct Dop853Stats {
    long steps = 0;
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

namespace dop853_coef {
// clang-format off
inline constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
    c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
    c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00, c8 = 0.307692307692307692307692307692E+00,
    c9 = 0.651282051282051282051282051282E+00, c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00;
inline constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
    b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
    b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
    b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
inline constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
    bhh3 = 0.220588235294117647058823529412E-01;
inline constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
    er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
    er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
    er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
inline constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
    a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
    a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
    a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
    a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
    a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2, a74 = 1.70252211019544039314978060272E-1,
    a75 = 6.02165389804559606850219397283E-2, a76 = -1.7578125E-2, a81 = 3.70920001185047927108779319836E-2,
    a84 = 1.70383925712239993810214054705E-1, a85 = 1.07262030446373284651809199168E-1,
    a86 = -1.53194377486244017527936158236E-2, a87 = 8.27378916381402288758473766002E-3,
    a91 = 6.24110958716075717114429577812E-1, a94 = -3.36089262944694129406857109825E0,
    a95 = -8.68219346841726006818189891453E-1, a96 = 2.75920996994467083049415600797E1,
    a97 = 2.01540675504778934086186788979E1, a98 = -4.34898841810699588477366255144E1,
    a101 = 4.77662536438264365890433908527E-1, a104 = -2.48811461997166764192642586468E0,
    a105 = -5.90290826836842996371446475743E-1, a106 = 2.12300514481811942347288949897E1,
    a107 = 1.52792336328824235832596922938E1, a108 = -3.32882109689848629194453265587E1,
    a109 = -2.03312017085086261358222928593E-2, a111 = -9.3714243008598732571704021658E-1,
    a114 = 5.18637242884406370830023853209E0, a115 = 1.09143734899672957818500254654E0,
    a116 = -8.14978701074692612513997267357E0, a117 = -1.85200656599969598641566180701E1,
    a118 = 2.27394870993505042818970056734E1, a119 = 2.49360555267965238987089396762E0,
    a1110 = -3.0467644718982195003823669022E0, a121 = 2.27331014751653820792359768449E0,
    a124 = -1.05344954667372501984066689879E1, a125 = -2.00087205822486249909675718444E0,
    a126 = -1.79589318631187989172765950534E1, a127 = 2.79488845294199600508499808837E1,
    a128 = -2.85899827713502369474065508674E0, a129 = -8.87285693353062954433549289258E0,
    a1210 = 1.23605671757943030647266201528E1, a1211 = 6.43392746015763530355970484046E-1;
// clang-format on
}  // namespace dop853_coef

class Dop853 {
public:
    using cvec = std::vector<std::complex<double>>;

    explicit Dop853(std::size_t n) : n_(n)
    {
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &k8_, &k9_, &k10_, &ytmp_, &ynew_}) v->resize(n);
    }

    const Dop853Stats& stats() const { return stats_; }

    // Integrates y from t0 to t1 in place. rhs(t, y, dy) writes dy/dt; on_step(t, y) runs
    // after every accepted step.
    template <class Rhs, class OnStep>
    void integrate(Rhs&& rhs, double t0, double t1, cvec& y, const Dop853Options& opt, OnStep&& on_step)
    {
        using namespace dop853_coef;
        stats_ = {};
        const double span = std::abs(t1 - t0);
        if (span == 0.0) return;
        const double dir = t1 > t0 ? 1.0 : -1.0;
        const double h_max = opt.h_max > 0 ? std::min(opt.h_max, span) : span;
        double t = t0;
        rhs(t, y.data(), k1_.data());
        ++stats_.evaluations;
        double h = opt.h_init > 0 ? std::min(opt.h_init, h_max) : initial_step(rhs, t, y, dir, h_max, opt);
        double facold = 1e-4;
        bool reject = false, last = false;
        const double expo = 1.0 / 8.0, safe = 0.9, facc1 = 3.0, facc2 = 1.0 / 6.0;

        while (true) {
            if (stats_.steps >= opt.max_steps) {
                std::ostringstream os;
                os << "integrator step budget exceeded (" << opt.max_steps << " steps)";
                throw budget_error(os.str());
            }
            if (h < opt.min_step_fraction * span) {
                std::ostringstream os;
                os << "integrator step underflow at t=" << t << " (h=" << h << ", span=" << span << ")";
                throw numerical_error(os.str());
            }
            if ((t + 1.01 * dir * h - t1) * dir >= 0.0) {
                h = std::abs(t1 - t);
                last = true;
            }
            const double hs = dir * h;
            ++stats_.steps;
            stage(rhs, t, hs, y);
            // Error estimate combining the fifth- and third-order embedded solutions.
            double err = 0.0, err2 = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
                auto e2 = (k4_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i]) / sk;
                err2 += std::norm(e2);
                auto e = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
                          er10 * k10_[i] + er11 * k2_[i] + er12 * k3_[i]) / sk;
                err += std::norm(e);
            }
            double deno = err + 0.01 * err2;
            if (deno <= 0.0) deno = 1.0;
            err = h * err * std::sqrt(1.0 / (deno * static_cast<double>(n_)));
            double fac11 = std::pow(err, expo);
            double fac = std::clamp(fac11 / safe, facc2, facc1);
            double h_new = h / fac;
            if (err <= 1.0) {
                facold = std::max(err, 1e-4);
                (void)facold;
                ++stats_.accepted;
                t = last ? t1 : t + hs;
                y.swap(ynew_);
                rhs(t, y.data(), k1_.data());
                ++stats_.evaluations;
                on_step(t, y);
                if (last) return;
                h_new = std::min(h_new, h_max);
                if (reject) h_new = std::min(h_new, h);
                reject = false;
            } else {
                h_new = h / std::min(facc1, fac11 / safe);
                reject = true;
                last = false;
                if (stats_.accepted >= 1) ++stats_.rejected;
            }
            h = h_new;
        }
    }

    template <class Rhs>
    void integrate(Rhs&& rhs, double t0, double t1, cvec& y, const Dop853Options& opt)
    {
        integrate(rhs, t0, t1, y, opt, [](double, const cvec&) {});
    }

private:
    template <class Rhs>
    void stage(Rhs& rhs, double t, double h, const cvec& y)
    {
        using namespace dop853_coef;
        auto& w = ytmp_;
        for (std::size_t i = 0; i < n_; ++i) w[i] = y[i] + h * a21 * k1_[i];
        rhs(t + c2 * h, w.data(), k2_.data());
        for (std::size_t i = 0; i < n_; ++i) w[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs(t + c3 * h, w.data(), k3_.data());
        for (std::size_t i = 0; i < n_; ++i) w[i] = y[i] + h * (a41 * k1_[i] + a43 * k3_[i]);
        rhs(t + c4 * h, w.data(), k4_.data());
        for (std::size_t i = 0; i < n_; ++i) w[i] = y[i] + h * (a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs(t + c5 * h, w.data(), k5_.data());
        for (std::size_t i = 0; i < n_; ++i) w[i] = y[i] + h * (a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]);
        rhs(t + c6 * h, w.data(), k6_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
        rhs(t + c7 * h, w.data(), k7_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i]);
        rhs(t + c8 * h, w.data(), k8_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] +
                               a98 * k8_[i]);
        rhs(t + c9 * h, w.data(), k9_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] + a107 * k7_[i] +
                               a108 * k8_[i] + a109 * k9_[i]);
        rhs(t + c10 * h, w.data(), k10_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] + a117 * k7_[i] +
                               a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i]);
        rhs(t + c11 * h, w.data(), k2_.data());
        for (std::size_t i = 0; i < n_; ++i)
            w[i] = y[i] + h * (a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] + a127 * k7_[i] +
                               a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] + a1211 * k2_[i]);
        rhs(t + h, w.data(), k3_.data());
        stats_.evaluations += 11;
        for (std::size_t i = 0; i < n_; ++i) {
            k4_[i] = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] + b10 * k10_[i] +
                     b11 * k2_[i] + b12 * k3_[i];
            ynew_[i] = y[i] + h * k4_[i];
        }
    }

    template <class Rhs>
    double initial_step(Rhs& rhs, double t, const cvec& y, double dir, double h_max, const Dop853Options& opt)
    {
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double sk = opt.atol + opt.rtol * std::abs(y[i]);
            dnf += std::norm(k1_[i] / sk);
            dny += std::norm(y[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, h_max);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + dir * h * k1_[i];
        rhs(t + dir * h, ytmp_.data(), k2_.data());
        ++stats_.evaluations;
        double der2 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double sk = opt.atol + opt.rtol * std::abs(y[i]);
            der2 += std::norm((k2_[i] - k1_[i]) / sk);
        }
        der2 = std::sqrt(der2) / h;
        double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
        return std::min({100 * std::abs(h), h1, h_max});
    }

    std::size_t n_;
    cvec k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_, ytmp_, ynew_;
    Dop853Stats stats_;
};

}  // namespace lzlab
