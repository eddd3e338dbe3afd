#include "lzlab/quadrature.hpp"

#include <cmath>

namespace lzlab {

const GaussLegendre32& gauss_legendre_32()
{
    static const GaussLegendre32 rule = [] {
        GaussLegendre32 q;
        const int n = 32;
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            q.x[i] = -x;
            q.w[i] = w;
            q.x[n - 1 - i] = x;
            q.w[n - 1 - i] = w;
        }
        return q;
    }();
    return rule;
}

}  // namespace lzlab
