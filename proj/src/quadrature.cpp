#include <td/quadrature.hpp>

#include <cmath>

namespace td {

// Gauss-Legendre by Newton iteration on P_n with the Chebyshev-like initial
// guess; converges to machine precision in < 6 steps for any order we use.
std::vector<std::pair<double, double>> gauss_legendre(int order, double a,
                                                      double b) {
    if (order < 1) throw InvalidParameter("gauss_legendre: order < 1");
    std::vector<std::pair<double, double>> out(static_cast<size_t>(order));
    const int n = order;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        out[static_cast<size_t>(i)] = {mid - half * x, w * half};
        out[static_cast<size_t>(n - 1 - i)] = {mid + half * x, w * half};
    }
    return out;
}

} // namespace td
