#pragma once

#include <td/config.hpp>

#include <array>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

namespace td {

// 7/15 Gauss-Kronrod pair on [-1,1]. Nonnegative abscissae only; xk[7] = 0 is
// the centre node. Odd-index Kronrod nodes are the embedded Gauss-7 nodes.
namespace gk {

inline constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

} // namespace gk

// One Kronrod panel: returns (K15, |K15 - G7|) scaled to [a,b].
template <class F>
std::pair<double, double> gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = gk::wk[7] * fc;
    double g = gk::wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double fx = f(c - h * gk::xk[i]) + f(c + h * gk::xk[i]);
        k += gk::wk[i] * fx;
        if (i % 2 == 1) g += gk::wg[i / 2] * fx;
    }
    return {k * h, std::fabs(k - g) * std::fabs(h)};
}

// Globally adaptive bisection: keep a heap of panels ordered by their raw
// |K15-G7| error estimate and split the worst one until the summed estimate
// drops below abs_tol. Panels that reach machine width are frozen as they
// stand (integrable endpoint singularities end up there with negligible
// leftover error); if the frozen error alone exceeds the tolerance, the
// integrand is too singular for this scheme and we refuse rather than return
// a number we cannot back.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol,
                 int max_panels = 200000) {
    if (a == b) return 0.0;
    struct Seg {
        double err, a, b, val;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    auto eval = [&](double lo, double hi) {
        const auto [k, e] = gk15_panel(f, lo, hi);
        return Seg{e, lo, hi, k};
    };
    std::priority_queue<Seg> heap;
    heap.push(eval(a, b));
    double heap_err = heap.top().err;
    double frozen_val = 0.0, frozen_err = 0.0;
    int used = 1;
    while (heap_err + frozen_err > abs_tol) {
        if (heap.empty())
            throw QuadratureFailure(
                "integrate: tolerance unreachable (singular integrand)");
        const Seg worst = heap.top();
        heap.pop();
        heap_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            frozen_val += worst.val;
            frozen_err += worst.err;
            continue;
        }
        if ((used += 2) > max_panels)
            throw QuadratureFailure("integrate: panel budget exhausted");
        const Seg left = eval(worst.a, mid);
        const Seg right = eval(mid, worst.b);
        heap_err += left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    double total = frozen_val;
    while (!heap.empty()) {
        total += heap.top().val;
        heap.pop();
    }
    return total;
}

// Gauss-Legendre nodes/weights on [a,b], for fixed-order tensor grids where
// the integrand is smooth and adaptivity would only add bookkeeping.
// Supported orders: 8, 16, 24, 32.
std::vector<std::pair<double, double>> gauss_legendre(int order, double a,
                                                      double b);

} // namespace td
