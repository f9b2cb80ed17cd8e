#include <td/eta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace td {

namespace {

// P(a) = (a^gamma/2)(1+a)
inline double profile(double a, double g) {
    return 0.5 * std::pow(a, g) * (1.0 + a);
}

} // namespace

double solve_a(double s, const GammaConfig& cfg) {
    if (s < 0.0 || s > 1.0)
        throw DomainError("solve_a: s outside [0,1]");
    if (s == 0.0) return 0.0;
    if (s == 1.0) return 1.0;
    const double g = cfg.gamma;
    double a = std::min(1.0, std::pow(2.0 * s, 1.0 / g));
    // Newton on log P(a) = log s in the variable log a;
    // dlogP/dloga = gamma + a/(1+a)
    for (int it = 0; it < 100; ++it) {
        const double p = profile(a, g);
        const double r = std::log(p / s);
        if (std::fabs(r) < 4e-16) break;
        const double slope = g + a / (1.0 + a);
        a = std::min(1.0, a * std::exp(-r / slope));
    }
    if (std::fabs(profile(a, g) - s) >
        cfg.root_tol + 8.0 * std::numeric_limits<double>::epsilon() * s)
        throw NoConvergence("solve_a: residual did not converge");
    return a;
}

std::vector<double> a_jet(double s, int order, const GammaConfig& cfg) {
    if (order < 0 || order > 4)
        throw InvalidParameter("a_jet: order must be in 0..4");
    if (s <= 0.0)
        throw DomainError("a_jet: derivatives degenerate at s = 0 "
                          "(a ~ (2s)^{1/gamma})");
    const double g = cfg.gamma;
    const double a = solve_a(s, cfg);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(order) + 1);
    out.push_back(a);
    if (order < 1) return out;
    const double d = g + (g + 1.0) * a;
    out.push_back(2.0 * std::pow(a, 1.0 - g) / d);
    if (order < 2) return out;
    const double d3 = d * d * d;
    out.push_back(-4.0 * g * ((g + 1.0) * a + (g - 1.0)) *
                  std::pow(a, 1.0 - 2.0 * g) / d3);
    if (order < 3) return out;
    const double gp1 = g + 1.0, gm1 = g - 1.0;
    const double d5 = d3 * d * d;
    out.push_back(8.0 * g *
                  (gp1 * gp1 * (2.0 * g + 1.0) * a * a +
                   2.0 * gm1 * gp1 * (2.0 * g + 1.0) * a +
                   g * (2.0 * g - 1.0) * gm1) *
                  std::pow(a, 1.0 - 3.0 * g) / d5);
    if (order < 4) return out;
    const double g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g,
                 g6 = g5 * g;
    const double c3 =
        -96.0 * g6 - 400.0 * g5 - 656.0 * g4 - 528.0 * g3 - 208.0 * g2 -
        32.0 * g;
    const double c2 =
        -288.0 * g6 - 624.0 * g5 - 144.0 * g4 + 528.0 * g3 + 432.0 * g2 +
        96.0 * g;
    const double c1 = -288.0 * g6 - 48.0 * g5 + 416.0 * g4 + 48.0 * g3 -
                      128.0 * g2;
    const double c0 = -96.0 * g6 + 176.0 * g5 - 96.0 * g4 + 16.0 * g3;
    const double d7 = d5 * d * d;
    out.push_back((((c3 * a + c2) * a + c1) * a + c0) *
                  std::pow(a, 1.0 - 4.0 * g) / d7);
    return out;
}

EtaJet eta_jet(double s, const GammaConfig& cfg) {
    EtaJet jet;
    jet.s = s;
    if (s <= 0.0) {
        const double g = cfg.gamma;
        const double inf = std::numeric_limits<double>::infinity();
        jet.eta3 = g < 2.0 ? 0.0 : (g == 2.0 ? 12.0 : inf);
        jet.eta4 = g < 1.0 ? 0.0 : (g == 1.0 ? 96.0 : inf);
        return jet;
    }
    const auto aj = a_jet(s, 4, cfg);
    const double a = aj[0], a1 = aj[1], a2 = aj[2], a3 = aj[3], a4 = aj[4];
    jet.a = a;
    // b = a^2 and its s-derivatives
    const double b = a * a;
    const double b1 = 2.0 * a * a1;
    const double b2 = 2.0 * (a1 * a1 + a * a2);
    const double b3 = 2.0 * (3.0 * a1 * a2 + a * a3);
    const double b4 = 2.0 * (3.0 * a2 * a2 + 4.0 * a1 * a3 + a * a4);
    jet.eta0 = s * s * b;
    jet.eta1 = 2.0 * s * b + s * s * b1;
    jet.eta2 = 2.0 * b + 4.0 * s * b1 + s * s * b2;
    jet.eta3 = 6.0 * b1 + 6.0 * s * b2 + s * s * b3;
    jet.eta4 = 12.0 * b2 + 8.0 * s * b3 + s * s * b4;
    return jet;
}

double eta_holder_bound(const GammaConfig& cfg, int samples) {
    if (samples < 100)
        throw InvalidParameter("eta_holder_bound: need samples >= 100");
    const double expo = 1.0 - 2.0 / cfg.gamma;
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        // log-spaced on [1e-10, 1]
        const double s =
            std::pow(10.0, -10.0 + 10.0 * (i + 1.0) / samples);
        const double v =
            std::fabs(eta_jet(s, cfg).eta3) * std::pow(s, expo);
        best = std::max(best, v);
    }
    return best;
}

} // namespace td
