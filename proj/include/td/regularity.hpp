#pragma once

#include <td/config.hpp>
#include <td/densities.hpp>

#include <string>
#include <vector>

namespace td {

enum class Verdict { Consistent, Inconsistent };

// One scaling experiment: log-log (or semi-log for the BV sums) least squares
// over (grid, values) with 10% of the abscissa range trimmed at each end.
// Consistent requires r2 >= 0.99 on top of the per-experiment exponent
// tolerance; `logarithmic` marks threshold cases that can only be flagged,
// not confirmed, at finite scale.
struct ScalingReport {
    std::string experiment;
    double gamma = 0.0;
    double p = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    double fitted_exponent = 0.0;
    double expected_exponent = 0.0;
    double r2 = 0.0;
    bool logarithmic = false;
    Verdict verdict = Verdict::Inconsistent;
};

std::string report_to_json(const ScalingReport& rep);

// Smallest p for which the gradient leaves L^p:
// p*(gamma) = min{gamma/(gamma-1), (gamma+2)/gamma} (the first term only for
// gamma > 1).
double p_star(double gamma);

// sigma(0, eps) on a log grid in [eps_min, eps_max]; the slope of the decay
// is 1/(gamma+1). Consistent iff |fit - expected| <= 0.05 and r2 >= 0.99.
ScalingReport holder_exponent_fit(const DensityInstance& inst, double eps_min,
                                  double eps_max, int n);

// integral of |d sigma/d x2|^p J over the polar rectangle
// {r0 <= |(t,a)| <= delta, theta in [0.15, pi/2]} of ray coordinates.
// The angular clip keeps the foot-edge factor theta^{-(gamma-1)(p-1)} out of
// the vertex-rate measurement (for p past gamma/(gamma-1) that factor
// diverges on its own at every radius).
double lp_gradient_norm(const DensityInstance& inst, double p, double r0,
                        double delta);

// Growth of lp_gradient_norm as r0 -> 0 against 1/r0; expected exponent
// max(0, gamma(p-1) - 2). Threshold cases gamma(p-1) = 2 and
// (gamma-1)(p-1) = 1 set `logarithmic` and are accepted as flagged.
ScalingReport divergence_rate_fit(const DensityInstance& inst, double p,
                                  const std::vector<double>& r0_sequence);

// Partial sums S_N of the per-triangle gradient masses 2 G(l_n),
// G(A) = int_0^A int_0^1 |grad sigma| J dt da, l_n = 1/n. Fits S_N against
// ln N; the expected slope is the a -> 0 limit 2 int_0^1 |dt (1-t) + da| dt.
// Consistent iff S_N / ln N moves < 10% over the last octave and r2 >= 0.99.
ScalingReport bv_partial_sums(const DensityInstance& chain_inst, int n_max);

// Companion: partial sums of the target-density gradient masses
// 2 beta int int sqrt(zeta'''^2 + eta'''^2) J, which stay summable.
// Consistent iff the tail beyond N/2 is below 1% of the total.
ScalingReport bv_companion_sums(const DensityInstance& chain_inst, int n_max);

// max over sampled pairs of |sigma(x) - sigma(y)| / |x-y|^exponent; half the
// pairs are Halton pairs in the triangle, half the family ((0,eps), (0,0))
// with eps log-spaced down to 1e-6, where the quotient blows up as soon as
// exponent > 1/(gamma+1).
double holder_quotient_audit(const DensityInstance& inst, double exponent,
                             int pairs);

} // namespace td
