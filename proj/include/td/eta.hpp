#pragma once

#include <td/config.hpp>

#include <vector>

namespace td {

// Jet of the profile eta(s) = s^2 a(s)^2, where a(s) in [0,1] solves
// s = (a^gamma/2)(1+a). eta1..eta4 are d/ds derivatives at s.
struct EtaJet {
    double s = 0.0;
    double a = 0.0;
    double eta0 = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    double eta4 = 0.0;
};

// Solves s = (a^gamma/2)(1+a) for a in [0,1]. Newton in log-log coordinates
// from the seed a ~ (2s)^{1/gamma}; log P(a) is convex in log a, so the
// iteration descends monotonically onto the root. Converges to relative
// machine precision, which the small-s jet evaluations need; the contract
// |s - P(a)| <= root_tol is checked on exit.
double solve_a(double s, const GammaConfig& cfg);

// (a, a', a'', a''', a'''') at s, order <= 4 entries beyond `order` omitted.
// Derivatives use explicit rational-in-a closed forms (with D = gamma +
// (gamma+1) a); repeated implicit differentiation in s cancels
// catastrophically for small s and must not be used here.
// Throws DomainError at s = 0, where every derivative degenerates for
// gamma > 1 (a ~ (2s)^{1/gamma}).
std::vector<double> a_jet(double s, int order, const GammaConfig& cfg);

// Full jet of eta at s in [0,1]. At s = 0 the one-sided limits are returned:
// eta0 = eta1 = eta2 = 0 for every gamma > 0; eta3 -> 0 (gamma < 2),
// 12 (gamma = 2), +inf (gamma > 2); eta4 -> 0 (gamma < 1), 96 (gamma = 1),
// +inf (gamma > 1).
EtaJet eta_jet(double s, const GammaConfig& cfg);

// Empirical envelope constant C^ = max over a log-spaced s sample of
// |eta'''(s)| s^{1 - 2/gamma}. Finite for every gamma > 0 and stable under
// sample refinement (the quotient tends to a positive constant as s -> 0).
double eta_holder_bound(const GammaConfig& cfg, int samples);

} // namespace td
