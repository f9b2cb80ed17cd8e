#pragma once

#include <td/config.hpp>
#include <td/densities.hpp>
#include <td/geometry.hpp>

namespace td {

// sigma and its derivatives at one ray coordinate. Cartesian components are
// NaN where the coordinate map degenerates (the foot vertex t = 0, a = 0).
struct SigmaJet {
    double sigma = 0.0;
    double dt = 0.0;
    double da = 0.0;
    double dx1 = 0.0;
    double dx2 = 0.0;
};

// Transport density along ray a at fraction t:
//   sigma(t,a) = l(a) * int_0^t F(tau) q(tau) dtau / q(t),
// q(tau) = gamma (1+a) tau + a, F the per-ray deficit. Signed: the deficit
// changes sign along rays near the foot, and so does sigma on t in (1/3, 1)
// as a -> 0.
double sigma(const RayCoord& c, const DensityInstance& inst);

// Dispatch through the instance's frames: single triangle evaluates at the
// ray coordinates of p, the chain in the containing triangle's local frame
// (0 outside the union), the smooth plane on the label ray of (x1,|x2|)
// (0 outside the closure).
double sigma_at_point(const Point& p, const DensityInstance& inst);

// dsigma/dt = l F(t) - gamma (1+a) sigma / q(t).
double dsigma_dt(const RayCoord& c, const DensityInstance& inst);

// dsigma/da = (l'/l) sigma + gamma l int F (t-tau) / q(t)^2
//           + l int dF/da q / q(t); the first two terms carry the
// cancellation of d/da[q] analytically, so no large-term differences appear.
// Triangle kernels only (the smooth deficit has no a-derivative here).
double dsigma_da(const RayCoord& c, const DensityInstance& inst);

// Cartesian derivatives through the inverse coordinate map.
double dsigma_dx2(const RayCoord& c, const DensityInstance& inst);

// Everything at once (one pass of quadratures).
SigmaJet sigma_jet(const RayCoord& c, const DensityInstance& inst);

// Kantorovich potential: u0(a) = int_0^a (1 + s^{2 gamma}/4)^{-1/2} ds and
// u(X(t,a)) = u0(a) - t l(a); u(0,0) = 0, u(1,0) = -1, grad u = -e(a).
double potential_u0(double a, const GammaConfig& cfg);
double potential_u(const RayCoord& c, const GammaConfig& cfg);
double potential_at_point(const Point& p, const GammaConfig& cfg);

// Incremental per-ray evaluator: walks a nondecreasing t sequence and keeps
// the four accumulated moments (int F q, int F, int F tau, int dF/da q), so
// a whole grid column costs one sweep of quadrature panels instead of one
// integral per cell.
class RayAccumulator {
  public:
    // with_da = false skips the a-derivative moments (and leaves da, dx1,
    // dx2 NaN), which is cheaper and works for the smooth kernel.
    RayAccumulator(const DensityInstance& inst, double a, bool with_da = true);

    SigmaJet eval(double t); // t >= previous t, within [0,1]

    double a() const { return a_; }

  private:
    const DensityInstance* inst_;
    RayDensity rd_;
    bool with_da_;
    double a_, l_, ldl_;
    double t_ = 0.0;
    double A0_ = 0.0, F1_ = 0.0, Ft_ = 0.0, B0_ = 0.0;
};

} // namespace td
