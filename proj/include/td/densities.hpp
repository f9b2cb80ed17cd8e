#pragma once

#include <td/config.hpp>
#include <td/eta.hpp>
#include <td/geometry.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace td {

enum class InstanceKind { SingleTriangle, BVChain, SmoothPlane };

// Chain of shrinking double triangles fanned around the shared vertex (-1,0).
// Triangle n (1-based in formulas, index n-1 in the vectors) has foot width
// l_n = 1/n, half-opening angle alpha_n = atan(l_n^gamma/2), and is rotated by
// theta_n = sum_{k<n} (alpha_k + alpha_{k+1}) about (-1,0), so consecutive
// triangles share the edge along which their target densities are compared.
struct TriangleChain {
    int n_max = 1;
    std::vector<double> l, alpha, theta;
};

// Cutoff layout for the compactly supported smooth variant. All profiles are
// C^2 quintic smoothsteps; a below is the ray label of the point (x1,|x2|).
//   psi(x1):   1 for x1 <= 1-eps_prime, 0 for x1 >= 1-eps
//   phi(x1):   the bump 64 (v(1-v))^3, v = (x1-(1-eps_prime))/(eps_prime-eps)
//   chi2(p) = rho2(a) tau2(x1): rho2 1->0 on [eps, 3 eps],
//             tau2 1->0 on [1-eps, 1-eps/2]
//   chi1(p) = rho1(a) tau1(x1): rho1 1->0 on [a0, (a0+1)/2],
//             tau1 1->0 on [1-eps/2, 1-eps/4]
struct SmoothConfig {
    double eps = 0.1;
    double eps_prime = 0.2;
    double a0 = 0.5;
};

struct DensityInstance {
    GammaConfig cfg;
    InstanceKind kind = InstanceKind::SingleTriangle;
    std::optional<TriangleChain> chain;
    std::optional<SmoothConfig> smooth;
};

// Factories validate parameters and fill cfg.beta via choose_beta when it is
// left at 0.
DensityInstance make_single(GammaConfig cfg);
DensityInstance make_chain(GammaConfig cfg, int n_max);
DensityInstance make_smooth(GammaConfig cfg, SmoothConfig sc = {});

// (zeta, zeta', zeta'', zeta''') with zeta(x) = -x^2 (x-1)^2.
std::array<double, 4> zeta_jet(double x1);

// Source density: 1 on the instance's triangles (chi1 for the smooth plane),
// 0 outside.
double f_plus(const Point& p, const DensityInstance& inst);

// Target density: 1 + beta (zeta''(x1) + eta''(|x2|)) on the instance's
// triangles (BVChain evaluates in the containing triangle's local frame);
// the smooth plane adds the correction beta phi(x1) c(a) and tapers with the
// cutoffs.
double f_minus(const Point& p, const DensityInstance& inst);

// beta = 1 / (2 (M_zeta + M_eta)) with M_zeta = max |zeta''| = 26 and M_eta
// the empirical max of |eta''| on (0,1] (attained at s = 1 for every gamma we
// touch, so the sampled max is exact). Guarantees f- >= 1/2 on the triangles.
double choose_beta(const GammaConfig& cfg);

// |integral of (f+ - f-) over the subgraph Delta_a| (both mirror halves for
// the mirrored kinds). Zero ray-by-ray by construction; the quadrature
// residual is the advertised check.
double mass_balance_residual(double a, const DensityInstance& inst);

// -integral of zeta'' over Delta_a = a^{gamma+2} (1+a)^2 / 2.
double zeta_mass_closed_form(double a, const GammaConfig& cfg);

// Chain construction (gamma > 1 so the total turning angle stays finite).
TriangleChain build_chain(const GammaConfig& cfg, int n_max);

// Index of the triangle containing p (boundary band 1e-12, lower index wins),
// or -1.
int chain_locate(const TriangleChain& chain, const Point& p,
                 const GammaConfig& cfg, double band = 1e-12);

// Local frame of triangle idx: rotate by -theta about (-1,0), then shift the
// foot vertex to (-l, 0).
Point chain_to_local(const TriangleChain& chain, int idx, const Point& p);

// Correction amplitude c(a) balancing each ray of the smooth variant:
// c(a) = -int q_x ((psi zeta)'' + eta'') chi2 dx1 / int q_x phi dx1 along the
// ray (q_x = gamma (x1+a) + a); for a < eps the reduced positive form
// int q_x eta'' (1 - tau2) / int q_x phi is used.
double smooth_correction_c(double a, const SmoothConfig& sc,
                           const GammaConfig& cfg);

// Cutoff profiles (exposed for tests and the evaluators). jets are (v,v',v'').
std::array<double, 3> psi_jet(double x1, const SmoothConfig& sc);
double cutoff_phi(double x1, const SmoothConfig& sc);
double cutoff_rho1(double a, const SmoothConfig& sc);
double cutoff_tau1(double x1, const SmoothConfig& sc);
double cutoff_rho2(double a, const SmoothConfig& sc);
double cutoff_tau2(double x1, const SmoothConfig& sc);

// Ray label of (x1,|x2|) for the smooth plane: the unique a >= max(0,-x1)
// with |x2| = (a^gamma/2)(x1+a). Points above the a = amax ray return amax
// (the cutoffs vanish there anyway).
double ray_label(const Point& p, const GammaConfig& cfg, double amax = 1.0);

// Per-ray view: precomputes the ray geometry, then evaluates the deficit
// F(tau) = (f+ - f-)(X(tau,a)) and (for the triangle kernels) its
// a-derivative at fixed tau. Every per-ray integral downstream runs on this.
class RayDensity {
  public:
    RayDensity(const DensityInstance& inst, double a);

    double deficit(double tau) const;
    double deficit_da(double tau) const; // SingleTriangle / BVChain only

    double a() const { return a_; }
    // slope height s_a = (a^gamma/2)(1+a): x2(tau) = s_a tau along the ray
    double s() const { return s_; }

  private:
    const DensityInstance* inst_;
    double a_ = 0.0;
    double s_ = 0.0;
    double sprime_ = 0.0; // d s_a / da
    double c_ = 0.0;      // smooth correction c(a), precomputed
};

// Serialization: {kind, gamma, beta, quad_tol, root_tol, n_max, eps,
// eps_prime, a0} with the optional fields present per kind.
std::string instance_to_json(const DensityInstance& inst);
DensityInstance instance_from_json(const std::string& text);

} // namespace td
