#pragma once

#include <td/config.hpp>

#include <array>

namespace td {

// Ray coordinates: t is the normalized arclength fraction along a ray, a is
// the ray label (distance of the ray foot from the origin along the negative
// x1-axis). The ray with label a runs from (-a, 0) to (1, (a^gamma/2)(1+a)).
struct RayCoord {
    double t = 0.0;
    double a = 0.0;
};

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Row-major 2x2 matrix.
struct Mat2 {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;
};

// Open triangle with vertices (-1,0), (1,0), (1,1).
bool in_domain(const Point& p);

// Closure membership with a tolerance band on every edge.
bool in_domain_closure(const Point& p, double tol = 1e-12);

// X(t,a) = (-a + (1+a) t, (1+a) t a^gamma / 2).
Point ray_to_point(const RayCoord& c, const GammaConfig& cfg);

// Inverse of ray_to_point on the closed triangle. x2 = 0 is handled by the
// degenerate-ray convention: x1 in (0,1] -> (t=x1, a=0), x1 in [-1,0] ->
// (t=0, a=-x1). For x2 > 0 solves x2 = (a^gamma/2)(x1+a), strictly increasing
// in a on [max(0,-x1), 1], by bisection-guarded Newton to |residual| <= root_tol.
RayCoord point_to_ray(const Point& p, const GammaConfig& cfg);

// l(a) = (1+a) sqrt(1 + a^{2 gamma}/4).
double ray_length(double a, const GammaConfig& cfg);

// l'(a)/l(a) = (4 + a^{2g} + g (1+a) a^{2g-1}) / ((1+a)(4 + a^{2g})).
double ray_length_dlog(double a, const GammaConfig& cfg);

// J(t,a) = (1+a)(gamma (1+a) t + a) a^{gamma-1} / 2. At a = 0 the continuous
// limit is returned for gamma >= 1 (t/2 when gamma = 1, 0 when gamma > 1);
// gamma < 1 has no finite limit and throws SingularJacobian.
double jacobian(const RayCoord& c, const GammaConfig& cfg);

// dJ/dt = gamma (1+a)^2 a^{gamma-1} / 2 (independent of t).
double jacobian_dt(const RayCoord& c, const GammaConfig& cfg);

// dJ/da = (gamma(gamma-1)(1+a)^2 t + (gamma(1+a)(1+2t) + a) a) a^{gamma-2}/2.
// The a^{gamma-2} factor degenerates at a = 0 for every gamma < 2, so a = 0
// always throws SingularJacobian here.
double jacobian_da(const RayCoord& c, const GammaConfig& cfg);

// e(a) = (1, a^gamma/2) / sqrt(1 + a^{2 gamma}/4); the potential gradient on
// ray a is -e(a).
std::array<double, 2> unit_ray_direction(double a, const GammaConfig& cfg);

// Matrix ((dt/dx1, dt/dx2), (da/dx1, da/dx2)) =
//   (1/J) ((gamma(1+a)+a) t a^{gamma-1}/2, 1-t; -(1+a) a^gamma/2, 1+a).
Mat2 inverse_coordinate_jacobian(const RayCoord& c, const GammaConfig& cfg);

} // namespace td
