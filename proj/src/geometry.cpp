#include <td/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace td {

bool in_domain(const Point& p) {
    return p.x2 > 0.0 && p.x1 < 1.0 && p.x2 < 0.5 * (p.x1 + 1.0);
}

bool in_domain_closure(const Point& p, double tol) {
    return p.x1 >= -1.0 - tol && p.x1 <= 1.0 + tol && p.x2 >= -tol &&
           p.x2 <= 0.5 * (p.x1 + 1.0) + tol;
}

Point ray_to_point(const RayCoord& c, const GammaConfig& cfg) {
    const double s = 0.5 * std::pow(c.a, cfg.gamma);
    return {-c.a + (1.0 + c.a) * c.t, (1.0 + c.a) * c.t * s};
}

RayCoord point_to_ray(const Point& p, const GammaConfig& cfg) {
    if (!in_domain_closure(p))
        throw OutOfDomain("point_to_ray: point outside the closed triangle");
    if (p.x2 <= 0.0) {
        // degenerate rays on the x1-axis
        if (p.x1 > 0.0) return {p.x1, 0.0};
        return {0.0, -p.x1};
    }
    const double g = cfg.gamma;
    double lo = std::max(0.0, -p.x1);
    double hi = 1.0;
    auto resid = [&](double a) {
        return 0.5 * std::pow(a, g) * (p.x1 + a) - p.x2;
    };
    // residual is strictly increasing in a on the bracket; resid(hi) >= 0 on
    // the closed triangle (x2 <= (x1+1)/2)
    double a = 0.5 * (lo + hi);
    if (p.x1 > 1e-6) {
        // far from the foot the slope equation gives a ~ (2 x2 / x1)^{1/g}
        const double guess = std::pow(2.0 * p.x2 / p.x1, 1.0 / g);
        if (guess > lo && guess < hi) a = guess;
    }
    bool done = false;
    for (int it = 0; it < 200; ++it) {
        const double r = resid(a);
        if (std::fabs(r) <= cfg.root_tol) {
            done = true;
            break;
        }
        (r > 0.0 ? hi : lo) = a;
        const double dr =
            0.5 * (g * std::pow(a, g - 1.0) * (p.x1 + a) + std::pow(a, g));
        const double an = dr > 0.0 ? a - r / dr : -1.0;
        a = (an > lo && an < hi) ? an : 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            done = true;
            break;
        }
    }
    if (!done && std::fabs(resid(a)) > 1e3 * cfg.root_tol)
        throw NoConvergence("point_to_ray: root solve stalled");
    return {(p.x1 + a) / (1.0 + a), a};
}

double ray_length(double a, const GammaConfig& cfg) {
    const double s = 0.5 * std::pow(a, cfg.gamma);
    return (1.0 + a) * std::sqrt(1.0 + s * s);
}

double ray_length_dlog(double a, const GammaConfig& cfg) {
    const double g = cfg.gamma;
    const double a2g = std::pow(a, 2.0 * g);
    return (4.0 + a2g + g * (1.0 + a) * std::pow(a, 2.0 * g - 1.0)) /
           ((1.0 + a) * (4.0 + a2g));
}

double jacobian(const RayCoord& c, const GammaConfig& cfg) {
    const double g = cfg.gamma;
    if (c.a <= 0.0) {
        if (g < 1.0)
            throw SingularJacobian("jacobian: a = 0 is singular for gamma < 1");
        return g == 1.0 ? 0.5 * c.t : 0.0;
    }
    const double q = g * (1.0 + c.a) * c.t + c.a;
    return 0.5 * (1.0 + c.a) * q * std::pow(c.a, g - 1.0);
}

double jacobian_dt(const RayCoord& c, const GammaConfig& cfg) {
    const double g = cfg.gamma;
    if (c.a <= 0.0) {
        if (g < 1.0)
            throw SingularJacobian(
                "jacobian_dt: a = 0 is singular for gamma < 1");
        return g == 1.0 ? 0.5 : 0.0;
    }
    const double b = 1.0 + c.a;
    return 0.5 * g * b * b * std::pow(c.a, g - 1.0);
}

double jacobian_da(const RayCoord& c, const GammaConfig& cfg) {
    const double g = cfg.gamma;
    if (c.a <= 0.0)
        throw SingularJacobian("jacobian_da: a = 0 degenerates the formula");
    const double b = 1.0 + c.a;
    const double num =
        g * (g - 1.0) * b * b * c.t + (g * b * (1.0 + 2.0 * c.t) + c.a) * c.a;
    return 0.5 * num * std::pow(c.a, g - 2.0);
}

std::array<double, 2> unit_ray_direction(double a, const GammaConfig& cfg) {
    const double s = 0.5 * std::pow(a, cfg.gamma);
    const double n = std::sqrt(1.0 + s * s);
    return {1.0 / n, s / n};
}

Mat2 inverse_coordinate_jacobian(const RayCoord& c, const GammaConfig& cfg) {
    const double g = cfg.gamma;
    const double j = jacobian(c, cfg);
    if (j <= 0.0)
        throw SingularJacobian("inverse_coordinate_jacobian: J = 0");
    const double agm1 = std::pow(c.a, g - 1.0);
    Mat2 m;
    m.m00 = 0.5 * (g * (1.0 + c.a) + c.a) * c.t * agm1 / j;
    m.m01 = (1.0 - c.t) / j;
    m.m10 = -0.5 * (1.0 + c.a) * c.a * agm1 / j;
    m.m11 = (1.0 + c.a) / j;
    return m;
}

} // namespace td
