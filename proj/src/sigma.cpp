#include <td/sigma.hpp>

#include <td/quadrature.hpp>

#include <cmath>
#include <limits>

namespace td {

namespace {

double q_of(double tau, double a, double g) {
    return g * (1.0 + a) * tau + a;
}

void check_coord(const RayCoord& c) {
    if (!(c.t >= 0.0) || !(c.t <= 1.0 + 1e-12) || !(c.a >= 0.0) ||
        !(c.a <= 1.0))
        throw OutOfDomain("sigma: ray coordinate outside [0,1]^2");
}

} // namespace

RayAccumulator::RayAccumulator(const DensityInstance& inst, double a,
                               bool with_da)
    : inst_(&inst), rd_(inst, a), with_da_(with_da), a_(a),
      l_(ray_length(a, inst.cfg)),
      ldl_(with_da ? ray_length_dlog(a, inst.cfg) : 0.0) {}

SigmaJet RayAccumulator::eval(double t) {
    const GammaConfig& cfg = inst_->cfg;
    const double g = cfg.gamma;
    if (t < t_ - 1e-15)
        throw InvalidParameter("RayAccumulator: t must be nondecreasing");
    if (!(t <= 1.0 + 1e-12)) throw OutOfDomain("RayAccumulator: t > 1");
    if (t > t_) {
        const double tol = cfg.quad_tol * std::max(t - t_, 1e-3);
        A0_ += integrate(
            [&](double u) { return rd_.deficit(u) * q_of(u, a_, g); }, t_, t,
            tol);
        if (with_da_) {
            F1_ += integrate([&](double u) { return rd_.deficit(u); }, t_, t,
                             tol);
            Ft_ += integrate([&](double u) { return rd_.deficit(u) * u; }, t_,
                             t, tol);
            B0_ += integrate(
                [&](double u) { return rd_.deficit_da(u) * q_of(u, a_, g); },
                t_, t, tol);
        }
        t_ = t;
    }

    SigmaJet jet;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double qt = q_of(t, a_, g);
    if (t == 0.0 && a_ == 0.0) {
        // vertex: sigma -> 0 and sigma/q -> l F(0) / (2 gamma); the
        // Cartesian map is singular here
        jet.sigma = 0.0;
        jet.dt = 0.5 * l_ * rd_.deficit(0.0);
        jet.da = with_da_ ? 0.0 : nan;
        jet.dx1 = nan;
        jet.dx2 = nan;
        return jet;
    }
    jet.sigma = l_ * A0_ / qt;
    jet.dt = l_ * rd_.deficit(t) - g * (1.0 + a_) * jet.sigma / qt;
    if (!with_da_) {
        jet.da = nan;
        jet.dx1 = nan;
        jet.dx2 = nan;
        return jet;
    }
    jet.da = ldl_ * jet.sigma + g * l_ * (t * F1_ - Ft_) / (qt * qt) +
             l_ * B0_ / qt;
    if (a_ > 0.0) {
        const double J = jacobian({t, a_}, cfg);
        const double ag1 = std::pow(a_, g - 1.0);
        jet.dx2 = (jet.dt * (1.0 - t) + jet.da * (1.0 + a_)) / J;
        jet.dx1 = (jet.dt * (g * (1.0 + a_) + a_) * t * ag1 * 0.5 -
                   jet.da * (1.0 + a_) * 0.5 * ag1 * a_) /
                  J;
    } else {
        jet.dx1 = nan;
        jet.dx2 = nan;
    }
    return jet;
}

double sigma(const RayCoord& c, const DensityInstance& inst) {
    check_coord(c);
    if (c.t == 0.0) return 0.0;
    return RayAccumulator(inst, c.a, false).eval(c.t).sigma;
}

double dsigma_dt(const RayCoord& c, const DensityInstance& inst) {
    check_coord(c);
    return RayAccumulator(inst, c.a, false).eval(c.t).dt;
}

double dsigma_da(const RayCoord& c, const DensityInstance& inst) {
    check_coord(c);
    return RayAccumulator(inst, c.a).eval(c.t).da;
}

double dsigma_dx2(const RayCoord& c, const DensityInstance& inst) {
    check_coord(c);
    return RayAccumulator(inst, c.a).eval(c.t).dx2;
}

SigmaJet sigma_jet(const RayCoord& c, const DensityInstance& inst) {
    check_coord(c);
    return RayAccumulator(inst, c.a).eval(c.t);
}

double sigma_at_point(const Point& p, const DensityInstance& inst) {
    switch (inst.kind) {
    case InstanceKind::SingleTriangle:
        return sigma(point_to_ray(p, inst.cfg), inst);
    case InstanceKind::BVChain: {
        const int n = chain_locate(*inst.chain, p, inst.cfg);
        if (n < 0) return 0.0;
        Point q = chain_to_local(*inst.chain, n, p);
        q.x2 = std::fabs(q.x2);
        // the local point lies in the principal triangle; clamp the rounding
        // of the rigid motion off its boundary
        q.x2 = std::min(q.x2, 0.5 * (q.x1 + 1.0));
        if (q.x1 > 1.0) q.x1 = 1.0;
        return sigma(point_to_ray(q, inst.cfg), inst);
    }
    case InstanceKind::SmoothPlane: {
        const Point q{p.x1, std::fabs(p.x2)};
        if (!in_domain_closure(q, 1e-12)) return 0.0;
        return sigma(point_to_ray(q, inst.cfg), inst);
    }
    }
    return 0.0;
}

double potential_u0(double a, const GammaConfig& cfg) {
    if (!(a >= 0.0) || !(a <= 1.0))
        throw OutOfDomain("potential_u0: a in [0,1]");
    if (a == 0.0) return 0.0;
    const double g2 = 2.0 * cfg.gamma;
    return integrate(
        [&](double s) { return 1.0 / std::sqrt(1.0 + 0.25 * std::pow(s, g2)); },
        0.0, a, std::min(cfg.quad_tol, 1e-12));
}

double potential_u(const RayCoord& c, const GammaConfig& cfg) {
    check_coord(c);
    return potential_u0(c.a, cfg) - c.t * ray_length(c.a, cfg);
}

double potential_at_point(const Point& p, const GammaConfig& cfg) {
    return potential_u(point_to_ray(p, cfg), cfg);
}

} // namespace td
