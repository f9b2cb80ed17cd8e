#include <td/densities.hpp>
#include <td/quadrature.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace td {

namespace {

// C^2 quintic smoothstep 0 -> 1 on [0,1] and its derivative jets. Arguments
// within a few ulps of the breakpoints saturate exactly (the true values
// there are below 1e-42), so cutoff supports stay clean under the rounding
// of (x - lo)/width.
constexpr double kSnap = 4e-15;

double smoothstep(double v) {
    if (v <= kSnap) return 0.0;
    if (v >= 1.0 - kSnap) return 1.0;
    return v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
}

double smoothstep_d1(double v) {
    if (v <= kSnap || v >= 1.0 - kSnap) return 0.0;
    const double u = v * (1.0 - v);
    return 30.0 * u * u;
}

double smoothstep_d2(double v) {
    if (v <= kSnap || v >= 1.0 - kSnap) return 0.0;
    return 60.0 * v * (1.0 - v) * (1.0 - 2.0 * v);
}

// height of ray a above its foot: x2 = s(a) tau along the ray
double ray_height(double a, double g) {
    return 0.5 * std::pow(a, g) * (1.0 + a);
}

double ray_height_da(double a, double g) {
    return 0.5 * (g * (1.0 + a) + a) * std::pow(a, g - 1.0);
}

void validate_smooth(const SmoothConfig& sc) {
    if (!(sc.eps > 0.0) || !(sc.eps < sc.eps_prime) || !(sc.eps_prime < 1.0))
        throw InvalidParameter("smooth cutoffs need 0 < eps < eps_prime < 1");
    if (!(3.0 * sc.eps <= sc.a0) || !(sc.a0 < 1.0))
        throw InvalidParameter("smooth cutoffs need 3 eps <= a0 < 1");
}

// (psi zeta)'' with the product rule; zero outside supp(psi).
double psi_zeta_d2(double x1, const SmoothConfig& sc) {
    const auto p = psi_jet(x1, sc);
    if (p[0] == 0.0 && p[1] == 0.0 && p[2] == 0.0) return 0.0;
    const auto z = zeta_jet(x1);
    return p[2] * z[0] + 2.0 * p[1] * z[1] + p[0] * z[2];
}

double q_of_tau(double tau, double a, double g) {
    return g * (1.0 + a) * tau + a;
}

} // namespace

std::array<double, 4> zeta_jet(double x1) {
    return {-x1 * x1 * (x1 - 1.0) * (x1 - 1.0),
            -(4.0 * x1 * x1 * x1 - 6.0 * x1 * x1 + 2.0 * x1),
            -(12.0 * x1 * x1 - 12.0 * x1 + 2.0),
            -(24.0 * x1 - 12.0)};
}

std::array<double, 3> psi_jet(double x1, const SmoothConfig& sc) {
    const double w = sc.eps_prime - sc.eps;
    const double v = (x1 - (1.0 - sc.eps_prime)) / w;
    return {1.0 - smoothstep(v), -smoothstep_d1(v) / w,
            -smoothstep_d2(v) / (w * w)};
}

double cutoff_phi(double x1, const SmoothConfig& sc) {
    const double w = sc.eps_prime - sc.eps;
    const double v = (x1 - (1.0 - sc.eps_prime)) / w;
    if (v <= kSnap || v >= 1.0 - kSnap) return 0.0;
    const double u = v * (1.0 - v);
    return 64.0 * u * u * u;
}

double cutoff_rho1(double a, const SmoothConfig& sc) {
    return 1.0 - smoothstep((a - sc.a0) / (0.5 * (1.0 - sc.a0)));
}

double cutoff_tau1(double x1, const SmoothConfig& sc) {
    return 1.0 - smoothstep((x1 - (1.0 - 0.5 * sc.eps)) / (0.25 * sc.eps));
}

double cutoff_rho2(double a, const SmoothConfig& sc) {
    return 1.0 - smoothstep((a - sc.eps) / (2.0 * sc.eps));
}

double cutoff_tau2(double x1, const SmoothConfig& sc) {
    return 1.0 - smoothstep((x1 - (1.0 - sc.eps)) / (0.5 * sc.eps));
}

DensityInstance make_single(GammaConfig cfg) {
    if (cfg.beta == 0.0) cfg.beta = choose_beta(cfg);
    DensityInstance inst;
    inst.cfg = cfg;
    inst.kind = InstanceKind::SingleTriangle;
    return inst;
}

DensityInstance make_chain(GammaConfig cfg, int n_max) {
    if (cfg.beta == 0.0) cfg.beta = choose_beta(cfg);
    DensityInstance inst;
    inst.cfg = cfg;
    inst.kind = InstanceKind::BVChain;
    inst.chain = build_chain(cfg, n_max);
    return inst;
}

DensityInstance make_smooth(GammaConfig cfg, SmoothConfig sc) {
    validate_smooth(sc);
    if (cfg.beta == 0.0) cfg.beta = choose_beta(cfg);
    DensityInstance inst;
    inst.cfg = cfg;
    inst.kind = InstanceKind::SmoothPlane;
    inst.smooth = sc;
    return inst;
}

double choose_beta(const GammaConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw InvalidParameter("choose_beta: gamma > 0");
    // |eta''| max over a log grid that lands on s = 1 exactly (where the max
    // sits for every gamma we use), then a golden-section polish of the best
    // bracket in case it ever moves inside.
    const int n = 4096;
    double best = 0.0;
    int ibest = 0;
    std::vector<double> ss(n);
    for (int i = 0; i < n; ++i) {
        ss[i] = std::pow(10.0, -12.0 * (1.0 - double(i) / (n - 1)));
        const double v = std::fabs(eta_jet(ss[i], cfg).eta2);
        if (v > best) {
            best = v;
            ibest = i;
        }
    }
    double lo = ss[std::max(0, ibest - 1)];
    double hi = ss[std::min(n - 1, ibest + 1)];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = std::fabs(eta_jet(x1, cfg).eta2);
    double f2 = std::fabs(eta_jet(x2, cfg).eta2);
    for (int it = 0; it < 160 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = std::fabs(eta_jet(x2, cfg).eta2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = std::fabs(eta_jet(x1, cfg).eta2);
        }
        best = std::max(best, std::max(f1, f2));
    }
    const double m_zeta = 26.0; // max |zeta''| on [-1,1], at x = -1
    return 1.0 / (2.0 * (m_zeta + best));
}

TriangleChain build_chain(const GammaConfig& cfg, int n_max) {
    if (!(cfg.gamma > 1.0))
        throw InvalidParameter("build_chain: the fan closes only for gamma > 1");
    if (n_max < 1) throw InvalidParameter("build_chain: n_max >= 1");
    TriangleChain ch;
    ch.n_max = n_max;
    ch.l.resize(n_max);
    ch.alpha.resize(n_max);
    ch.theta.resize(n_max);
    for (int k = 0; k < n_max; ++k) {
        ch.l[k] = 1.0 / double(k + 1);
        ch.alpha[k] = std::atan(0.5 * std::pow(ch.l[k], cfg.gamma));
    }
    ch.theta[0] = 0.0;
    for (int k = 1; k < n_max; ++k)
        ch.theta[k] = ch.theta[k - 1] + ch.alpha[k - 1] + ch.alpha[k];
    return ch;
}

Point chain_to_local(const TriangleChain& chain, int idx, const Point& p) {
    const double c = std::cos(chain.theta[idx]), s = std::sin(chain.theta[idx]);
    const double dx = p.x1 + 1.0, dy = p.x2;
    return {c * dx + s * dy - chain.l[idx], -s * dx + c * dy};
}

int chain_locate(const TriangleChain& chain, const Point& p,
                 const GammaConfig& cfg, double band) {
    for (int n = 0; n < chain.n_max; ++n) {
        const Point q = chain_to_local(chain, n, p);
        if (q.x1 > 1.0 + band || q.x1 < -chain.l[n] - band) continue;
        const double half =
            0.5 * std::pow(chain.l[n], cfg.gamma) * (q.x1 + chain.l[n]);
        if (std::fabs(q.x2) <= half + band) return n;
    }
    return -1;
}

double ray_label(const Point& p, const GammaConfig& cfg, double amax) {
    const double y = std::fabs(p.x2);
    const double lo0 = std::max(0.0, -p.x1);
    if (lo0 >= amax) return amax;
    if (y == 0.0) return lo0;
    auto r = [&](double a) {
        return 0.5 * std::pow(a, cfg.gamma) * (p.x1 + a) - y;
    };
    double lo = lo0, hi = amax;
    if (r(hi) <= 0.0) return amax;
    double a = std::min(amax, std::max(lo + 1e-16, 0.5 * (lo + hi)));
    for (int it = 0; it < 200; ++it) {
        const double ra = r(a);
        if (std::fabs(ra) <= cfg.root_tol) return a;
        if (ra > 0.0)
            hi = a;
        else
            lo = a;
        const double dr = 0.5 * std::pow(a, cfg.gamma) *
                          (cfg.gamma * (p.x1 + a) / a + 1.0);
        double next = (dr > 0.0) ? a - ra / dr : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        a = next;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            return a;
    }
    return a;
}

double f_plus(const Point& p, const DensityInstance& inst) {
    switch (inst.kind) {
    case InstanceKind::SingleTriangle:
        return in_domain(p) ? 1.0 : 0.0;
    case InstanceKind::BVChain:
        return chain_locate(*inst.chain, p, inst.cfg) >= 0 ? 1.0 : 0.0;
    case InstanceKind::SmoothPlane: {
        const SmoothConfig& sc = *inst.smooth;
        if (p.x1 >= 1.0 - 0.25 * sc.eps || p.x1 <= -1.0) return 0.0;
        const double a = ray_label(p, inst.cfg);
        return cutoff_rho1(a, sc) * cutoff_tau1(p.x1, sc);
    }
    }
    return 0.0;
}

double f_minus(const Point& p, const DensityInstance& inst) {
    const double beta = inst.cfg.beta;
    switch (inst.kind) {
    case InstanceKind::SingleTriangle: {
        if (!in_domain(p)) return 0.0;
        return 1.0 +
               beta * (zeta_jet(p.x1)[2] + eta_jet(p.x2, inst.cfg).eta2);
    }
    case InstanceKind::BVChain: {
        const int n = chain_locate(*inst.chain, p, inst.cfg);
        if (n < 0) return 0.0;
        const Point q = chain_to_local(*inst.chain, n, p);
        const double y = std::min(std::fabs(q.x2), 1.0);
        return 1.0 + beta * (zeta_jet(q.x1)[2] + eta_jet(y, inst.cfg).eta2);
    }
    case InstanceKind::SmoothPlane: {
        const SmoothConfig& sc = *inst.smooth;
        if (p.x1 >= 1.0 || p.x1 <= -1.0) return 0.0;
        const double a = ray_label(p, inst.cfg);
        double v = cutoff_rho1(a, sc) * cutoff_tau1(p.x1, sc);
        const double chi2 = cutoff_rho2(a, sc) * cutoff_tau2(p.x1, sc);
        if (chi2 > 0.0) {
            const double y = std::min(std::fabs(p.x2), 1.0);
            v += beta * (psi_zeta_d2(p.x1, sc) + eta_jet(y, inst.cfg).eta2) *
                 chi2;
        }
        const double phi = cutoff_phi(p.x1, sc);
        if (phi > 0.0)
            v += beta * phi * smooth_correction_c(a, sc, inst.cfg);
        return v;
    }
    }
    return 0.0;
}

double zeta_mass_closed_form(double a, const GammaConfig& cfg) {
    return 0.5 * std::pow(a, cfg.gamma + 2.0) * (1.0 + a) * (1.0 + a);
}

double mass_balance_residual(double a, const DensityInstance& inst) {
    if (!(a > 0.0) || !(a <= 1.0))
        throw InvalidParameter("mass_balance_residual: a in (0,1]");
    const GammaConfig& cfg = inst.cfg;
    const double tol_in = std::max(1e-3 * cfg.quad_tol, 1e-15);
    auto strip = [&](double ap) {
        RayDensity rd(inst, ap);
        return integrate(
            [&](double tau) {
                return rd.deficit(tau) * jacobian({tau, ap}, cfg);
            },
            0.0, 1.0, tol_in);
    };
    double v = integrate(strip, 0.0, a, 0.1 * cfg.quad_tol);
    if (inst.kind != InstanceKind::SingleTriangle) v *= 2.0; // mirror half
    return std::fabs(v);
}

double smooth_correction_c(double a, const SmoothConfig& sc,
                           const GammaConfig& cfg) {
    if (!(a > 0.0)) throw InvalidParameter("smooth_correction_c: a > 0");
    const double rho2 = cutoff_rho2(a, sc);
    if (rho2 == 0.0) return 0.0; // chi2 dead on the whole ray
    const double g = cfg.gamma;
    const double sa = ray_height(a, g);
    auto x1_of = [&](double tau) { return -a + (1.0 + a) * tau; };
    auto tau_of = [&](double x1) { return (x1 + a) / (1.0 + a); };
    const double tol = std::max(0.1 * cfg.quad_tol, 1e-14);

    const double den = integrate(
        [&](double tau) {
            return q_of_tau(tau, a, g) * cutoff_phi(x1_of(tau), sc);
        },
        tau_of(1.0 - sc.eps_prime), tau_of(1.0 - sc.eps), tol);
    if (!(std::fabs(den) > 1e-15))
        throw DegenerateDenominator("smooth_correction_c: phi moment vanished");

    if (a < sc.eps) {
        // on rays with chi2's a-factor identically 1 the defect reduces to
        // the part of eta'' that tau2 cuts away, which is nonnegative
        const double num = integrate(
            [&](double tau) {
                return q_of_tau(tau, a, g) * eta_jet(sa * tau, cfg).eta2 *
                       (1.0 - cutoff_tau2(x1_of(tau), sc));
            },
            tau_of(1.0 - sc.eps), 1.0, tol);
        return num / den;
    }
    const double num = integrate(
        [&](double tau) {
            const double x1 = x1_of(tau);
            return q_of_tau(tau, a, g) *
                   (psi_zeta_d2(x1, sc) + eta_jet(sa * tau, cfg).eta2) *
                   cutoff_tau2(x1, sc);
        },
        0.0, tau_of(1.0 - 0.5 * sc.eps), tol);
    return -rho2 * num / den;
}

RayDensity::RayDensity(const DensityInstance& inst, double a)
    : inst_(&inst), a_(a) {
    if (!(a >= 0.0) || !(a <= 1.0))
        throw InvalidParameter("RayDensity: a in [0,1]");
    s_ = ray_height(a, inst.cfg.gamma);
    sprime_ = (a > 0.0 || inst.cfg.gamma >= 1.0)
                  ? ray_height_da(a, inst.cfg.gamma)
                  : std::numeric_limits<double>::infinity();
    if (inst.kind == InstanceKind::SmoothPlane)
        c_ = a > 0.0 ? smooth_correction_c(a, *inst.smooth, inst.cfg) : 0.0;
}

double RayDensity::deficit(double tau) const {
    const GammaConfig& cfg = inst_->cfg;
    const double x1 = -a_ + (1.0 + a_) * tau;
    const double x2 = s_ * tau;
    if (inst_->kind != InstanceKind::SmoothPlane)
        return -cfg.beta * (zeta_jet(x1)[2] + eta_jet(x2, cfg).eta2);
    const SmoothConfig& sc = *inst_->smooth;
    const double chi2 = cutoff_rho2(a_, sc) * cutoff_tau2(x1, sc);
    double v = cutoff_phi(x1, sc) * c_;
    if (chi2 > 0.0)
        v += (psi_zeta_d2(x1, sc) + eta_jet(x2, cfg).eta2) * chi2;
    return -cfg.beta * v;
}

double RayDensity::deficit_da(double tau) const {
    if (inst_->kind == InstanceKind::SmoothPlane)
        throw InvalidParameter("deficit_da: triangle kernels only");
    if (a_ == 0.0 && inst_->cfg.gamma < 1.0)
        throw DomainError("deficit_da: foot ray is singular for gamma < 1");
    const GammaConfig& cfg = inst_->cfg;
    const double x1 = -a_ + (1.0 + a_) * tau;
    if (a_ == 0.0) // eta'''(s tau) s'(a) -> 0 on the foot ray for gamma >= 1
        return -cfg.beta * zeta_jet(x1)[3] * (tau - 1.0);
    const double x2 = s_ * tau;
    return -cfg.beta * (zeta_jet(x1)[3] * (tau - 1.0) +
                        eta_jet(x2, cfg).eta3 * tau * sprime_);
}

std::string instance_to_json(const DensityInstance& inst) {
    nlohmann::json j;
    switch (inst.kind) {
    case InstanceKind::SingleTriangle: j["kind"] = "single"; break;
    case InstanceKind::BVChain: j["kind"] = "chain"; break;
    case InstanceKind::SmoothPlane: j["kind"] = "smooth"; break;
    }
    j["gamma"] = inst.cfg.gamma;
    j["beta"] = inst.cfg.beta;
    j["quad_tol"] = inst.cfg.quad_tol;
    j["root_tol"] = inst.cfg.root_tol;
    if (inst.chain) j["n_max"] = inst.chain->n_max;
    if (inst.smooth) {
        j["eps"] = inst.smooth->eps;
        j["eps_prime"] = inst.smooth->eps_prime;
        j["a0"] = inst.smooth->a0;
    }
    return j.dump(2);
}

DensityInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("instance_from_json: ") + e.what());
    }
    auto need = [&](const char* key) {
        if (!j.contains(key))
            throw SchemaMismatch(std::string("instance_from_json: missing ") +
                                 key);
    };
    need("kind");
    need("gamma");
    GammaConfig cfg;
    cfg.gamma = j["gamma"].get<double>();
    cfg.beta = j.value("beta", 0.0);
    cfg.quad_tol = j.value("quad_tol", cfg.quad_tol);
    cfg.root_tol = j.value("root_tol", cfg.root_tol);
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "single") return make_single(cfg);
    if (kind == "chain") {
        need("n_max");
        return make_chain(cfg, j["n_max"].get<int>());
    }
    if (kind == "smooth") {
        SmoothConfig sc;
        sc.eps = j.value("eps", sc.eps);
        sc.eps_prime = j.value("eps_prime", sc.eps_prime);
        sc.a0 = j.value("a0", sc.a0);
        return make_smooth(cfg, sc);
    }
    throw SchemaMismatch("instance_from_json: unknown kind " + kind);
}

} // namespace td
