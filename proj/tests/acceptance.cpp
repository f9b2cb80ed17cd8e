// Acceptance gate: one check per release criterion, one PASS/FAIL line each.
// Run with a criterion number (1..10) or no argument for the full battery.
// Exit 0 iff every requested criterion passes, 1 otherwise.

#include <td/densities.hpp>
#include <td/eta.hpp>
#include <td/geometry.hpp>
#include <td/ot.hpp>
#include <td/quadrature.hpp>
#include <td/regularity.hpp>
#include <td/sigma.hpp>

#include "halton.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

using namespace td;

namespace {

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

DensityInstance single_g(double g, double tol = 1e-9) {
    GammaConfig cfg;
    cfg.gamma = g;
    cfg.quad_tol = tol;
    return make_single(cfg);
}

// 1. vertex growth: fitted slope of sigma above the focus is 1/(gamma+1)
//    within 0.05 with r2 >= 0.99 over eps in [1e-6, 1e-3], <= 30 s per gamma.
bool crit_vertex_growth(std::string& detail) {
    bool ok = true;
    for (double g : {1.0, 2.0, 4.0}) {
        const double t0 = now();
        const auto rep = holder_exponent_fit(single_g(g), 1e-6, 1e-3, 16);
        const double dt = now() - t0;
        const bool leg = std::fabs(rep.fitted_exponent -
                                   rep.expected_exponent) <= 0.05 &&
                         rep.r2 >= 0.99 && dt <= 30.0;
        ok = ok && leg;
        detail += fmt(" g=%g slope=%.4f (want %.4f+-0.05) r2=%.4f %.1fs%s;", g,
                      rep.fitted_exponent, rep.expected_exponent, rep.r2, dt,
                      leg ? "" : " <-");
    }
    return ok;
}

// 2. Sobolev threshold: above p* the seminorm grows like 1/r0 (exponent
//    1 +- 0.1); below p* successive r0-halvings move it by < 1% past 1e-4.
//    <= 2 min each.
bool crit_sobolev_threshold(std::string& detail) {
    double t0 = now();
    std::vector<double> radii(9);
    for (int k = 0; k < 9; ++k)
        radii[k] = std::pow(10.0, -2.0 - 2.0 * k / 8.0);
    const auto rep = divergence_rate_fit(single_g(3.0), 2.0, radii);
    double dt = now() - t0;
    const bool diverging =
        std::fabs(rep.fitted_exponent - 1.0) <= 0.1 && dt <= 120.0;
    detail += fmt(" g=3 p=2 rate=%.4f (want 1+-0.1) %.1fs%s;",
                  rep.fitted_exponent, dt, diverging ? "" : " <-");

    t0 = now();
    const auto g2 = single_g(2.0);
    const double n1 = lp_gradient_norm(g2, 1.2, 1e-4, 0.1);
    const double n2 = lp_gradient_norm(g2, 1.2, 5e-5, 0.1);
    const double n3 = lp_gradient_norm(g2, 1.2, 2.5e-5, 0.1);
    dt = now() - t0;
    const double d1 = std::fabs(n2 - n1) / n2, d2 = std::fabs(n3 - n2) / n3;
    const bool convergent = d1 < 0.01 && d2 < 0.01 && dt <= 120.0;
    detail += fmt(" g=2 p=1.2 halving moves=%.2e,%.2e (want <1%%) %.1fs%s",
                  d1, d2, dt, convergent ? "" : " <-");
    return diverging && convergent;
}

// 3. duality certificate: |primal - dual| / primal <= 1e-5 for gamma in
//    {1, 2} at quad_tol 1e-9, <= 1 min. The ray plan and ray potential are
//    each strictly suboptimal wherever sigma changes sign along rays, so the
//    measured gap has a structural floor of 2 int sigma^- (~7.7e-3 resp.
//    3.7e-3 relative); the criterion is reported as found.
bool crit_duality(std::string& detail) {
    bool ok = true;
    for (double g : {1.0, 2.0}) {
        const double t0 = now();
        const auto inst = single_g(g);
        const double P = monotone_ray_plan_cost(inst);
        const double D = dual_objective(inst);
        const double rel = std::fabs(P - D) / P;
        const double dt = now() - t0;
        const bool leg = rel <= 1e-5 && dt <= 60.0;
        ok = ok && leg;
        detail += fmt(" g=%g primal=%.8f dual=%.8f rel=%.2e (want <=1e-5) "
                      "%.1fs%s;",
                      g, P, D, rel, dt, leg ? "" : " <-");
    }
    return ok;
}

// 4. LP oracle: 32^2 quantization within 5% of the plan cost, and the
//    discrepancy shrinks >= 1.5x from 16^2 to 32^2, <= 2 min. The second
//    clause saturates: the LP converges to the true Wasserstein cost, which
//    sits ~1.4e-4 below the monotone ray plan, so the ratio tends to ~1.27.
bool crit_lp_oracle(std::string& detail) {
    const double t0 = now();
    const auto inst = single_g(1.0);
    const double P = monotone_ray_plan_cost(inst);
    const auto q16 = quantize_density(inst, 16);
    const auto q32 = quantize_density(inst, 32);
    const double lp16 = solve_discrete_ot(q16.plus, q16.minus).cost;
    const double lp32 = solve_discrete_ot(q32.plus, q32.minus).cost;
    const double rel32 = std::fabs(P - lp32) / P;
    const double shrink = std::fabs(P - lp16) / std::fabs(P - lp32);
    const double dt = now() - t0;
    const bool close = rel32 <= 0.05;
    const bool shrinking = shrink >= 1.5;
    detail += fmt(" plan=%.8f lp16=%.8f lp32=%.8f rel32=%.2e (want <=5e-2)%s "
                  "shrink=%.3f (want >=1.5)%s %.1fs",
                  P, lp16, lp32, rel32, close ? "" : " <-", shrink,
                  shrinking ? "" : " <-", dt);
    return close && shrinking && dt <= 120.0;
}

// 5. weak equation residual: 12-function battery, max residual <= 1e-6 at
//    quad_tol 1e-9, gamma 1, <= 1 min.
bool crit_weak_residual(std::string& detail) {
    const double t0 = now();
    const auto res = weak_pde_residual(single_g(1.0), default_bump_battery());
    double mx = 0.0;
    for (double r : res) mx = std::max(mx, r);
    const double dt = now() - t0;
    detail += fmt(" battery=%zu max residual=%.2e (want <=1e-6) %.1fs",
                  res.size(), mx, dt);
    return mx <= 1e-6 && dt <= 60.0;
}

// 6. derivative identities: analytic dt/da/dx2 of sigma against central
//    differences at 1000 low-discrepancy points (rel err <= 1e-3 with floor
//    0.01 beta), plus the three Jacobian identities at 1e-10, <= 1 min.
bool crit_derivatives(std::string& detail) {
    const double t0 = now();
    const auto inst = single_g(2.0, 1e-12);
    const GammaConfig& cfg = inst.cfg;
    const double floor = 0.01 * inst.cfg.beta;
    const double h = 1e-5;
    double worst = 0.0;
    for (unsigned i = 1; i <= 1000; ++i) {
        const double t = 0.05 + 0.85 * td_test::halton(i, 2);
        const double a = 0.06 + 0.88 * td_test::halton(i, 3);
        auto rel = [&](double fd, double an) {
            return std::fabs(fd - an) / std::max(std::fabs(an), floor);
        };
        const double fdt =
            (sigma({t + h, a}, inst) - sigma({t - h, a}, inst)) / (2.0 * h);
        worst = std::max(worst, rel(fdt, dsigma_dt({t, a}, inst)));
        const double fda =
            (sigma({t, a + h}, inst) - sigma({t, a - h}, inst)) / (2.0 * h);
        worst = std::max(worst, rel(fda, dsigma_da({t, a}, inst)));
        const Point p = ray_to_point({t, a}, cfg);
        const double fx2 = (sigma_at_point({p.x1, p.x2 + h}, inst) -
                            sigma_at_point({p.x1, p.x2 - h}, inst)) /
                           (2.0 * h);
        worst = std::max(worst, rel(fx2, sigma_jet({t, a}, inst).dx2));
    }

    // (i) J = det d(x1,x2)/d(t,a), (ii) the antisymmetric da-bracket,
    // (iii) the cumulative trapezoid identity (J linear in t)
    double jworst = 0.0;
    for (double g : {1.0, 2.0, 3.0}) {
        GammaConfig c;
        c.gamma = g;
        for (double a : {0.2, 0.5, 0.8}) {
            for (double t : {0.15, 0.5, 0.85}) {
                const double agm1 = std::pow(a, g - 1.0);
                const double f00 = 1.0 + a, f01 = t - 1.0;
                const double f10 = 0.5 * (1.0 + a) * a * agm1;
                const double f11 =
                    0.5 * t * agm1 * (a + g * (1.0 + a));
                jworst = std::max(jworst, std::fabs(f00 * f11 - f01 * f10 -
                                                    jacobian({t, a}, c)));
                const double tau = 0.5 * t + 0.1;
                const double bracket =
                    jacobian({t, a}, c) * jacobian_da({tau, a}, c) -
                    jacobian({tau, a}, c) * jacobian_da({t, a}, c);
                const double closed = 0.25 * g * (1.0 + a) * (1.0 + a) *
                                      (t - tau) * std::pow(a, 2.0 * g - 2.0);
                jworst = std::max(jworst, std::fabs(bracket - closed));
                const double quad = integrate(
                    [&](double s) { return jacobian({s, a}, c); }, 0.0, t,
                    1e-13);
                const double trap =
                    0.5 * t *
                    (jacobian({t, a}, c) + 0.5 * (1.0 + a) * std::pow(a, g));
                jworst = std::max(jworst, std::fabs(quad - trap));
            }
        }
    }
    const double dt = now() - t0;
    detail += fmt(" max FD rel err=%.2e (want <=1e-3) jacobian identities="
                  "%.2e (want <=1e-10) %.1fs",
                  worst, jworst, dt);
    return worst <= 1e-3 && jworst <= 1e-10 && dt <= 60.0;
}

// 7. mass balance: per-subgraph residual <= 1e-9 at 20 log-spaced labels for
//    every instance kind, and the closed form a^{g+2}(1+a)^2/2 for
//    -int zeta'' over the subgraph.
bool crit_mass_balance(std::string& detail) {
    const double t0 = now();
    std::vector<double> labels(20);
    for (int k = 0; k < 20; ++k)
        labels[k] = std::pow(10.0, -3.0 + (std::log10(0.9) + 3.0) * k / 19.0);

    GammaConfig chain_cfg;
    chain_cfg.gamma = 2.0;
    GammaConfig smooth_cfg;
    smooth_cfg.gamma = 3.0;
    const DensityInstance kinds[] = {single_g(1.0), single_g(2.0),
                                     make_chain(chain_cfg, 8),
                                     make_smooth(smooth_cfg)};
    double worst = 0.0;
    for (const auto& inst : kinds)
        for (double a : labels)
            worst = std::max(worst, mass_balance_residual(a, inst));

    double closed_worst = 0.0;
    for (double g : {1.0, 2.0, 3.0}) {
        for (double a : labels) {
            const double quad =
                0.5 * std::pow(a, g) *
                integrate(
                    [&](double x1) { return zeta_jet(x1)[2] * (x1 + a); },
                    -a, 1.0, 1e-13);
            const double closed =
                -0.5 * std::pow(a, g + 2.0) * (1.0 + a) * (1.0 + a);
            closed_worst = std::max(closed_worst, std::fabs(quad - closed));
        }
    }
    const double dt = now() - t0;
    detail += fmt(" max residual=%.2e over 4 kinds x 20 labels, closed-form "
                  "gap=%.2e (want <=1e-9) %.1fs",
                  worst, closed_worst, dt);
    return worst <= 1e-9 && closed_worst <= 1e-9;
}

// 8. BV divergence at gamma 2: S_N / ln N stable within 10% over
//    N in [500, 1000] while the target-gradient partial sums have tail < 1%
//    after N = 100, <= 5 min.
bool crit_bv(std::string& detail) {
    const double t0 = now();
    GammaConfig cfg;
    cfg.gamma = 2.0;
    cfg.quad_tol = 1e-7;
    const auto chain = make_chain(cfg, 1000);
    const auto sums = bv_partial_sums(chain, 1000);
    const auto comp = bv_companion_sums(chain, 1000);
    double r500 = 0.0, r1000 = 0.0;
    for (std::size_t i = 0; i < sums.grid.size(); ++i) {
        if (sums.grid[i] >= 499.5 && r500 == 0.0)
            r500 = sums.values[i] / std::log(sums.grid[i]);
        r1000 = sums.values[i] / std::log(sums.grid[i]);
    }
    double c100 = 0.0, cend = 0.0;
    for (std::size_t i = 0; i < comp.grid.size(); ++i) {
        if (comp.grid[i] <= 100.5) c100 = comp.values[i];
        cend = comp.values[i];
    }
    const double drift = std::fabs(r1000 - r500) / std::fabs(r1000);
    const double tail = (cend - c100) / cend;
    const double dt = now() - t0;
    detail += fmt(" S_N/lnN drift=%.2f%% (want <=10%%) companion "
                  "tail=%.3f%% (want <1%%) %.1fs",
                  100.0 * drift, 100.0 * tail, dt);
    return drift <= 0.10 && tail < 0.01 && dt <= 300.0;
}

// 9. eta cascade: four derivative orders against FD (rel err <= 1e-5 away
//    from the endpoints) and the |eta'''| <= C s^{2/g - 1} envelope with a
//    refinement-stable constant for gamma in {1, 2, 4}.
bool crit_eta_cascade(std::string& detail) {
    const double t0 = now();
    bool ok = true;
    for (double g : {1.0, 2.0, 4.0}) {
        GammaConfig cfg;
        cfg.gamma = g;
        double worst = 0.0;
        for (double s : {0.05, 0.3, 0.5, 0.8}) {
            const double h = std::cbrt(1e-16) * s;
            const auto jp = eta_jet(s + h, cfg);
            const auto jm = eta_jet(s - h, cfg);
            const auto j = eta_jet(s, cfg);
            const double pairs[4][3] = {{jp.eta0, jm.eta0, j.eta1},
                                        {jp.eta1, jm.eta1, j.eta2},
                                        {jp.eta2, jm.eta2, j.eta3},
                                        {jp.eta3, jm.eta3, j.eta4}};
            for (const auto& f : pairs)
                worst = std::max(worst,
                                 std::fabs((f[0] - f[1]) / (2.0 * h) - f[2]) /
                                     std::max(1.0, std::fabs(f[2])));
        }
        const double c400 = eta_holder_bound(cfg, 400);
        const double c800 = eta_holder_bound(cfg, 800);
        const double ratio = c400 / c800;
        bool envelope = std::isfinite(c800) && ratio > 0.9 && ratio < 1.1;
        for (int k = 1; k <= 60 && envelope; ++k) {
            const double s = std::pow(10.0, -k / 6.0);
            envelope = std::fabs(eta_jet(s, cfg).eta3) <=
                       1.001 * c800 * std::pow(s, 2.0 / g - 1.0);
        }
        const bool leg = worst <= 1e-5 && envelope;
        ok = ok && leg;
        detail += fmt(" g=%g FD=%.1e C^=%.3g stab=%.3f%s;", g, worst, c800,
                      ratio, leg ? "" : " <-");
    }
    detail += fmt(" %.1fs", now() - t0);
    return ok;
}

// 10. smooth variant at gamma 3: per-subgraph mass balance within 1e-8 and
//     the |c'(a)| <= C a envelope on (1e-4, eps).
bool crit_smooth(std::string& detail) {
    const double t0 = now();
    GammaConfig cfg;
    cfg.gamma = 3.0;
    SmoothConfig sc;
    const auto inst = make_smooth(cfg, sc);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double a =
            std::pow(10.0, -3.0 + (std::log10(0.9) + 3.0) * k / 19.0);
        worst = std::max(worst, mass_balance_residual(a, inst));
    }
    double rmin = 1e300, rmax = 0.0;
    for (int k = 0; k < 12; ++k) {
        const double a = std::exp(std::log(1e-4) +
                                  (std::log(0.5 * sc.eps) - std::log(1e-4)) *
                                      k / 11.0);
        const double cp = (smooth_correction_c(1.5 * a, sc, cfg) -
                           smooth_correction_c(0.5 * a, sc, cfg)) /
                          a;
        const double ratio = std::fabs(cp) / a;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    const double dt = now() - t0;
    detail += fmt(" max residual=%.2e (want <=1e-8) |c'|/a in [%.2f, %.2f] "
                  "(want stable) %.1fs",
                  worst, rmin, rmax, dt);
    return worst <= 1e-8 && std::isfinite(rmax) && rmax / rmin <= 1.25;
}

struct Criterion {
    int id;
    const char* name;
    bool (*check)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "vertex growth scaling", crit_vertex_growth},
    {2, "sobolev threshold", crit_sobolev_threshold},
    {3, "duality certificate", crit_duality},
    {4, "lp oracle agreement", crit_lp_oracle},
    {5, "weak equation residual", crit_weak_residual},
    {6, "derivative identities", crit_derivatives},
    {7, "mass balance", crit_mass_balance},
    {8, "bv divergence", crit_bv},
    {9, "eta cascade", crit_eta_cascade},
    {10, "smooth variant", crit_smooth},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1 && std::strcmp(argv[1], "all") != 0) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 10) {
            std::fprintf(stderr, "usage: %s [1..10|all]\n", argv[0]);
            return 64;
        }
    }
    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        const bool ok = c.check(detail);
        failures += ok ? 0 : 1;
        std::printf("[%s] criterion %d (%s):%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name, detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
