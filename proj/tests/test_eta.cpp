#include <doctest.h>

#include <td/eta.hpp>

#include <cmath>
#include <limits>

using td::GammaConfig;

namespace {

GammaConfig cfg_g(double g) {
    GammaConfig c;
    c.gamma = g;
    return c;
}

double profile(double a, double g) { return 0.5 * std::pow(a, g) * (1.0 + a); }

// closed form for eta''(1): with D = 2g+1, a=1 gives a' = 2/D,
// a'' = -8 g^2/D^3, so eta'' = 2 + 16/D + 8/D^2 - 16 g^2/D^3
double eta2_at_one(double g) {
    const double d = 2.0 * g + 1.0;
    return 2.0 + 16.0 / d + 8.0 / (d * d) - 16.0 * g * g / (d * d * d);
}

} // namespace

TEST_CASE("solve_a: pinned roots and endpoints") {
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        CHECK(td::solve_a(0.0, cfg_g(g)) == 0.0);
        CHECK(td::solve_a(1.0, cfg_g(g)) == 1.0);
    }
    // g=1: closed-form root of a^2 + a = 2s at s = 0.25
    CHECK(td::solve_a(0.25, cfg_g(1.0)) ==
          doctest::Approx((std::sqrt(3.0) - 1.0) / 2.0).epsilon(1e-15));
    // g=2: a^2 (1+a) = 0.2
    const double a = td::solve_a(0.1, cfg_g(2.0));
    CHECK(std::fabs(a * a * (1.0 + a) - 0.2) < 1e-12);
}

TEST_CASE("solve_a: monotone, tiny residual, relative accuracy at tiny s") {
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        double prev = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            const double s = i / 1000.0;
            const double a = td::solve_a(s, cfg);
            CHECK(a > prev);
            prev = a;
            CHECK(std::fabs(profile(a, g) - s) < 1e-12);
        }
        // relative accuracy across 30 decades
        for (int k = 1; k <= 30; ++k) {
            const double s = std::pow(10.0, -k);
            const double a = td::solve_a(s, cfg);
            CHECK(std::fabs(profile(a, g) / s - 1.0) < 4e-15);
        }
    }
}

TEST_CASE("a_jet: identity derivative and pinned slope") {
    // d/ds[(a^g/2)(1+a)] evaluated with a_jet must be 1
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (double s : {1e-8, 1e-3, 0.25, 0.9}) {
            const auto j = td::a_jet(s, 1, cfg);
            const double a = j[0];
            const double dp =
                0.5 * (g * std::pow(a, g - 1.0) * (1.0 + a) + std::pow(a, g));
            CHECK(std::fabs(dp * j[1] - 1.0) < 1e-12);
        }
    }
    // g=1, s=1: a'(1) = 2/(1+2a) = 2/3
    CHECK(td::a_jet(1.0, 1, cfg_g(1.0))[1] ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(td::a_jet(0.0, 2, cfg_g(2.0)), td::DomainError);
}

TEST_CASE("a_jet: each order matches finite differences of the previous") {
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (double s : {0.05, 0.25, 0.6}) {
            const auto j = td::a_jet(s, 4, cfg);
            for (int k = 1; k <= 4; ++k) {
                const double h = std::cbrt(1e-16) * s;
                const auto jp = td::a_jet(s + h, 4, cfg);
                const auto jm = td::a_jet(s - h, 4, cfg);
                const double fd =
                    (jp[static_cast<size_t>(k - 1)] -
                     jm[static_cast<size_t>(k - 1)]) /
                    (2.0 * h);
                const double ref = j[static_cast<size_t>(k)];
                CHECK(std::fabs(fd - ref) <=
                      1e-5 * std::max(1.0, std::fabs(ref)));
            }
        }
    }
}

TEST_CASE("a(s) is an analytic function of y = s^{1/g} down to y = 0") {
    // substitution check: a = h(y) with h(y) = 2^{1/g} y - (2^{2/g}/g) y^2 + O(y^3)
    for (double g : {2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        const double c1 = std::pow(2.0, 1.0 / g);
        const double c2 = std::pow(2.0, 2.0 / g) / g;
        for (double y : {1e-4, 1e-3, 1e-2}) {
            const double h = td::solve_a(std::pow(y, g), cfg);
            CHECK(std::fabs(h - c1 * y + c2 * y * y) < 10.0 * y * y * y);
        }
    }
}

TEST_CASE("eta_jet: pinned values") {
    const auto c1 = cfg_g(1.0);
    const auto z = td::eta_jet(0.0, c1);
    CHECK(z.eta0 == 0.0);
    CHECK(z.eta1 == 0.0);
    CHECK(z.eta2 == 0.0);

    CHECK(td::eta_jet(0.25, c1).eta0 ==
          doctest::Approx(0.008373412263472584).epsilon(1e-14));

    // eta''(1) closed form across gamma
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        CHECK(td::eta_jet(1.0, cfg_g(g)).eta2 ==
              doctest::Approx(eta2_at_one(g)).epsilon(1e-13));
    }
    // spot rationals: 206/27, 626/125, 2570/729
    CHECK(td::eta_jet(1.0, cfg_g(1.0)).eta2 ==
          doctest::Approx(206.0 / 27.0).epsilon(1e-14));
    CHECK(td::eta_jet(1.0, cfg_g(2.0)).eta2 ==
          doctest::Approx(626.0 / 125.0).epsilon(1e-14));
    CHECK(td::eta_jet(1.0, cfg_g(4.0)).eta2 ==
          doctest::Approx(2570.0 / 729.0).epsilon(1e-14));
}

TEST_CASE("eta_jet: derivative cascade matches finite differences") {
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (double s : {0.05, 0.3, 0.5, 0.8}) {
            const double h = std::cbrt(1e-16) * s;
            const auto jp = td::eta_jet(s + h, cfg);
            const auto jm = td::eta_jet(s - h, cfg);
            const auto j = td::eta_jet(s, cfg);
            const double fixtures[4][3] = {
                {jp.eta0, jm.eta0, j.eta1},
                {jp.eta1, jm.eta1, j.eta2},
                {jp.eta2, jm.eta2, j.eta3},
                {jp.eta3, jm.eta3, j.eta4},
            };
            for (const auto& f : fixtures) {
                const double fd = (f[0] - f[1]) / (2.0 * h);
                CHECK(std::fabs(fd - f[2]) <=
                      1e-5 * std::max(1.0, std::fabs(f[2])));
            }
        }
    }
}

TEST_CASE("eta_jet: one-sided limits at s = 0") {
    // gamma = 2: eta''' -> 12; gamma = 1: eta'''' -> 96
    CHECK(td::eta_jet(0.0, cfg_g(2.0)).eta3 == 12.0);
    CHECK(td::eta_jet(1e-10, cfg_g(2.0)).eta3 ==
          doctest::Approx(12.0).epsilon(1e-4));
    CHECK(td::eta_jet(0.0, cfg_g(1.0)).eta4 == 96.0);
    CHECK(td::eta_jet(1e-10, cfg_g(1.0)).eta4 ==
          doctest::Approx(96.0).epsilon(1e-4));
    CHECK(td::eta_jet(0.0, cfg_g(3.0)).eta3 ==
          std::numeric_limits<double>::infinity());
    CHECK(td::eta_jet(0.0, cfg_g(0.5)).eta3 == 0.0);
    CHECK(td::eta_jet(0.0, cfg_g(0.5)).eta4 == 0.0);
}

TEST_CASE("smoothness classes as boundedness statements") {
    // gamma = 1: eta'''' has a Lipschitz constant stable as the window
    // approaches 0
    {
        const auto cfg = cfg_g(1.0);
        auto lip = [&](double lo) {
            double worst = 0.0;
            double prev_s = lo, prev_v = td::eta_jet(lo, cfg).eta4;
            for (int i = 1; i <= 400; ++i) {
                const double s = lo + (1.0 - lo) * i / 400.0;
                const double v = td::eta_jet(s, cfg).eta4;
                worst = std::max(worst,
                                 std::fabs(v - prev_v) / (s - prev_s));
                prev_s = s;
                prev_v = v;
            }
            return worst;
        };
        const double l3 = lip(1e-3), l6 = lip(1e-6);
        CHECK(l6 <= 1.05 * l3 + 1.0);
    }
    // gamma = 2: eta''' stays bounded down to s = 1e-12
    {
        const auto cfg = cfg_g(2.0);
        double worst = 0.0;
        for (int k = 0; k <= 120; ++k)
            worst = std::max(worst, std::fabs(td::eta_jet(
                                                  std::pow(10.0, -k / 10.0),
                                                  cfg)
                                                  .eta3));
        CHECK(worst < 50.0);
    }
    // gamma = 4: eta'' is 2/gamma-Hoelder at 0: eta''(s)/s^{1/2} bounded
    {
        const auto cfg = cfg_g(4.0);
        double worst = 0.0;
        for (int k = 0; k <= 120; ++k) {
            const double s = std::pow(10.0, -k / 10.0);
            worst = std::max(worst, std::fabs(td::eta_jet(s, cfg).eta2) /
                                        std::sqrt(s));
        }
        CHECK(worst < 50.0);
    }
}

TEST_CASE("eta_holder_bound: finite and refinement-stable") {
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        const double c1 = td::eta_holder_bound(cfg, 400);
        const double c2 = td::eta_holder_bound(cfg, 800);
        CHECK(std::isfinite(c1));
        CHECK(c1 > 0.0);
        const double ratio = c1 / c2;
        CHECK(ratio > 0.9);
        CHECK(ratio < 1.1);
    }
}

TEST_CASE("eta envelope: |eta'''| <= C s^{2/g - 1} holds on the sample") {
    // the empirical constant is a grid max, so off-grid points may exceed it
    // by the sampling error; 0.1% covers the flat-top curvature miss
    for (double g : {1.0, 2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        const double chat = td::eta_holder_bound(cfg, 800);
        for (int k = 1; k <= 60; ++k) {
            const double s = std::pow(10.0, -k / 6.0);
            const double env = chat * std::pow(s, 2.0 / g - 1.0);
            CHECK(std::fabs(td::eta_jet(s, cfg).eta3) <= env * 1.001);
        }
    }
}
