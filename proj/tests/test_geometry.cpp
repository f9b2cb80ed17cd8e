#include <doctest.h>

#include <td/geometry.hpp>
#include <td/quadrature.hpp>

#include "halton.hpp"

#include <cmath>

using td::GammaConfig;
using td::Point;
using td::RayCoord;

namespace {
GammaConfig cfg_g(double g) {
    GammaConfig c;
    c.gamma = g;
    return c;
}
} // namespace

TEST_CASE("ray_to_point: pinned values") {
    const auto c1 = cfg_g(1.0);
    const Point p = td::ray_to_point({0.5, 0.5}, c1);
    CHECK(p.x1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.x2 == doctest::Approx(0.1875).epsilon(1e-15));

    for (double a : {0.0, 0.3, 1.0}) {
        const Point foot = td::ray_to_point({0.0, a}, c1);
        CHECK(foot.x1 == doctest::Approx(-a));
        CHECK(foot.x2 == 0.0);
    }

    const Point apex = td::ray_to_point({1.0, 1.0}, c1);
    CHECK(apex.x1 == doctest::Approx(1.0));
    CHECK(apex.x2 == doctest::Approx(1.0));
}

TEST_CASE("point_to_ray: pinned values and axis convention") {
    const auto c1 = cfg_g(1.0);
    const RayCoord rc = td::point_to_ray({0.25, 0.1875}, c1);
    CHECK(rc.t == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rc.a == doctest::Approx(0.5).epsilon(1e-12));

    const RayCoord axis_neg = td::point_to_ray({-0.3, 0.0}, c1);
    CHECK(axis_neg.t == 0.0);
    CHECK(axis_neg.a == doctest::Approx(0.3));

    const RayCoord axis_pos = td::point_to_ray({0.4, 0.0}, c1);
    CHECK(axis_pos.t == doctest::Approx(0.4));
    CHECK(axis_pos.a == 0.0);

    CHECK_THROWS_AS(td::point_to_ray({1.5, 0.1}, c1), td::OutOfDomain);
    CHECK_THROWS_AS(td::point_to_ray({0.0, 0.9}, c1), td::OutOfDomain);
}

TEST_CASE("point_to_ray round trip on a Halton sample") {
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto cfg = cfg_g(g);
        const auto pts = td_test::triangle_sample(10000);
        double worst = 0.0;
        for (const auto& p : pts) {
            const RayCoord rc = td::point_to_ray(p, cfg);
            const Point back = td::ray_to_point(rc, cfg);
            worst = std::max(worst, std::fabs(back.x1 - p.x1));
            worst = std::max(worst, std::fabs(back.x2 - p.x2));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("ray disjointness: the a-solve is injective across rays") {
    const auto cfg = cfg_g(2.0);
    for (int i = 1; i <= 40; ++i) {
        const double a = i / 41.0;
        for (int j = 1; j <= 20; ++j) {
            const double t = j / 21.0;
            const RayCoord rc = td::point_to_ray(td::ray_to_point({t, a}, cfg), cfg);
            CHECK(std::fabs(rc.a - a) < 1e-9);
        }
    }
}

TEST_CASE("ray_length: pinned values") {
    CHECK(td::ray_length(0.0, cfg_g(1.0)) == doctest::Approx(1.0));
    CHECK(td::ray_length(1.0, cfg_g(1.0)) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(td::ray_length(1.0, cfg_g(2.0)) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("ray_length_dlog matches finite differences") {
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (double a : {0.2, 0.5, 0.9}) {
            const double h = 1e-6;
            const double fd = (td::ray_length(a + h, cfg) -
                               td::ray_length(a - h, cfg)) /
                              (2.0 * h * td::ray_length(a, cfg));
            CHECK(td::ray_length_dlog(a, cfg) ==
                  doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("jacobian: pinned values and a = 0 conventions") {
    CHECK(td::jacobian({0.5, 0.5}, cfg_g(1.0)) == doctest::Approx(0.9375));
    CHECK(td::jacobian({1.0, 1.0}, cfg_g(1.0)) == doctest::Approx(3.0));
    for (double a : {0.25, 0.7}) {
        const double expect = 0.5 * (1.0 + a) * std::pow(a, 3.0);
        CHECK(td::jacobian({0.0, a}, cfg_g(3.0)) ==
              doctest::Approx(expect).epsilon(1e-14));
    }
    // a = 0: continuous limit for gamma >= 1, singular below
    CHECK(td::jacobian({0.6, 0.0}, cfg_g(1.0)) == doctest::Approx(0.3));
    CHECK(td::jacobian({0.6, 0.0}, cfg_g(2.0)) == 0.0);
    CHECK_THROWS_AS(td::jacobian({0.6, 0.0}, cfg_g(0.5)),
                    td::SingularJacobian);
}

TEST_CASE("jacobian positivity on the open square") {
    for (double g : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (int i = 1; i < 20; ++i)
            for (int j = 1; j < 20; ++j)
                CHECK(td::jacobian({i / 20.0, j / 20.0}, cfg) > 0.0);
    }
}

TEST_CASE("jacobian_dt: pinned values and FD check") {
    CHECK(td::jacobian_dt({0.0, 1.0}, cfg_g(1.0)) == doctest::Approx(2.0));
    CHECK(td::jacobian_dt({0.0, 0.5}, cfg_g(2.0)) == doctest::Approx(1.125));

    const auto cfg = cfg_g(1.0);
    const double h = 1e-6;
    const double fd = (td::jacobian({0.3 + h, 0.7}, cfg) -
                       td::jacobian({0.3 - h, 0.7}, cfg)) /
                      (2.0 * h);
    CHECK(std::fabs(td::jacobian_dt({0.3, 0.7}, cfg) - fd) < 1e-8);
}

TEST_CASE("jacobian_da: FD check and antisymmetric identity") {
    const auto cfg = cfg_g(2.0);
    const double h = 1e-6;
    const double fd = (td::jacobian({0.4, 0.6 + h}, cfg) -
                       td::jacobian({0.4, 0.6 - h}, cfg)) /
                      (2.0 * h);
    CHECK(std::fabs(td::jacobian_da({0.4, 0.6}, cfg) - fd) < 1e-7);

    // J(t,a) dJ/da(tau,a) - J(tau,a) dJ/da(t,a) = (g/4)(1+a)^2 (t-tau) a^{2g-2}
    for (double g : {1.0, 2.0, 3.0}) {
        const auto c = cfg_g(g);
        for (double a : {0.2, 0.5, 0.8}) {
            for (double t : {0.1, 0.6}) {
                for (double tau : {0.3, 0.9}) {
                    const double lhs =
                        td::jacobian({t, a}, c) * td::jacobian_da({tau, a}, c) -
                        td::jacobian({tau, a}, c) * td::jacobian_da({t, a}, c);
                    const double rhs = 0.25 * g * (1.0 + a) * (1.0 + a) *
                                       (t - tau) *
                                       std::pow(a, 2.0 * g - 2.0);
                    CHECK(std::fabs(lhs - rhs) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("jacobian_da: gamma = 1 brute-force polynomial expansion") {
    // at g = 1: J = (1+a)(t(1+a)+a)/2, dJ/da = ((1+2a)t + ... ) expanded
    // directly as a polynomial in (t,a): J = (t + (2t+1)a + (t+1)a^2)/2
    const auto cfg = cfg_g(1.0);
    for (double a : {0.1, 0.4, 0.9}) {
        for (double t : {0.2, 0.7}) {
            const double expanded = 0.5 * ((2.0 * t + 1.0) + 2.0 * (t + 1.0) * a);
            CHECK(td::jacobian_da({t, a}, cfg) ==
                  doctest::Approx(expanded).epsilon(1e-13));
        }
    }
}

TEST_CASE("unit_ray_direction: pinned values and unit norm") {
    const auto c1 = cfg_g(1.0);
    auto e0 = td::unit_ray_direction(0.0, c1);
    CHECK(e0[0] == doctest::Approx(1.0));
    CHECK(e0[1] == 0.0);
    auto e1 = td::unit_ray_direction(1.0, c1);
    CHECK(e1[0] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(e1[1] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));

    for (double g : {0.5, 2.0, 4.0}) {
        const auto cfg = cfg_g(g);
        for (int i = 0; i <= 1000; ++i) {
            const auto e = td::unit_ray_direction(i / 1000.0, cfg);
            CHECK(std::fabs(e[0] * e[0] + e[1] * e[1] - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("inverse_coordinate_jacobian: inverse of the forward matrix") {
    for (double g : {1.0, 2.0}) {
        const auto cfg = cfg_g(g);
        const RayCoord c{0.3, 0.5};
        const auto m = td::inverse_coordinate_jacobian(c, cfg);
        // forward matrix d(x1,x2)/d(t,a)
        const double agm1 = std::pow(c.a, g - 1.0);
        const double f00 = 1.0 + c.a, f01 = c.t - 1.0;
        const double f10 = 0.5 * (1.0 + c.a) * c.a * agm1;
        const double f11 = 0.5 * c.t * agm1 * (c.a + g * (1.0 + c.a));
        CHECK(std::fabs(m.m00 * f00 + m.m01 * f10 - 1.0) < 1e-12);
        CHECK(std::fabs(m.m00 * f01 + m.m01 * f11) < 1e-12);
        CHECK(std::fabs(m.m10 * f00 + m.m11 * f10) < 1e-12);
        CHECK(std::fabs(m.m10 * f01 + m.m11 * f11 - 1.0) < 1e-12);
        // det of the forward matrix equals J
        const double det = f00 * f11 - f01 * f10;
        CHECK(std::fabs(det - td::jacobian(c, cfg)) < 1e-12);
        // da/dx2 = (1+a)/J > 0
        CHECK(m.m11 > 0.0);
    }
}

TEST_CASE("inverse_coordinate_jacobian matches FD of point_to_ray") {
    const auto cfg = cfg_g(2.0);
    const Point p{0.4, 0.2};
    const RayCoord c = td::point_to_ray(p, cfg);
    const auto m = td::inverse_coordinate_jacobian(c, cfg);
    const double h = 1e-7;
    const RayCoord cx1p = td::point_to_ray({p.x1 + h, p.x2}, cfg);
    const RayCoord cx1m = td::point_to_ray({p.x1 - h, p.x2}, cfg);
    const RayCoord cx2p = td::point_to_ray({p.x1, p.x2 + h}, cfg);
    const RayCoord cx2m = td::point_to_ray({p.x1, p.x2 - h}, cfg);
    CHECK(std::fabs((cx1p.t - cx1m.t) / (2 * h) - m.m00) < 1e-6);
    CHECK(std::fabs((cx2p.t - cx2m.t) / (2 * h) - m.m01) < 1e-6);
    CHECK(std::fabs((cx1p.a - cx1m.a) / (2 * h) - m.m10) < 1e-6);
    CHECK(std::fabs((cx2p.a - cx2m.a) / (2 * h) - m.m11) < 1e-6);
}

TEST_CASE("cumulative Jacobian identity: int_0^t J = (t/2)(J(t,a)+J(0,a))") {
    for (double g : {1.0, 2.0, 3.0}) {
        const auto cfg = cfg_g(g);
        for (double a : {0.2, 0.6}) {
            for (double t : {0.35, 0.8}) {
                const double quad = td::integrate(
                    [&](double tau) { return td::jacobian({tau, a}, cfg); },
                    0.0, t, 1e-12);
                const double closed =
                    0.5 * t *
                    (td::jacobian({t, a}, cfg) +
                     0.5 * (1.0 + a) * std::pow(a, g));
                CHECK(std::fabs(quad - closed) < 1e-9);
            }
        }
    }
}
