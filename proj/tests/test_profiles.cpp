#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "attractor/profiles.hpp"

using namespace attractor;

TEST_CASE("glue is a monotone 0-1 transition") {
    REQUIRE(glue(-0.5, 2) == 0.0);
    REQUIRE(glue(0.0, 2) == 0.0);
    REQUIRE(glue(1.0, 2) == 1.0);
    REQUIRE(glue(2.0, 2) == 1.0);
    REQUIRE(glue(0.5, 2) == 0.5);  // symmetry point
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
        double v = glue(i / 100.0, 2);
        REQUIRE(v >= prev);
        prev = v;
    }
    // complementary halves sum to one
    for (double t : {0.1, 0.25, 0.7}) REQUIRE(glue(t, 2) + glue(1.0 - t, 2) == Catch::Approx(1.0));
    // alpha = 3 variant is still monotone
    prev = 0.0;
    for (int i = 1; i < 50; ++i) {
        double v = glue(i / 50.0, 3);
        REQUIRE(v >= prev);
        prev = v;
    }
    REQUIRE_THROWS_AS(glue_seed(0.5, 1), std::domain_error);
}

TEST_CASE("derivatives match finite differences on the ramp") {
    const double h = 1e-6;
    for (double t : {0.2, 0.4, 0.6, 0.8}) {
        double fd = (glue(t + h, 2) - glue(t - h, 2)) / (2 * h);
        REQUIRE(glue_deriv(t, 2) == Catch::Approx(fd).epsilon(1e-6));
    }
    double nu = 0.5;
    for (double u : {0.3, -0.3, 0.4, -0.45}) {
        double fd = (bump1(u + h, nu, 2) - bump1(u - h, nu, 2)) / (2 * h);
        REQUIRE(bump1_deriv(u, nu, 2) == Catch::Approx(fd).margin(1e-5));
    }
    for (double u : {2.2, -2.5, 2.8}) {
        double fd = (taper(u + h, 1.0, 2) - taper(u - h, 1.0, 2)) / (2 * h);
        REQUIRE(taper_deriv(u, 1.0, 2) == Catch::Approx(fd).margin(1e-5));
    }
}

TEST_CASE("bump plateau and support are exact") {
    double nu = 0.25;
    REQUIRE(bump1(0.0, nu, 2) == 1.0);
    REQUIRE(bump1(0.125, nu, 2) == 1.0);
    REQUIRE(bump1(-0.125, nu, 2) == 1.0);
    REQUIRE(bump1(0.25, nu, 2) == 0.0);
    REQUIRE(bump1(-0.3, nu, 2) == 0.0);
    double mid = bump1(0.19, nu, 2);
    REQUIRE(mid > 0.0);
    REQUIRE(mid < 1.0);

    Bump2 b{0.5, 0.0, nu, 2};
    REQUIRE(b.value(0.5, 0.0) == 1.0);
    REQUIRE(b.value(0.6, 0.1) == 1.0);
    REQUIRE(b.value(0.5, 0.25) == 0.0);
    double gu, gv;
    b.grad(0.6, 0.1, gu, gv);
    REQUIRE(gu == 0.0);
    REQUIRE(gv == 0.0);
}

TEST_CASE("coupler equals the saddle inside the taper") {
    Coupler g{1.0, 2};
    REQUIRE(g.value(1.5, -2.0) == 1.5 * -2.0);
    REQUIRE(g.value(3.0, 0.5) == 0.0);
    REQUIRE(g.value(0.5, -3.2) == 0.0);
    double gx, gy;
    g.grad(1.5, -2.0, gx, gy);
    REQUIRE(gx == -2.0);
    REQUIRE(gy == 1.5);
    // taper region: value between the saddle and zero in magnitude
    double v = g.value(2.5, 1.0);
    REQUIRE(std::abs(v) < 2.5);
    REQUIRE(std::abs(v) > 0.0);
}

TEST_CASE("exact region classification") {
    REQUIRE(classify_sup_distance(Rat(1, 8), Rat(1, 4)) == BumpRegion::plateau);
    REQUIRE(classify_sup_distance(Rat(0), Rat(1, 4)) == BumpRegion::plateau);
    REQUIRE(classify_sup_distance(Rat(1, 4), Rat(1, 4)) == BumpRegion::outside);
    REQUIRE(classify_sup_distance(Rat(3, 16), Rat(1, 4)) == BumpRegion::ramp);
}
