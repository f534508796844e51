#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "attractor/flows.hpp"

using namespace attractor;

namespace {

// reference integration of the full 4-variable coupling field, coefficients
// NOT frozen, to validate that the split map solves the true flow
State6 reference_flow(State6 s, const CouplingNum& cp, int steps) {
    const Bump2 bump{static_cast<double>(cp.cx), static_cast<double>(cp.cy),
                     static_cast<double>(cp.nu), cp.alpha};
    const Coupler coup{static_cast<double>(cp.R), cp.alpha};
    int ti = cp.trigger, gi = cp.target;
    auto field = [&](const State6& z, State6& dz) {
        double u = static_cast<double>(z[2 * ti]), v = static_cast<double>(z[2 * ti + 1]);
        double x = static_cast<double>(z[2 * gi]), y = static_cast<double>(z[2 * gi + 1]);
        double f = bump.value(u, v), g = coup.value(x, y);
        double fu, fv, gx, gy;
        bump.grad(u, v, fu, fv);
        coup.grad(x, y, gx, gy);
        dz = State6{};
        dz[2 * ti] = -cp.eps * fv * g;
        dz[2 * ti + 1] = cp.eps * fu * g;
        dz[2 * gi] = -cp.eps * f * gy;
        dz[2 * gi + 1] = cp.eps * f * gx;
    };
    long double h = 1.0L / steps;
    for (int i = 0; i < steps; ++i) {
        State6 k1, k2, k3, k4, t;
        field(s, k1);
        for (int j = 0; j < 6; ++j) t[j] = s[j] + 0.5L * h * k1[j];
        field(t, k2);
        for (int j = 0; j < 6; ++j) t[j] = s[j] + 0.5L * h * k2[j];
        field(t, k3);
        for (int j = 0; j < 6; ++j) t[j] = s[j] + h * k3[j];
        field(t, k4);
        for (int j = 0; j < 6; ++j)
            s[j] += h / 6.0L * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return s;
}

CouplingNum ramp_coupling() {
    CouplingNum cp;
    cp.trigger = 0;
    cp.target = 1;
    cp.cx = 1.0L;
    cp.cy = 0.0L;
    cp.nu = 0.5L;
    cp.eps = 0.7L;
    cp.R = 1.0L;
    cp.alpha = 2;
    return cp;
}

}  // namespace

TEST_CASE("split map with frozen coefficients matches the unsplit flow") {
    CouplingNum cp = ramp_coupling();

    SECTION("trigger on the ramp, target in the flat saddle region") {
        State6 s{1.35L, 0.1L, 0.8L, 0.6L, 0.0L, 0.0L};
        State6 ref = reference_flow(s, cp, 16384);
        apply_bump(s, cp);
        // a wrong split (coefficients not actually first integrals) would
        // disagree at order eps^2 ~ 1e-2; integrator truncation sits at ~1e-9
        for (int j = 0; j < 6; ++j)
            REQUIRE(std::fabs(static_cast<double>(s[j] - ref[j])) < 1e-8);
    }

    SECTION("target on the taper ramp exercises the plane integrator") {
        State6 s{1.35L, 0.1L, 2.5L, 0.3L, 0.0L, 0.0L};
        State6 ref = reference_flow(s, cp, 16384);
        apply_bump(s, cp);
        for (int j = 0; j < 6; ++j)
            REQUIRE(std::fabs(static_cast<double>(s[j] - ref[j])) < 1e-8);
    }
}

TEST_CASE("trigger outside the bump support leaves the state untouched") {
    CouplingNum cp = ramp_coupling();
    State6 s{1.6L, 0.2L, 0.8L, 0.6L, 0.0L, 0.0L};  // |u - cx| = 0.6 >= nu
    State6 before = s;
    apply_bump(s, cp);
    for (int j = 0; j < 6; ++j) REQUIRE(s[j] == before[j]);
}

TEST_CASE("trigger in the closed plateau is a fixed point of its plane flow") {
    CouplingNum cp = ramp_coupling();
    State6 s{1.25L, -0.25L, 0.8L, 0.6L, 0.0L, 0.0L};  // both offsets exactly nu/2
    apply_bump(s, cp);
    REQUIRE(s[0] == 1.25L);
    REQUIRE(s[1] == -0.25L);
    // target contracted by the full-strength closed form, f = 1 on the plateau
    REQUIRE(s[2] == 0.8L * std::exp(-0.7L));
    REQUIRE(s[3] == 0.6L * std::exp(0.7L));
}

TEST_CASE("horizontal axis of the target plane is invariant bit-exactly") {
    CouplingNum cp = ramp_coupling();

    SECTION("inside the flat region the contraction is the exact exponential") {
        State6 s{1.0L, 0.0L, 0.8L, 0.0L, 0.0L, 0.0L};
        apply_bump(s, cp);
        REQUIRE(s[3] == 0.0L);
        REQUIRE(s[2] == 0.8L * std::exp(-0.7L));
    }

    SECTION("on the taper ramp the modulus still never grows") {
        State6 s{1.0L, 0.0L, 2.5L, 0.0L, 0.0L, 0.0L};
        apply_bump(s, cp);
        REQUIRE(s[3] == 0.0L);
        REQUIRE(std::fabs(static_cast<double>(s[2])) <= 2.5);
        REQUIRE(s[2] > 0.0L);
    }

    SECTION("outside the coupler support the target is fixed") {
        State6 s{1.0L, 0.0L, 3.5L, 0.0L, 0.0L, 0.0L};
        apply_bump(s, cp);
        REQUIRE(s[2] == 3.5L);
        REQUIRE(s[3] == 0.0L);
    }
}

TEST_CASE("inverse direction undoes the forward map") {
    CouplingNum cp = ramp_coupling();

    SECTION("closed-form branches invert exactly") {
        State6 s{1.25L, 0.1L, 0.8L, 0.0L, 0.0L, 0.0L};
        State6 before = s;
        apply_bump(s, cp, +1);
        REQUIRE(s[2] != before[2]);
        apply_bump(s, cp, -1);
        // exp(-c)*exp(c) rounds twice; allow one ulp
        REQUIRE(std::fabs(static_cast<double>(s[2] - before[2])) < 1e-17);
        REQUIRE(s[3] == 0.0L);
        REQUIRE(s[0] == before[0]);
        REQUIRE(s[1] == before[1]);
    }

    SECTION("ramp branches invert to integrator accuracy") {
        State6 s{1.35L, 0.1L, 2.5L, 0.3L, 0.0L, 0.0L};
        State6 before = s;
        apply_bump(s, cp, +1);
        apply_bump(s, cp, -1);
        for (int j = 0; j < 6; ++j)
            REQUIRE(std::fabs(static_cast<double>(s[j] - before[j])) < 1e-11);
    }
}

TEST_CASE("coupling map is symplectic: numeric Jacobian determinant is 1") {
    CouplingNum cp = ramp_coupling();
    auto map = [&](State6& z) { apply_bump(z, cp); };
    State6 samples[] = {
        {1.35L, 0.1L, 0.8L, 0.6L, 0.2L, 0.1L},   // ramp trigger, flat target
        {1.35L, 0.1L, 2.5L, 0.3L, 0.0L, 0.0L},   // target on taper ramp
        {1.1L, 0.05L, 0.8L, 0.6L, 0.0L, 0.0L},   // plateau trigger
    };
    for (const State6& s : samples) {
        long double det = jacobian_det_fd(map, s, 1e-6L);
        REQUIRE(std::fabs(static_cast<double>(det - 1.0L)) < 1e-6);
    }
}

TEST_CASE("rotation by exact quarter turn") {
    RotationNum r = rotation_from({Rat(1, 4), Rat(1, 2), Rat(0)});
    State6 s{1.0L, 0.0L, 1.0L, 0.0L, 1.0L, 0.0L};
    apply_rotation(s, r);
    REQUIRE(std::fabs(static_cast<double>(s[0])) < 1e-18);
    REQUIRE(std::fabs(static_cast<double>(s[1] - 1.0L)) < 1e-18);
    REQUIRE(std::fabs(static_cast<double>(s[2] + 1.0L)) < 1e-18);
    REQUIRE(std::fabs(static_cast<double>(s[3])) < 1e-18);
    REQUIRE(s[4] == 1.0L);
    REQUIRE(s[5] == 0.0L);

    apply_rotation(s, r, -1);
    REQUIRE(std::fabs(static_cast<double>(s[0] - 1.0L)) < 1e-17);
    REQUIRE(std::fabs(static_cast<double>(s[1])) < 1e-17);
}
