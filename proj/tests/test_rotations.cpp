#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "attractor/rotations.hpp"

using namespace attractor;

namespace {
Int brute_min_residue(const Int& p, const Int& q, const Int& T) {
    Int best = q;
    for (Int t = 1; t <= T; ++t) {
        Int r = (t * p) % q;
        if (r < 0) r += q;
        Int d = r < q - r ? r : q - r;
        if (d < best) best = d;
    }
    return best;
}
}  // namespace

TEST_CASE("min_scaled_residue agrees with enumeration") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> qd(2, 400), Td(1, 500);
    for (int trial = 0; trial < 300; ++trial) {
        int q = qd(rng);
        int p = std::uniform_int_distribution<int>(0, q - 1)(rng);
        int T = Td(rng);
        REQUIRE(min_scaled_residue(p, q, T) == brute_min_residue(p, q, T));
    }
    // coprime long-range cases where the walk must take many partial steps
    REQUIRE(min_scaled_residue(89, 144, 10) == brute_min_residue(89, 144, 10));
    REQUIRE(min_scaled_residue(89, 144, 143) == brute_min_residue(89, 144, 143));
    REQUIRE(min_scaled_residue(1, Int("1000000000000"), 7) == 1);
    REQUIRE(min_scaled_residue(Int("999999999999"), Int("1000000000000"), 7) == 1);
}

TEST_CASE("min_scaled_residue basic structure") {
    // residue 0 iff some tau <= T is a multiple of q/gcd(p,q)
    REQUIRE(min_scaled_residue(0, 10, 5) == 0);
    REQUIRE(min_scaled_residue(5, 10, 1) == 5);
    REQUIRE(min_scaled_residue(5, 10, 2) == 0);
    // q > T and p = 1: best is 1 at tau = T? no: residue tau, min at tau = 1
    REQUIRE(min_scaled_residue(1, 1000, 30) == 1);
    // p = q-1: symmetric
    REQUIRE(min_scaled_residue(999, 1000, 30) == 1);
}

TEST_CASE("chord bounds sandwich the true sup displacement") {
    for (int i = 1; i <= 64; ++i) {
        double phi = 0.5 * i / 64.0;
        double theta = 2.0 * M_PI * phi;
        double d = std::max(1.0 - std::cos(theta), std::abs(std::sin(theta)));
        double lb = rat_to_double(chord_lower_bound(Rat(1), Rat(i, 128)));
        double ub = rat_to_double(arc_upper_bound(Rat(1), Rat(i, 128)));
        REQUIRE(lb <= d * (1 + 1e-12));
        REQUIRE(ub >= d * (1 - 1e-12));
    }
    REQUIRE_THROWS_AS(chord_lower_bound(Rat(1), Rat(2, 3)), std::domain_error);
}

TEST_CASE("min return distance: exact small denominators, enclosure beyond") {
    REQUIRE(min_return_distance(Rat(1, 2), 2).contains(Rat(1)));
    REQUIRE(min_return_distance(Rat(1, 2), 3).contains(Rat(3, 4)));
    REQUIRE(min_return_distance(Rat(1, 2), 4).contains(Rat(1, 2)));
    Interval d8 = min_return_distance(Rat(1, 2), 8);
    double expect = 0.5 * std::sin(2.0 * M_PI / 8.0);
    REQUIRE(d8.lo_double() <= expect);
    REQUIRE(d8.hi_double() >= expect);

    // x >= 1/q puts the return distance above the q^-3 isolation radius
    for (int q : {2, 3, 4, 5, 8, 64, 10007}) {
        Rat x(1, q);
        REQUIRE(return_distance_exceeds(x, q, Rat(1, Int(q) * q * q)));
    }
    REQUIRE_FALSE(return_distance_exceeds(Rat(1, 1000000), 8, Rat(1, 512)));
}

TEST_CASE("reach witness hits every coordinate within half a grid cell") {
    // small synthetic frequency vector with chain 6 | 36 | 216
    Rat w1(7, 36), w2(7, 216), w3(1, 6);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> gd(0, 999);
    for (int trial = 0; trial < 50; ++trial) {
        Rat g1(gd(rng), 1000), g2(gd(rng), 1000), g3(gd(rng), 1000);
        ReachWitness w = reach_witness(w1, w2, w3, g1, g2, g3);
        REQUIRE(w.m >= 0);
        REQUIRE(w.m < 216);
        REQUIRE(w.err3 <= Rat(1, 12));         // 1/(2*6)
        REQUIRE(w.err1 <= Rat(6, 72));         // q3/(2*q1)
        REQUIRE(w.err2 <= Rat(36, 432));       // q1/(2*q2)
    }
    REQUIRE_THROWS_AS(reach_witness(Rat(1, 5), w2, w3, Rat(0), Rat(0), Rat(0)),
                      std::domain_error);
}

TEST_CASE("phase_after reduces exactly") {
    REQUIRE(phase_after(8, Rat(3, 8)) == 0);
    REQUIRE(phase_after(5, Rat(3, 8)) == Rat(7, 8));
    REQUIRE(phase_after(Int("123456789123456789"), Rat(1, 3)) == Rat(0));
}
