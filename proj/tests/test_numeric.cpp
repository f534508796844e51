#include <catch2/catch_amalgamated.hpp>

#include "attractor/numeric.hpp"

using namespace attractor;

TEST_CASE("integer power and divisibility") {
    REQUIRE(int_pow(2, 10) == 1024);
    REQUIRE(int_pow(Int(10), 0) == 1);
    REQUIRE(int_pow(Int(-3), 3) == -27);
    REQUIRE(divides(Int(8), Int(328)));
    REQUIRE_FALSE(divides(Int(7), Int(328)));
    REQUIRE(divides(Int(4), Int(0)));
}

TEST_CASE("rational power with negative exponent") {
    REQUIRE(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    REQUIRE(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    REQUIRE(rat_pow(Rat(5), 0) == 1);
}

TEST_CASE("floor and ceil division follow sign conventions") {
    REQUIRE(floor_div(7, 2) == 3);
    REQUIRE(floor_div(-7, 2) == -4);
    REQUIRE(ceil_div(7, 2) == 4);
    REQUIRE(ceil_div(-7, 2) == -3);
    REQUIRE(rat_floor(Rat(-1, 3)) == -1);
    REQUIRE(rat_ceil(Rat(-1, 3)) == 0);
}

TEST_CASE("phase reduction") {
    REQUIRE(mod1(Rat(7, 3)) == Rat(1, 3));
    REQUIRE(mod1(Rat(-1, 4)) == Rat(3, 4));
    REQUIRE(mod1(Rat(5)) == 0);
    REQUIRE(dist_to_int(Rat(7, 8)) == Rat(1, 8));
    REQUIRE(dist_to_int(Rat(3, 8)) == Rat(3, 8));
    REQUIRE(dist_to_int(Rat(1, 2)) == Rat(1, 2));
}

TEST_CASE("modular inverse") {
    Int inv = mod_inverse(3, 7);
    REQUIRE((3 * inv) % 7 == 1);
    inv = mod_inverse(Int("123456789"), Int("1000000007"));
    REQUIRE((Int("123456789") * inv) % Int("1000000007") == 1);
    REQUIRE_THROWS_AS(mod_inverse(4, 8), std::domain_error);
}

TEST_CASE("string round trips") {
    Rat r(-22, 7);
    REQUIRE(parse_rat(rat_str(r)) == r);
    REQUIRE(parse_rat("5") == Rat(5));
    Int big = int_pow(Int(3), 200);
    REQUIRE(parse_int(int_str(big)) == big);
    REQUIRE(bit_length(Int(1) << 100) == 101);
    REQUIRE(bit_length(Int(0)) == 0);
}

TEST_CASE("round_up_multiple") {
    REQUIRE(round_up_multiple(10, 8) == 16);
    REQUIRE(round_up_multiple(16, 8) == 16);
    REQUIRE(round_up_multiple(1, 8) == 8);
}
