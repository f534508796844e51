#include <catch2/catch_amalgamated.hpp>

#include "attractor/magnitude.hpp"

using namespace attractor;

TEST_CASE("magnitude algebra and exact folding") {
    AmpKey half = AmpKey::toy_rate(Rat(1, 2));
    Magnitude x = Magnitude::from_rat(Rat(1, 2)).times_pow(half, 2);
    auto v = x.to_exact_rat();
    REQUIRE(v.has_value());
    REQUIRE(*v == Rat(1, 8));

    Magnitude y = x.times_rat(Rat(3)).times_pow(half, -1);
    REQUIRE(*y.to_exact_rat() == Rat(3, 4));

    Magnitude r = y.ratio_to(x);
    REQUIRE(*r.to_exact_rat() == Rat(6));
    REQUIRE(r.factors().size() == 1);

    REQUIRE(Magnitude::zero().is_zero());
    REQUIRE(Magnitude::zero().times_pow(half, 5).factors().empty());
    REQUIRE_THROWS_AS(Magnitude::from_rat(Rat(-1)), std::domain_error);
}

TEST_CASE("certified comparisons") {
    AmpKey half = AmpKey::toy_rate(Rat(1, 2));
    AmpKey slow = AmpKey::toy_rate(Rat(127, 128));
    Magnitude one = Magnitude::from_rat(Rat(1));

    // same pile, different depth
    REQUIRE(Magnitude::cmp(one.times_pow(half, 3), one.times_pow(half, 2)) < 0);
    // value equality across representations
    AmpKey third = AmpKey::toy_rate(Rat(1, 3));
    AmpKey ninth = AmpKey::toy_rate(Rat(1, 9));
    REQUIRE(Magnitude::cmp(one.times_pow(third, 2), one.times_pow(ninth, 1)) == 0);
    // cross-key log comparison: (127/128)^89 < 1/2 < (127/128)^88
    REQUIRE(one.times_pow(slow, 89).cmp_rat(Rat(1, 2)) < 0);
    REQUIRE(one.times_pow(slow, 88).cmp_rat(Rat(1, 2)) > 0);
    REQUIRE(magnitude_le(one.times_pow(slow, 89), one, Rat(1, 2)));

    // faithful factor within a whisker of 1 still resolves
    AmpKey faith = AmpKey::faithful_rate(Rat(1), 2, Rat(1, 8));
    Magnitude f = one.times_pow(faith, 1);
    REQUIRE(f.cmp_rat(Rat(1)) < 0);
    REQUIRE(f.cmp_rat(Rat(9, 10)) > 0);

    // equal values that cannot fold exactly throw at the precision cap
    Magnitude big3 = one.times_pow(third, 100000);
    Magnitude big9 = one.times_pow(ninth, 50000);
    REQUIRE_THROWS_AS(Magnitude::cmp(big3, big9, 64, 1024), UndecidedComparison);

    REQUIRE(Magnitude::cmp(Magnitude::zero(), one) < 0);
    REQUIRE(Magnitude::cmp(one, Magnitude::zero()) > 0);
}

TEST_CASE("halving counts with certifying brackets") {
    // rho <= 1/2: one fire suffices, exact branch
    HalvingCertificate c1 = halving_count(AmpKey::toy_rate(Rat(1, 2)));
    REQUIRE(c1.count == 1);
    REQUIRE(c1.exact);
    REQUIRE(halving_count(AmpKey::toy_rate(Rat(1, 4))).count == 1);

    // ln2 / ln(4/3) = 2.409...
    HalvingCertificate c3 = halving_count(AmpKey::toy_rate(Rat(3, 4)));
    REQUIRE(c3.count == 3);
    REQUIRE_FALSE(c3.exact);
    // bracket re-verifies from its stored dyadic endpoints
    REQUIRE(cmp_dyadic_scaled(c3.eps_lo, c3.count, c3.ln2_hi) >= 0);
    REQUIRE(cmp_dyadic_scaled(c3.eps_hi, c3.count - 1, c3.ln2_lo) < 0);

    // ln2 / ln(128/127) = 88.377...
    REQUIRE(halving_count(AmpKey::toy_rate(Rat(127, 128))).count == 89);

    // faithful rate: eps = exp(-4), ln2/eps = 37.845...
    HalvingCertificate cf = halving_count(AmpKey::faithful_rate(Rat(1), 2, Rat(1, 2)));
    REQUIRE(cf.count == 38);
    REQUIRE(cmp_dyadic_scaled(cf.eps_lo, cf.count, cf.ln2_hi) >= 0);
    REQUIRE(cmp_dyadic_scaled(cf.eps_hi, cf.count - 1, cf.ln2_lo) < 0);

    // eps = exp(-729): the count is a 1052-bit integer, certified by bracket
    HalvingCertificate big = halving_count(AmpKey::faithful_rate(Rat(1), 2, Rat(1, 27)));
    REQUIRE(bit_length(big.count) >= 1051);
    REQUIRE(bit_length(big.count) <= 1053);
    REQUIRE(big.precision >= 1052);
    REQUIRE(cmp_dyadic_scaled(big.eps_lo, big.count, big.ln2_hi) >= 0);
    REQUIRE(cmp_dyadic_scaled(big.eps_hi, big.count - 1, big.ln2_lo) < 0);
}
