#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "attractor/mechanism.hpp"

using namespace attractor;

namespace {

MechanismInput pinned_case() {
    MechanismInput in;
    in.variant = Variant::II;  // clock = coord 3, drive = coord 2, aux = coord 1
    in.omega = {Rat(1, 2), Rat(1, 4), Rat(1, 8)};
    in.x = {Rat(1, 2), Rat(1, 2), Rat(1, 4)};
    in.drive_amp = AmpKey::toy_rate(Rat(1, 2));
    in.aux_amp = AmpKey::toy_rate(Rat(1, 2));
    in.R = Rat(1);
    return in;
}

bool has_failure(const MechanismCertificate& c, const std::string& name) {
    for (const auto& chk : c.checks)
        if (chk.name == name && !chk.holds) return true;
    return false;
}

}  // namespace

TEST_CASE("closed-form run of the pinned three-frequency case") {
    MechanismCertificate cert = run_mechanism(pinned_case());

    REQUIRE(cert.roles.clock == 2);
    REQUIRE(cert.roles.drive == 1);
    REQUIRE(cert.roles.aux == 0);
    REQUIRE(cert.Qc == 8);
    REQUIRE(cert.Qh == 4);
    REQUIRE(cert.Qb == 2);
    REQUIRE(cert.halving.count == 1);  // rate 1/2 halves in one fire
    REQUIRE(cert.halving.exact);
    REQUIRE(cert.N == 8);
    REQUIRE(cert.aux_fires == 2);

    REQUIRE(cert.final_mag[2].to_exact_rat() == Rat(1, 4));  // clock untouched
    REQUIRE(cert.final_mag[1].to_exact_rat() == Rat(1, 4));  // drive halved once
    REQUIRE(cert.final_mag[0].to_exact_rat() == Rat(1, 8));  // aux halved twice

    for (int i = 0; i < 3; ++i) REQUIRE(cert.final_phase[i] == Rat(0));

    REQUIRE(cert.all_hold());
}

TEST_CASE("numeric replay lands on the closed form") {
    MechanismInput in = pinned_case();
    MechanismCertificate cert = run_mechanism(in);
    State6 s = replay_mechanism(in, cert.N);

    REQUIRE(std::fabs(static_cast<double>(s[0]) - 0.125) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[1])) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[2]) - 0.25) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[3])) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[4]) - 0.25) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[5])) < 1e-12);
}

TEST_CASE("role permutations give the permuted run") {
    SECTION("variant I: clock coord 2, drive coord 1, aux coord 3") {
        MechanismInput in;
        in.variant = Variant::I;
        in.omega = {Rat(1, 4), Rat(1, 8), Rat(1, 2)};
        in.x = {Rat(1, 2), Rat(1, 4), Rat(1, 2)};
        MechanismCertificate cert = run_mechanism(in);
        REQUIRE(cert.roles.clock == 1);
        REQUIRE(cert.Qc == 8);
        REQUIRE(cert.N == 8);
        REQUIRE(cert.final_mag[0].to_exact_rat() == Rat(1, 4));  // drive halved
        REQUIRE(cert.final_mag[1].to_exact_rat() == Rat(1, 4));  // clock fixed
        REQUIRE(cert.final_mag[2].to_exact_rat() == Rat(1, 8));  // aux
        REQUIRE(cert.all_hold());

        State6 s = replay_mechanism(in, cert.N);
        REQUIRE(std::fabs(static_cast<double>(s[0]) - 0.25) < 1e-12);
        REQUIRE(std::fabs(static_cast<double>(s[2]) - 0.25) < 1e-12);
        REQUIRE(std::fabs(static_cast<double>(s[4]) - 0.125) < 1e-12);
    }

    SECTION("variant III: clock coord 1, drive coord 3, aux coord 2") {
        MechanismInput in;
        in.variant = Variant::III;
        in.omega = {Rat(1, 8), Rat(1, 2), Rat(1, 4)};
        in.x = {Rat(1, 4), Rat(1, 2), Rat(1, 2)};
        MechanismCertificate cert = run_mechanism(in);
        REQUIRE(cert.roles.clock == 0);
        REQUIRE(cert.final_mag[1].to_exact_rat() == Rat(1, 8));
        REQUIRE(cert.final_mag[2].to_exact_rat() == Rat(1, 4));
        REQUIRE(cert.all_hold());
    }
}

TEST_CASE("multi-fire drive with a slow rate") {
    MechanismInput in = pinned_case();
    in.drive_amp = AmpKey::toy_rate(Rat(3, 4));  // needs three fires to halve
    MechanismCertificate cert = run_mechanism(in);
    REQUIRE(cert.halving.count == 3);
    REQUIRE(cert.N == 24);
    REQUIRE(cert.final_mag[1].to_exact_rat() == Rat(1, 2) * Rat(27, 64));
    // aux still dies after the drive's first contraction at step 8
    REQUIRE(cert.aux_fires == 2);
    REQUIRE(cert.all_hold());

    State6 s = replay_mechanism(in, cert.N);
    REQUIRE(std::fabs(static_cast<double>(s[2]) - 27.0 / 128.0) < 1e-12);
    REQUIRE(std::fabs(static_cast<double>(s[0]) - 0.125) < 1e-12);
}

TEST_CASE("hypothesis violations surface as named failing checks") {
    SECTION("broken denominator chain") {
        MechanismInput in = pinned_case();
        in.omega[1] = Rat(1, 3);  // 3 does not divide 8
        MechanismCertificate cert = run_mechanism(in);
        REQUIRE_FALSE(cert.all_hold());
        REQUIRE(has_failure(cert, "rotation-denominator-chain"));
    }

    SECTION("clock magnitude below its window anchor") {
        MechanismInput in = pinned_case();
        in.x[2] = Rat(1, 100);
        MechanismCertificate cert = run_mechanism(in);
        REQUIRE(has_failure(cert, "clock-window-anchor"));
    }

    SECTION("drive contraction too weak to leave its window") {
        MechanismInput in = pinned_case();
        in.drive_amp = AmpKey::toy_rate(Rat(8191, 8192));
        MechanismCertificate cert = run_mechanism(in);
        REQUIRE(has_failure(cert, "drive-jump-out"));
        // the halving bracket itself is still certified
        for (const auto& c : cert.checks)
            if (c.name == "halving-bracket") REQUIRE(c.holds);
    }
}

TEST_CASE("tampered certificates fail the rebuilt checks") {
    MechanismCertificate cert = run_mechanism(pinned_case());

    SECTION("step count") {
        cert.N += 1;
        auto checks = mechanism_checks(cert);
        bool bad = false;
        for (const auto& c : checks)
            if (c.name == "step-count-formula" && !c.holds) bad = true;
        REQUIRE(bad);
    }

    SECTION("halving count") {
        cert.halving.count += 1;
        auto checks = mechanism_checks(cert);
        bool bad = false;
        for (const auto& c : checks)
            if (c.name == "halving-bracket" && !c.holds) bad = true;
        REQUIRE(bad);
    }

    SECTION("final magnitude") {
        cert.final_mag[0] = cert.final_mag[0].times_rat(Rat(1, 2));
        auto checks = mechanism_checks(cert);
        bool bad = false;
        for (const auto& c : checks)
            if (c.name == "final-magnitude-formula" && !c.holds) bad = true;
        REQUIRE(bad);
    }
}

TEST_CASE("faithful drive amplitude is honestly too weak for a small window") {
    MechanismInput in = pinned_case();
    in.drive_amp = AmpKey::faithful_rate(Rat(1), 2, Rat(1, 64));
    MechanismCertificate cert = run_mechanism(in);
    // per-fire factor is e^{-eps} with eps = exp(-4096): the bracket certifies
    // an astronomically large halving count...
    REQUIRE(bit_length(cert.halving.count) > 5000);
    for (const auto& c : cert.checks)
        if (c.name == "halving-bracket") REQUIRE(c.holds);
    // ...but the drive never escapes its own bump window
    REQUIRE(has_failure(cert, "drive-jump-out"));
}

TEST_CASE("replay refuses step counts beyond the cap") {
    MechanismInput in = pinned_case();
    REQUIRE_THROWS_AS(replay_mechanism(in, Int("100000000000")), std::domain_error);
}
