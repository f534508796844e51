#pragma once

// Single-stage contraction mechanism.  One step of the system is
//
//   T = Phi_{clock->drive} o Phi_{drive->aux} o S_omega
//
// with rational rotation S_omega and two bump couplings.  The clock never
// moves, fires its coupling every Q_c steps and contracts the drive; the
// drive fires every Q_h steps and contracts the aux coordinate until the
// drive's own first contraction throws it out of its bump window.  Under the
// denominator chain Q_aux | Q_drive | Q_clock every fire happens with the
// target exactly on its horizontal axis, so the whole N-step run has a closed
// form.  run_mechanism evaluates that closed form and emits a certificate
// whose checks can be re-derived from the certificate fields alone.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "attractor/flows.hpp"
#include "attractor/magnitude.hpp"
#include "attractor/rotations.hpp"

namespace attractor {

enum class Variant { I, II, III };

// coordinate indices (0-based) of the three roles
struct Roles {
    int clock, drive, aux;
};

inline Roles roles_of(Variant v) {
    switch (v) {
        case Variant::I: return {1, 0, 2};
        case Variant::II: return {2, 1, 0};
        case Variant::III: return {0, 2, 1};
    }
    throw std::logic_error("roles_of: bad variant");
}

inline std::string variant_name(Variant v) {
    switch (v) {
        case Variant::I: return "I";
        case Variant::II: return "II";
        case Variant::III: return "III";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    if (s == "I" || s == "1") return Variant::I;
    if (s == "II" || s == "2") return Variant::II;
    if (s == "III" || s == "3") return Variant::III;
    throw std::invalid_argument("unknown variant: " + s);
}

struct MechanismInput {
    Variant variant = Variant::II;
    std::array<Rat, 3> omega{};
    std::array<Rat, 3> x{};
    AmpKey drive_amp = AmpKey::toy_rate(Rat(1, 2));
    AmpKey aux_amp = AmpKey::toy_rate(Rat(1, 2));
    Rat R = Rat(1);
};

struct NamedCheck {
    std::string name;
    bool holds = false;
    std::string detail;
};

struct MechanismCertificate {
    MechanismInput input;
    Roles roles{};
    Int Qc, Qh, Qb;
    HalvingCertificate halving;  // L = halving.count fires of the drive
    Int N;                       // total steps, L * Qc
    Int aux_fires;               // Qc / Qh
    std::array<Magnitude, 3> final_mag;
    std::array<Rat, 3> final_phase;
    std::vector<NamedCheck> checks;

    bool all_hold() const {
        for (const auto& c : checks)
            if (!c.holds) return false;
        return true;
    }
    const NamedCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.holds) return &c;
        return nullptr;
    }
};

namespace detail {

inline NamedCheck check(std::string name, bool holds, std::string detail) {
    return NamedCheck{std::move(name), holds, std::move(detail)};
}

// certified lower bound of 1 - (per-fire factor), as a dyadic; the per-fire
// factor is e^{-lambda} with lambda = per_fire_log
inline Dyadic one_minus_rate_lb(const AmpKey& k, mpfr_prec_t prec = 192) {
    if (k.kind == AmpKey::Kind::toy) {
        return Interval::from_rat(Rat(1) - k.rho, prec).lo_dyadic();
    }
    Interval one = Interval::from_int(1, prec);
    Interval v = one - one / k.per_fire_log(prec).exp();
    return v.lo_dyadic();
}

}  // namespace detail

// Re-derives every consistency and hypothesis check from the certificate
// fields.  verify paths call this on a parsed certificate; run_mechanism
// calls it on the one it just built.
inline std::vector<NamedCheck> mechanism_checks(const MechanismCertificate& cert) {
    std::vector<NamedCheck> out;
    const Roles r = cert.roles;
    const auto& w = cert.input.omega;
    const auto& x = cert.input.x;

    {
        Roles want = roles_of(cert.input.variant);
        out.push_back(detail::check(
            "role-assignment",
            r.clock == want.clock && r.drive == want.drive && r.aux == want.aux,
            "clock/drive/aux indices match the variant table"));
    }

    bool denoms_ok = cert.Qc == den(w[r.clock]) && cert.Qh == den(w[r.drive]) &&
                     cert.Qb == den(w[r.aux]);
    out.push_back(detail::check("denominator-consistency", denoms_ok,
                                "Qc,Qh,Qb are the reduced denominators of the "
                                "rotation numbers in role order"));

    out.push_back(detail::check(
        "rotation-denominator-chain", divides(cert.Qb, cert.Qh) && divides(cert.Qh, cert.Qc),
        "Q_aux | Q_drive | Q_clock, so every fire sees its target on-axis"));

    out.push_back(detail::check("clock-window-anchor", x[r.clock] >= Rat(1) / Rat(cert.Qc),
                                "x_clock >= 1/Q_clock"));
    out.push_back(detail::check("drive-window-anchor", x[r.drive] >= Rat(1) / Rat(cert.Qh),
                                "x_drive >= 1/Q_drive"));

    Rat nu_c = Rat(1) / Rat(cert.Qc * cert.Qc * cert.Qc);
    Rat nu_h = Rat(1) / Rat(cert.Qh * cert.Qh * cert.Qh);
    out.push_back(detail::check(
        "clock-return-isolation", return_distance_exceeds(x[r.clock], cert.Qc, nu_c),
        "off-phase clock returns stay outside the clock bump support"));
    out.push_back(detail::check(
        "drive-return-isolation", return_distance_exceeds(x[r.drive], cert.Qh, nu_h),
        "off-phase drive returns stay outside the drive bump support"));

    {
        // first contraction throws the drive out of its own bump window
        bool ok;
        if (cert.input.drive_amp.kind == AmpKey::Kind::toy) {
            ok = x[r.drive] * (Rat(1) - cert.input.drive_amp.rho) > nu_h;
        } else {
            Dyadic lb = detail::one_minus_rate_lb(cert.input.drive_amp);
            ok = x[r.drive] > 0 && cmp_dyadic_rat(lb, nu_h / x[r.drive]) > 0;
        }
        out.push_back(detail::check("drive-jump-out", ok,
                                    "x_drive * (1 - rho_drive) > Q_drive^-3"));
    }

    {
        bool ok;
        if (cert.halving.exact) {
            ok = cert.halving.count == 1 && cert.input.drive_amp.kind == AmpKey::Kind::toy &&
                 cert.input.drive_amp.rho <= Rat(1, 2);
        } else {
            Int L = cert.halving.count;
            bool upper = cmp_dyadic_scaled(cert.halving.eps_lo, L, cert.halving.ln2_hi) >= 0;
            bool lower =
                L == 1 || cmp_dyadic_scaled(cert.halving.eps_hi, L - 1, cert.halving.ln2_lo) < 0;
            ok = upper && lower;
        }
        out.push_back(detail::check("halving-bracket", ok,
                                    "L certifies rho^L <= 1/2 < rho^(L-1)"));
    }

    out.push_back(detail::check("step-count-formula", cert.N == cert.halving.count * cert.Qc,
                                "N = L * Q_clock"));
    out.push_back(detail::check(
        "aux-fire-count", divides(cert.Qh, cert.Qc) && cert.aux_fires == cert.Qc / cert.Qh,
        "aux coupling fires Q_clock / Q_drive times before the drive jumps out"));

    {
        bool ok = true;
        for (int i = 0; i < 3; ++i)
            if (cert.final_phase[i] != mod1(Rat(cert.N) * w[i])) ok = false;
        out.push_back(detail::check("final-phase", ok, "phase_i = N * omega_i mod 1"));
    }

    {
        Magnitude mc = Magnitude::from_rat(x[r.clock]);
        Magnitude mh =
            Magnitude::from_rat(x[r.drive]).times_pow(cert.input.drive_amp, cert.halving.count);
        Magnitude mb = Magnitude::from_rat(x[r.aux]).times_pow(cert.input.aux_amp, cert.aux_fires);
        bool ok = cert.final_mag[r.clock] == mc && cert.final_mag[r.drive] == mh &&
                  cert.final_mag[r.aux] == mb;
        out.push_back(detail::check("final-magnitude-formula", ok,
                                    "clock exact, drive x*rho_d^L, aux x*rho_a^(Qc/Qh)"));
    }

    {
        bool ok = x[r.clock] > 0 && x[r.drive] > 0 && x[r.aux] >= 0;
        out.push_back(detail::check("magnitude-signs", ok, "x_clock, x_drive > 0, x_aux >= 0"));
    }

    {
        // contraction rates below one make every magnitude schedule monotone,
        // so |T^m(z)_i| <= x_i for all m <= N
        bool rates = true;
        for (const AmpKey* k : {&cert.input.drive_amp, &cert.input.aux_amp}) {
            if (k->kind == AmpKey::Kind::toy)
                rates = rates && k->rho > 0 && k->rho < 1;
            else
                rates = rates && k->c > 0;
        }
        bool flat = true;
        for (int i = 0; i < 3; ++i) flat = flat && x[i] <= 2 * cert.input.R;
        out.push_back(detail::check("envelope", rates && flat,
                                    "rates in (0,1) and x_i <= 2R keep the orbit in the "
                                    "flat coupler region with |T^m(z)_i| <= x_i"));
    }

    return out;
}

inline MechanismCertificate run_mechanism(const MechanismInput& in) {
    for (int i = 0; i < 3; ++i)
        if (in.omega[i] <= 0 || in.omega[i] >= 1)
            throw std::invalid_argument("run_mechanism: rotation numbers must lie in (0,1)");
    if (in.R <= 0) throw std::invalid_argument("run_mechanism: coupler radius must be positive");

    MechanismCertificate cert;
    cert.input = in;
    cert.roles = roles_of(in.variant);
    const Roles r = cert.roles;
    cert.Qc = den(in.omega[r.clock]);
    cert.Qh = den(in.omega[r.drive]);
    cert.Qb = den(in.omega[r.aux]);
    cert.halving = halving_count(in.drive_amp);
    cert.N = cert.halving.count * cert.Qc;
    cert.aux_fires = divides(cert.Qh, cert.Qc) ? cert.Qc / cert.Qh : Int(0);
    cert.final_mag[r.clock] = Magnitude::from_rat(in.x[r.clock]);
    cert.final_mag[r.drive] =
        Magnitude::from_rat(in.x[r.drive]).times_pow(in.drive_amp, cert.halving.count);
    cert.final_mag[r.aux] = Magnitude::from_rat(in.x[r.aux]).times_pow(in.aux_amp, cert.aux_fires);
    for (int i = 0; i < 3; ++i) cert.final_phase[i] = mod1(Rat(cert.N) * in.omega[i]);
    cert.checks = mechanism_checks(cert);
    return cert;
}

// Numeric double-precision replay of the same run for cross-checks.  Builds
// the two couplings, iterates the composed step map, returns the final state.
// Throws if the requested step count exceeds the cap.
inline State6 replay_mechanism(const MechanismInput& in, const Int& steps,
                               const Int& cap = Int(10000000)) {
    if (steps > cap) throw std::domain_error("replay_mechanism: step count exceeds replay cap");
    Roles r = roles_of(in.variant);
    Int Qc = den(in.omega[r.clock]), Qh = den(in.omega[r.drive]);

    auto eps_of = [](const AmpKey& k) -> long double {
        if (k.kind == AmpKey::Kind::toy)
            return std::log(1.0L / static_cast<long double>(rat_to_double(k.rho)));
        long double beta = 2.0L / (k.alpha - 1);
        return std::exp(-static_cast<long double>(rat_to_double(k.c)) *
                        std::pow(static_cast<long double>(rat_to_double(k.nu)), -beta));
    };

    CouplingNum drive_cp;  // clock triggers, drive is the target
    drive_cp.trigger = r.clock;
    drive_cp.target = r.drive;
    drive_cp.cx = static_cast<long double>(rat_to_double(in.x[r.clock]));
    drive_cp.cy = 0.0L;
    drive_cp.nu = 1.0L / static_cast<long double>(rat_to_double(Rat(Qc * Qc * Qc)));
    drive_cp.eps = eps_of(in.drive_amp);
    drive_cp.R = static_cast<long double>(rat_to_double(in.R));
    drive_cp.alpha = in.drive_amp.kind == AmpKey::Kind::toy ? 2 : in.drive_amp.alpha;

    CouplingNum aux_cp;  // drive triggers, aux is the target
    aux_cp.trigger = r.drive;
    aux_cp.target = r.aux;
    aux_cp.cx = static_cast<long double>(rat_to_double(in.x[r.drive]));
    aux_cp.cy = 0.0L;
    aux_cp.nu = 1.0L / static_cast<long double>(rat_to_double(Rat(Qh * Qh * Qh)));
    aux_cp.eps = eps_of(in.aux_amp);
    aux_cp.R = drive_cp.R;
    aux_cp.alpha = in.aux_amp.kind == AmpKey::Kind::toy ? 2 : in.aux_amp.alpha;

    RotationNum rot = rotation_from(in.omega);

    State6 s{};
    for (int i = 0; i < 3; ++i) {
        s[2 * i] = static_cast<long double>(rat_to_double(in.x[i]));
        s[2 * i + 1] = 0.0L;
    }
    long long n = steps.convert_to<long long>();
    for (long long m = 0; m < n; ++m) {
        apply_rotation(s, rot);
        apply_bump(s, aux_cp);
        apply_bump(s, drive_cp);
    }
    return s;
}

}  // namespace attractor
