#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attractor/budget.hpp"
#include "attractor/magnitude.hpp"
#include "attractor/mechanism.hpp"
#include "attractor/planar.hpp"
#include "attractor/rotations.hpp"

namespace attractor {

// One bump-coupled pair: the time-1 map of eps * f(s_trigger) * g(s_target).
// The window is the sup-ball of radius nu around the installed centre in the
// trigger plane; outside it the map is the identity, on the inner half-ball
// the trigger plane is frozen and the target plane contracts by the amp rate.
// The centre is an exact dyadic point chosen next to the parked trigger
// value; center_gap bounds the distance to that (generally irrational) value
// and center_mag certifies its magnitude symbolically.
struct CouplingSpec {
    int trigger = 0;
    int target = 0;
    Dyadic cx{0, 0}, cy{0, 0};
    Magnitude center_mag;
    Dyadic center_gap{0, 0};
    Rat nu;
    AmpKey amp;
    unsigned stage_added = 0;
    std::string id;
};

// A fired career of one coupling: every fire sits on the exact grid of the
// trigger's rotation period, the trigger stays inside the plateau, and the
// remaining plateau headroom is spent by later frequency edits.
struct EraRecord {
    unsigned stage = 0;
    std::string coupling_id;
    int trigger = 0, target = 0;
    Int grid;             // fire spacing in steps
    Int t_first, t_last;  // absolute step index of first and last fire
    Int fires;
    Rat rho;       // per-fire contraction of the target coordinate
    Rat nu;        // window half-width
    Rat scale_hi;  // upper bound on the trigger magnitude at the fires
    Dyadic margin_left;
};

// interval box for a full state: [lo, hi] per component
using Box6 = std::array<std::array<Dyadic, 2>, 6>;

struct ReachCertificate {
    bool grid_mode = false;
    Int cells = 0;
    bool holds = false;
    std::string detail;
};

// The tuned parameters of one stage.  run_stage searches them; a verifier
// replays certify_stage from these exact values.
struct StageParams {
    Int qhat3;
    Int c3, c1, c2;  // signed numerator bumps
    unsigned m_hat = 0, m_tilde = 0, m_bar = 0;
    long prec = 0;
};

struct StageCertificate {
    unsigned n = 1;
    Rat eta, eta_next;
    std::array<Rat, 3> omega_in{}, omega_out{};
    std::array<Magnitude, 3> x_in{}, x_out{};
    Magnitude x1_hat;
    StageParams params;
    Int qtilde1, qbar2, khat;
    HalvingCertificate h_hat, h_tilde, h_bar;
    Int L_hat, L_tilde, L_bar;
    Int N_hat, N_tilde, N_bar, N, M_in, M_out;
    CouplingSpec coup_a, coup_bhat, coup_ctilde, coup_dbar;
    Dyadic corr1_ub{0, 0}, corr2_ub{0, 0};
    Box6 zprime{}, zbar0{};
    Dyadic zbar0_step_ub{0, 0};
    Dyadic envelope_excess{0, 0};  // relative in-stage overshoot above the chains
    std::vector<LedgerEntry> ledger_entries;
    std::vector<EraRecord> eras_created;
    std::vector<EraRecord> eras_after;  // full ledger after this stage's spends
    ReachCertificate reach;
    std::vector<NamedCheck> checks;

    bool all_hold() const {
        for (const auto& c : checks)
            if (!c.holds) return false;
        return true;
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.holds) return c.name;
        return {};
    }
};

struct StageInput {
    unsigned n = 1;
    Int M = 0;
    Rat eta;
    std::array<Rat, 3> omega{};
    std::array<Magnitude, 3> x{};
    CouplingSpec inner;  // live coupling: trigger 2 -> target 1
    std::vector<CouplingSpec> dormant;
    std::vector<EraRecord> eras;
    std::vector<StageCertificate> history;  // earlier stages, for backward transport
    Box6 zbar0_prev{};
    EtaSchedule schedule{Rat(1, 2), Rat(1, 2)};
};

struct StageOptions {
    bool audit = false;  // record failing checks instead of throwing
    std::optional<StageParams> force;
};

namespace detail {

inline Rat mag_lo_rat(const Magnitude& m, mpfr_prec_t prec = 256) {
    return m.to_interval(prec).lo_dyadic().to_rat();
}
inline Rat mag_hi_rat(const Magnitude& m, mpfr_prec_t prec = 256) {
    return m.to_interval(prec).hi_dyadic().to_rat();
}

inline Rat toy_rho(unsigned m) {
    return Rat((Int(1) << m) - 1, Int(1) << m);
}

// Sound positive upper bound 2^-K, K = min(q^3, 2^60), for the Gevrey
// distance-to-identity of a coupling with window q^-3 at unit drift rate.
// The true bound exp(-nu^(-1/(alpha-1))) * G_R is far smaller; the capped
// exponent keeps it representable at every stage.
inline Dyadic coupling_ledger_bound(const Int& q) {
    Int k = q * q * q;
    Int cap = Int(1) << 60;
    if (k > cap) k = cap;
    return Dyadic{1, -static_cast<long>(k)};
}

// 2*pi upper bound as a rational (Archimedes), enough for every arc bound
inline const Rat& two_pi_ub() {
    static const Rat v(44, 7);
    return v;
}

// revolution fraction of len rotation steps at frequency p/q
inline Rat rev_frac(const Int& len, const Rat& w) {
    return mod1(Rat(len) * w);
}

// distance of a revolution fraction to the nearest integer
inline Rat rev_dist(const Rat& f) {
    Rat m = mod1(f);
    return std::min(m, Rat(1 - m));
}

// Sum_{j=0..count-1} s^j for s = 1/rho^2 > 1, as an interval upper bound.
// Used for the off-axis pile a career accumulates from per-period arcs.
inline Interval geom_pile(const Rat& rho, const Int& count, mpfr_prec_t prec) {
    if (count <= 0) return Interval::from_int(0, prec);
    Interval s = Interval::from_rat(Rat(1) / (rho * rho), prec);
    Interval sk = s.pow_int(count);
    return (sk - Interval::from_int(1, prec)) / (s - Interval::from_int(1, prec));
}

// upper-bound dyadic of an interval's absolute value
inline Dyadic iv_abs_ub(const Interval& v) { return v.abs().hi_dyadic(); }

inline Dyadic box_pair_ub(const Dyadic& a, const Dyadic& b) {
    return cmp_dyadic_scaled(a, 1, b) >= 0 ? a : b;
}

// Numerator replacement: smallest |c| >= 1 with w_new = (p*(q_new/q_old)+c)/q_new
// reduced, inside (0,1), and |c|/q_new within the stage allowance.
inline std::pair<Rat, Int> replace_numerator(const Rat& w_old, const Int& q_new,
                                             const Rat& eta, long c_cap = 4096) {
    const Int scale = q_new / den(w_old);
    const Int base = num(w_old) * scale;
    for (long a = 1; a <= c_cap; ++a) {
        for (int sgn : {+1, -1}) {
            Int c = Int(sgn) * a;
            Int p = base + c;
            if (p <= 0 || p >= q_new) continue;
            if (boost::multiprecision::gcd(p, q_new) != 1) continue;
            if (Rat(a, q_new) > eta) break;
            return {Rat(p, q_new), c};
        }
    }
    throw std::runtime_error("RETRY_EXHAUSTED: no reduced numerator within the bump cap");
}

// dyadic midpoint approximation of an interval, with the distance bound to
// any point of the interval
inline std::pair<Dyadic, Dyadic> dyadic_centre(const Interval& v) {
    Interval mid = (v + v) * Interval::from_rat(Rat(1, 2), v.prec());
    Dyadic c = mid.lo_dyadic();
    Interval err = v - Interval::from_dyadic(c, v.prec());
    return {c, iv_abs_ub(err)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// certify_stage: deterministic construction + certification of one stage from
// pinned parameters.  Every claim lands in cert.checks; with opts.audit unset
// a failed check throws.  run_stage searches the parameters first; a verifier
// replays this function from the recorded ones.
// ---------------------------------------------------------------------------
inline StageCertificate certify_stage(const StageInput& in, const StageParams& par,
                                      const StageOptions& opts = {}) {
    StageCertificate cert;
    cert.n = in.n;
    cert.eta = in.eta;
    cert.omega_in = in.omega;
    cert.x_in = in.x;
    cert.M_in = in.M;
    cert.params = par;
    cert.coup_a = in.inner;

    auto fail = [&](const std::string& name, const std::string& detail) {
        cert.checks.push_back(NamedCheck{name, false, detail});
        if (!opts.audit)
            throw std::runtime_error("HYPOTHESIS_VIOLATION: " + name +
                                     (detail.empty() ? "" : " (" + detail + ")"));
    };
    auto check = [&](const std::string& name, bool holds, const std::string& detail = {}) {
        cert.checks.push_back(NamedCheck{name, holds, detail});
        if (!holds && !opts.audit)
            throw std::runtime_error("HYPOTHESIS_VIOLATION: " + name +
                                     (detail.empty() ? "" : " (" + detail + ")"));
        return holds;
    };

    // ---- input validation --------------------------------------------------
    if (!(in.eta > 0 && in.eta <= Rat(1, 2)))
        throw std::domain_error("certify_stage: eta outside (0, 1/2]");
    for (const auto& w : in.omega)
        if (!(w > 0 && w < 1)) throw std::domain_error("certify_stage: frequency outside (0,1)");
    const Rat &w1 = in.omega[0], &w2 = in.omega[1], &w3 = in.omega[2];
    const Int q1 = den(w1), q2 = den(w2), q3 = den(w3);
    if (!divides(q3, q1) || !divides(q1, q2))
        throw std::domain_error("certify_stage: input denominator chain broken");
    if (in.inner.trigger != 1 || in.inner.target != 0 ||
        in.inner.amp.kind != AmpKey::Kind::toy)
        throw std::domain_error("certify_stage: live coupling must be a toy 2->1 pair");
    if (Magnitude::cmp(in.inner.center_mag, in.x[1]) != 0)
        throw std::domain_error("certify_stage: live window not at the current clock value");

    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(par.prec);
    const Rat rho_a = in.inner.amp.rho;
    const Rat nu_a = in.inner.nu;
    const Rat x1_lo = detail::mag_lo_rat(in.x[0], prec), x1_hi = detail::mag_hi_rat(in.x[0], prec);
    const Rat x2_lo = detail::mag_lo_rat(in.x[1], prec), x2_hi = detail::mag_hi_rat(in.x[1], prec);
    const Rat x3_lo = detail::mag_lo_rat(in.x[2], prec), x3_hi = detail::mag_hi_rat(in.x[2], prec);
    const Rat& tp = detail::two_pi_ub();
    const Rat margin17(17, 16);

    // ---- denominators, rates, careers --------------------------------------
    const Int& qh = par.qhat3;
    if (qh <= 0 || !divides(q2, qh))
        throw std::domain_error("certify_stage: opening denominator off the clock grid");
    cert.khat = qh / q2;
    const Rat rho_h = detail::toy_rho(par.m_hat);
    const Rat rho_t = detail::toy_rho(par.m_tilde);
    const Rat rho_b = detail::toy_rho(par.m_bar);
    cert.h_hat = halving_count(AmpKey::toy_rate(rho_h));
    cert.h_tilde = halving_count(AmpKey::toy_rate(rho_t));
    cert.h_bar = halving_count(AmpKey::toy_rate(rho_b));
    cert.L_hat = cert.h_hat.count;
    cert.L_tilde = cert.h_tilde.count;
    cert.L_bar = cert.h_bar.count;
    cert.qtilde1 = cert.L_hat * qh;
    cert.qbar2 = (cert.L_tilde + 1) * cert.qtilde1;
    const Int &qt = cert.qtilde1, &qb = cert.qbar2;

    cert.N_hat = qt;
    cert.N_tilde = cert.L_tilde * qt;
    cert.N_bar = cert.L_bar * qb;
    cert.N = (cert.L_bar + 1) * qb;
    cert.M_out = cert.M_in + cert.N;
    const Int anchor = cert.M_in + qb;

    // ---- replaced frequencies ----------------------------------------------
    {
        const Int s3 = qh / q3, s1 = qt / q1, s2 = qb / q2;
        Int p3 = num(w3) * s3 + par.c3;
        Int p1 = num(w1) * s1 + par.c1;
        Int p2 = num(w2) * s2 + par.c2;
        cert.omega_out[2] = Rat(p3, qh);
        cert.omega_out[0] = Rat(p1, qt);
        cert.omega_out[1] = Rat(p2, qb);
        check("frequency-reduced",
              den(cert.omega_out[2]) == qh && den(cert.omega_out[0]) == qt &&
                  den(cert.omega_out[1]) == qb && p3 > 0 && p3 < qh && p1 > 0 && p1 < qt &&
                  p2 > 0 && p2 < qb,
              "replaced numerators coprime to the new denominators");
    }
    const Rat &wn3 = cert.omega_out[2], &wn1 = cert.omega_out[0], &wn2 = cert.omega_out[1];
    const Int c3a = boost::multiprecision::abs(par.c3);
    const Int c1a = boost::multiprecision::abs(par.c1);
    const Int c2a = boost::multiprecision::abs(par.c2);
    check("frequency-budget",
          Rat(c3a, qh) <= in.eta && Rat(c1a, qt) <= in.eta && Rat(c2a, qb) <= in.eta,
          "|w_out - w_in| <= eta per coordinate");
    check("density-ladder",
          Rat(1, qh) < in.eta && Rat(1, cert.L_hat) < in.eta &&
              Rat(1, cert.L_tilde + 1) < in.eta,
          "grid ratios 1/qhat3, qhat3/qtilde1, qtilde1/qbar2 all below eta");

    // ---- magnitudes ---------------------------------------------------------
    const AmpKey amp_h = AmpKey::toy_rate(rho_h);
    const AmpKey amp_t = AmpKey::toy_rate(rho_t);
    const AmpKey amp_b = AmpKey::toy_rate(rho_b);
    cert.x1_hat = in.x[0].times_pow(in.inner.amp, cert.khat);
    cert.x_out[0] = cert.x1_hat.times_pow(amp_b, cert.L_bar + 1);
    cert.x_out[1] = in.x[1].times_pow(amp_h, cert.L_hat);
    cert.x_out[2] = in.x[2].times_pow(amp_t, cert.L_tilde + 1);
    const Rat x1h_lo = detail::mag_lo_rat(cert.x1_hat, prec);
    const Rat x1h_hi = detail::mag_hi_rat(cert.x1_hat, prec);
    const Rat xo1_lo = detail::mag_lo_rat(cert.x_out[0], prec);
    const Rat xo2_lo = detail::mag_lo_rat(cert.x_out[1], prec);
    const Rat xo2_hi = detail::mag_hi_rat(cert.x_out[1], prec);
    const Rat xo3_lo = detail::mag_lo_rat(cert.x_out[2], prec);

    // the inherited career must not crush the driven coordinate
    check("inherited-survival", Rat(4) * x1h_lo >= x1_hi,
          "rho_a^khat >= 1/4 so the opening era keeps coordinate 1 alive");

    // ---- dodge inequalities (strict margins, never equalities) -------------
    check("dodge-opening", x2_lo * Rat(1, Int(1) << par.m_hat) >= nu_a * margin17,
          "first squeeze fire moves the clock out of the live window");
    check("dodge-middle",
          x3_lo * Rat(1, Int(1) << par.m_tilde) >= Rat(margin17, qh * qh * qh),
          "first drain fire moves coordinate 3 out of the opening window");
    check("dodge-outer",
          x1h_lo * Rat(1, Int(1) << par.m_bar) >= Rat(margin17, qt * qt * qt),
          "first outer fire moves coordinate 1 out of the middle window");

    // ---- junction: exact per-plane linear solves ----------------------------
    // Within the certified calendar each plane evolves by exact rotations and
    // exact saddles, so one linear solve puts the post-era parked point of
    // coordinates 1 and 2 exactly on the axis.  Coordinate 3 rotates by whole
    // revolutions between its fires and needs no correction.
    Vec2 v1 = vec2_zero(prec), v2 = vec2_zero(prec);
    {
        Mat2 B_a = saddle(rho_a, prec) * rotation_rev(detail::rev_frac(q2, wn1), prec);
        Mat2 lam1 = rotation_rev(-detail::rev_frac(qh, wn1), prec) * mat2_pow(B_a, cert.khat, prec);
        Vec2 rhs1{cert.x1_hat.to_interval(prec), Interval::from_int(0, prec)};
        v1 = solve_unit(lam1, rhs1);
        Vec2 r1 = lam1 * v1 - rhs1;
        check("junction-residual-1", r1.x.contains_zero() && r1.y.contains_zero(),
              "coordinate-1 solve reproduces its era endpoint");

        Mat2 B_2 = saddle(rho_h, prec) * rotation_rev(detail::rev_frac(qh, wn2), prec);
        Mat2 lam2 = rotation_rev(-detail::rev_frac(qt, wn2), prec) * mat2_pow(B_2, cert.L_hat, prec);
        Vec2 rhs2{cert.x_out[1].to_interval(prec), Interval::from_int(0, prec)};
        v2 = solve_unit(lam2, rhs2);
        Vec2 r2 = lam2 * v2 - rhs2;
        check("junction-residual-2", r2.x.contains_zero() && r2.y.contains_zero(),
              "coordinate-2 solve reproduces its era endpoint");
    }
    Vec2 corr1{v1.x - in.x[0].to_interval(prec), v1.y};
    Vec2 corr2{v2.x - in.x[1].to_interval(prec), v2.y};
    cert.corr1_ub = vec2_norm_ub(corr1);
    cert.corr2_ub = vec2_norm_ub(corr2);
    check("junction-step-small",
          cmp_dyadic_rat(cert.corr1_ub, x1_lo * in.eta / 4) <= 0 &&
              cmp_dyadic_rat(cert.corr2_ub, x2_lo * in.eta / 4) <= 0,
          "|z' - z| at most eta/4 of each coordinate scale");

    {
        auto put = [&](int k, const Interval& iv) {
            cert.zprime[static_cast<size_t>(k)] = {iv.lo_dyadic(), iv.hi_dyadic()};
        };
        put(0, v1.x);
        put(1, v1.y);
        put(2, v2.x);
        put(3, v2.y);
        put(4, in.x[2].to_interval(prec));
        put(5, Interval::from_int(0, prec));
    }

    // ---- window centres: dyadics pinned to the parked points ----------------
    auto make_coupling = [&](int trig, int targ, const Interval& px, const Interval& py,
                             const Magnitude& mag, const Int& q, const AmpKey& amp,
                             const std::string& id) {
        CouplingSpec c;
        c.trigger = trig;
        c.target = targ;
        auto [mx, ex] = detail::dyadic_centre(px);
        auto [my, ey] = detail::dyadic_centre(py);
        c.cx = mx;
        c.cy = my;
        c.center_gap = dyadic_add_ub(ex, ey);
        c.center_mag = mag;
        c.nu = Rat(1, q * q * q);
        c.amp = amp;
        c.stage_added = in.n;
        c.id = id + "-" + std::to_string(in.n);
        return c;
    };
    const Interval zero_iv = Interval::from_int(0, prec);
    cert.coup_bhat = make_coupling(2, 1, in.x[2].to_interval(prec), zero_iv, in.x[2], qh,
                                   amp_h, "squeeze");
    cert.coup_ctilde = make_coupling(0, 2, cert.x1_hat.to_interval(prec), zero_iv, cert.x1_hat,
                                     qt, amp_t, "drain");
    cert.coup_dbar = make_coupling(1, 0, cert.x_out[1].to_interval(prec), zero_iv,
                                   cert.x_out[1], qb, amp_b, "clock");

    // ---- fire memberships of the four careers -------------------------------
    // Inherited era: the clock starts at v2 and only rotates until the squeeze
    // era; the per-fire arc is the numerator bump over the new clock period.
    const Rat arc_a = x2_hi * (1 + in.eta) * tp * Rat(qh * c2a, qb);
    const Rat devc2 = cert.corr2_ub.to_rat();
    const Rat devc1 = cert.corr1_ub.to_rat();
    const Rat gap_a = in.inner.center_gap.to_rat();
    check("fire-membership-inherited", gap_a + devc2 + arc_a <= nu_a / 2,
          "drifted clock stays inside the live plateau through the opening era");
    check("fire-membership-squeeze",
          cert.coup_bhat.center_gap.to_rat() <= cert.coup_bhat.nu / 2,
          "coordinate 3 parks exactly on the squeeze centre");
    check("fire-membership-drain",
          cert.coup_ctilde.center_gap.to_rat() <= cert.coup_ctilde.nu / 2,
          "coordinate 1 parks exactly on the drain centre");
    check("fire-membership-clock",
          cert.coup_dbar.center_gap.to_rat() <= cert.coup_dbar.nu / 2,
          "coordinate 2 parks exactly on the clock centre");

    // ---- off-calendar exclusions -------------------------------------------
    // Exact phase grids make every non-fire step clear each window by a chord
    // or by a magnitude gap.
    const Rat nu_h = cert.coup_bhat.nu, nu_t = cert.coup_ctilde.nu, nu_b = cert.coup_dbar.nu;

    // off-axis slope picked up across the opening and squeeze eras
    Rat slope1, slope2;
    {
        Interval pile_a = detail::geom_pile(rho_a, cert.khat, prec) *
                          Interval::from_rat(tp * Rat(q2 * c1a, qt), prec);
        Interval pile_2 = detail::geom_pile(rho_h, cert.L_hat, prec) *
                          Interval::from_rat(tp * Rat(qh * c2a, qb), prec);
        slope1 = pile_a.hi_dyadic().to_rat() + devc1 / x1_lo;
        slope2 = pile_2.hi_dyadic().to_rat() + devc2 / x2_lo;
        check("slope-mild", slope1 <= Rat(1, 8) && slope2 <= Rat(1, 8),
              "off-axis slopes stay in the small-angle regime");
        Rat excess = std::max(Rat(4 * slope1 * slope1), Rat(4 * slope2 * slope2)) +
                     std::max(Rat(devc1 / x1_lo), Rat(devc2 / x2_lo));
        cert.envelope_excess = dyadic_from_rat_ub(excess);
        check("orbit-envelope", excess <= in.eta,
              "in-stage magnitudes stay within (1+eta) of the certified chains");
    }

    check("exclusion-opening-offgrid",
          chord_lower_bound(x3_lo, Rat(1, qh)) > nu_h * margin17,
          "off the opening grid coordinate 3 clears the window by a chord");
    check("exclusion-middle-offgrid",
          chord_lower_bound(x1h_lo * (1 - slope1), Rat(1, qt)) > nu_t * margin17,
          "off the middle grid coordinate 1 clears the window by a chord");
    check("exclusion-outer-offgrid",
          chord_lower_bound(xo2_lo * (1 - slope2), Rat(1, qb)) > nu_b * margin17,
          "off the clock grid coordinate 2 clears the window by a chord");
    check("exclusion-middle-during-opening",
          x1h_lo * ((1 / rho_a) - 1) * (1 - slope1) > 2 * (nu_t + x1h_hi * slope1),
          "undrained coordinate 1 clears the middle window by its rate gap");
    check("exclusion-outer-during-opening",
          x2_lo * (1 - slope2) - xo2_hi > 2 * nu_b,
          "unsqueezed clock magnitude clears the outer window");
    check("exclusion-outer-during-squeeze",
          xo2_lo * ((1 / rho_h) - 1) * (1 - slope2) > 2 * nu_b,
          "mid-squeeze clock magnitudes clear the outer window by the rate gap");
    check("exclusion-inherited-offgrid",
          Rat(qh * c2a, qb) <= Rat(1, 2 * q2) &&
              chord_lower_bound(x2_lo * (1 - slope2), Rat(1, 2 * q2)) > nu_a * margin17,
          "off the inherited grid the clock clears the live window");

    // the new opening window must stay silent over the whole parked past
    {
        Int span3 = 0;
        Rat prev_rho_t(0);
        for (const auto& e : in.eras)
            if (e.target == 2 && e.t_last > cert.M_in - 1 - span3) {
                // latest era that set coordinate 3's current value
            }
        for (const auto& e : in.eras)
            if (e.target == 2) {
                span3 = std::max(span3, Int(cert.M_in - e.t_last));
                prev_rho_t = e.rho;
            }
        bool span_ok = true;
        std::string det = "no parked history";
        if (!in.eras.empty() && prev_rho_t != 0) {
            // parked stretch since the last drain fire, plus the rate gap
            // against the pre-drain magnitudes
            Int span = 0;
            for (const auto& e : in.eras)
                if (e.target == 2) span = cert.M_in - e.t_last;
            span_ok = qh > span &&
                      x3_lo * ((1 / prev_rho_t) - 1) > 2 * (nu_h + x3_hi * in.eta);
            det = "qhat3 exceeds the parked span and older magnitudes clear by rate gap";
        }
        check("exclusion-opening-past", span_ok, det);
    }

    // ---- plateau-margin ledger ----------------------------------------------
    cert.eras_after = in.eras;
    {
        const std::array<Rat, 3> dw = {Rat(c1a, qt), Rat(c2a, qb), Rat(c3a, qh)};
        const std::array<Rat, 3> corr_rel = {devc1 / x1_lo, devc2 / x2_lo, Rat(0)};
        for (auto& e : cert.eras_after) {
            size_t tc = static_cast<size_t>(e.trigger);
            Rat lever = Rat(cert.M_in - e.t_first + qh);  // covers continued careers
            Rat spend = e.scale_hi * (tp * dw[tc] * lever + corr_rel[tc]);
            Dyadic spend_d = dyadic_from_rat_ub(spend);
            bool ok = cmp_dyadic_rat(e.margin_left, 2 * spend) >= 0;
            check("era-margin-" + e.coupling_id + "-s" + std::to_string(in.n), ok,
                  "frequency edit spends at most half the remaining plateau headroom");
            if (ok) {
                Rat left = e.margin_left.to_rat() - spend;
                e.margin_left = dyadic_from_rat_ub(left < 0 ? Rat(0) : left);
            }
        }
    }

    // new era records
    {
        auto era = [&](const CouplingSpec& c, const Int& grid, const Int& t1, const Int& tl,
                       const Int& fires, const Rat& scale, const Rat& dev0) {
            EraRecord e;
            e.stage = in.n;
            e.coupling_id = c.id;
            e.trigger = c.trigger;
            e.target = c.target;
            e.grid = grid;
            e.t_first = t1;
            e.t_last = tl;
            e.fires = fires;
            e.rho = c.amp.rho;
            e.nu = c.nu;
            e.scale_hi = scale;
            Rat m0 = c.nu / 2 - dev0;
            check("era-headroom-" + c.id, m0 > c.nu / 4,
                  "initial deviation leaves at least half the plateau headroom");
            e.margin_left = dyadic_from_rat_ub(std::max(m0, Rat(0)));
            return e;
        };
        cert.eras_created.push_back(era(in.inner, q2, cert.M_in + q2, cert.M_in + qh,
                                        cert.khat, x2_hi * (1 + slope2),
                                        gap_a + devc2 + arc_a));
        cert.eras_created.push_back(era(cert.coup_bhat, qh, cert.M_in + qh, cert.M_in + qt,
                                        cert.L_hat, x3_hi,
                                        cert.coup_bhat.center_gap.to_rat()));
        cert.eras_created.push_back(era(cert.coup_ctilde, qt, cert.M_in + qt, anchor,
                                        cert.L_tilde + 1, x1h_hi,
                                        cert.coup_ctilde.center_gap.to_rat()));
        cert.eras_created.push_back(era(cert.coup_dbar, qb, anchor, cert.M_out,
                                        cert.L_bar + 1, xo2_hi,
                                        cert.coup_dbar.center_gap.to_rat()));
        for (const auto& e : cert.eras_created) cert.eras_after.push_back(e);
    }

    // ---- dormant couplings stay clear ---------------------------------------
    for (const auto& d : in.dormant) {
        size_t tc = static_cast<size_t>(d.trigger);
        bool clear = Magnitude::cmp(in.x[tc].times_rat(Rat(2)), d.center_mag) <= 0 &&
                     d.nu * 10 <= detail::mag_lo_rat(d.center_mag, prec);
        check("dormant-clearance-" + d.id, clear,
              "orbit magnitudes stay below half the dormant window centre");
    }

    // ---- spec admissibility and safety margins ------------------------------
    {
        bool ok = true;
        auto adm = [&](const CouplingSpec& c) {
            size_t tc = static_cast<size_t>(c.trigger);
            Rat xc = detail::mag_lo_rat(c.center_mag, prec);
            Rat zi = detail::mag_hi_rat(cert.x_out[tc], prec) * (1 + in.eta);
            ok = ok && (xc - c.nu > Rat(11, 10) * zi);
        };
        for (const auto& d : in.dormant) adm(d);
        adm(in.inner);
        adm(cert.coup_bhat);
        adm(cert.coup_ctilde);
        check("admissibility", ok,
              "every retired window sits above 1.1x the final orbit box");
    }
    check("margin-10x", nu_t * 10 <= x1h_lo && nu_h * 10 <= x3_lo,
          "window widths an order below their trigger magnitudes");

    // ---- postconditions ------------------------------------------------------
    check("halving-postcondition",
          Magnitude::cmp(cert.x_out[0], in.x[0].times_rat(Rat(1, 2))) <= 0 &&
              Magnitude::cmp(cert.x_out[1], in.x[1].times_rat(Rat(1, 2))) <= 0 &&
              Magnitude::cmp(cert.x_out[2], in.x[2].times_rat(Rat(1, 2))) <= 0,
          "each coordinate at least halves across the stage");
    check("clock-floor", xo2_lo >= Rat(1, qb),
          "the squeezed clock stays above one part of its rotation grid");
    check("drive-drop", x1h_lo - detail::mag_hi_rat(cert.x_out[0], prec) > nu_t,
          "the outer career drops coordinate 1 past the middle window width");
    cert.eta_next = in.schedule.next(in.eta, qb, in.n + 1);
    check("eta-tail-rule", cert.eta_next <= in.eta / (2 * Rat(qb)) && cert.eta_next > 0,
          "the next allowance keeps future edits summable below eta/qbar2");

    // ---- norm ledger entries -------------------------------------------------
    cert.ledger_entries = {
        LedgerEntry{cert.coup_bhat.id, in.n, detail::coupling_ledger_bound(qh)},
        LedgerEntry{cert.coup_ctilde.id, in.n, detail::coupling_ledger_bound(qt)},
        LedgerEntry{cert.coup_dbar.id, in.n, detail::coupling_ledger_bound(qb)}};
    {
        Dyadic total{0, 0};
        for (const auto& e : cert.ledger_entries) total = dyadic_add_ub(total, e.bound);
        check("ledger-share", cmp_dyadic_rat(total, in.eta / 2) <= 0,
              "the three new couplings stay within half the stage allowance");
    }

    // ---- density / reach ------------------------------------------------------
    cert.reach = [&]() {
        ReachCertificate rc;
        Int side = rat_ceil(1 / in.eta);
        rc.cells = side * side * side;
        if (rc.cells <= 1000000) {
            rc.grid_mode = true;
            rc.holds = true;
            for (Int a = 0; a < side && rc.holds; ++a)
                for (Int b = 0; b < side && rc.holds; ++b)
                    for (Int c = 0; c < side && rc.holds; ++c) {
                        ReachWitness wit = reach_witness(wn1, wn2, wn3, Rat(a, side),
                                                         Rat(b, side), Rat(c, side));
                        bool ok = wit.m >= 0 && wit.m < qb && wit.err1 <= in.eta &&
                                  wit.err2 <= in.eta && wit.err3 <= in.eta;
                        if (!ok) {
                            rc.holds = false;
                            rc.detail = "cell (" + int_str(a) + "," + int_str(b) + "," +
                                        int_str(c) + ") unreached";
                        }
                    }
            if (rc.holds) rc.detail = "grid witness, " + int_str(rc.cells) + " cells";
        } else {
            rc.grid_mode = false;
            rc.holds = Rat(1, 2 * qh) <= in.eta / 2 && Rat(1, 2 * cert.L_hat) <= in.eta / 2 &&
                       Rat(1, 2 * (cert.L_tilde + 1)) <= in.eta / 2;
            rc.detail = "tier resolutions 1/qhat3, 1/L_hat, 1/(L_tilde+1) under eta";
        }
        return rc;
    }();
    check("reach-density", cert.reach.holds, cert.reach.detail);

    // ---- backward image of the corrected start -------------------------------
    {
        Vec2 z1 = v1, z2 = v2;
        Vec2 z3{in.x[2].to_interval(prec), Interval::from_int(0, prec)};
        for (auto it = in.history.rbegin(); it != in.history.rend(); ++it) {
            const StageCertificate& s = *it;
            const Int sqh = s.params.qhat3, sqt = s.qtilde1, sqb = s.qbar2;
            const Rat r_a = s.coup_a.amp.rho, r_h = detail::toy_rho(s.params.m_hat);
            const Rat r_t = detail::toy_rho(s.params.m_tilde), r_b = detail::toy_rho(s.params.m_bar);
            // plane transfers of segment s under the current frequencies
            Mat2 t1 = mat2_pow(saddle(r_b, prec) * rotation_rev(detail::rev_frac(sqb, wn1), prec),
                               s.L_bar + 1, prec) *
                      rotation_rev(detail::rev_frac(sqb - sqh, wn1), prec) *
                      mat2_pow(saddle(r_a, prec) * rotation_rev(detail::rev_frac(q2, wn1), prec),
                               s.khat, prec);
            Mat2 t2 = rotation_rev(detail::rev_frac(s.N - sqt, wn2), prec) *
                      mat2_pow(saddle(r_h, prec) * rotation_rev(detail::rev_frac(sqh, wn2), prec),
                               s.L_hat, prec);
            Mat2 t3 = rotation_rev(detail::rev_frac(s.N - sqb, wn3), prec) *
                      mat2_pow(saddle(r_t, prec) * rotation_rev(detail::rev_frac(sqt, wn3), prec),
                               s.L_tilde + 1, prec);
            z1 = solve_unit(t1, z1);
            z2 = solve_unit(t2, z2);
            z3 = solve_unit(t3, z3);
        }
        auto put = [&](int k, const Interval& iv) {
            cert.zbar0[static_cast<size_t>(k)] = {iv.lo_dyadic(), iv.hi_dyadic()};
        };
        put(0, z1.x);
        put(1, z1.y);
        put(2, z2.x);
        put(3, z2.y);
        put(4, z3.x);
        put(5, z3.y);

        Dyadic step{0, 0};
        for (int k = 0; k < 6; ++k) {
            size_t ks = static_cast<size_t>(k);
            Interval now = Interval::hull_of(Interval::from_dyadic(cert.zbar0[ks][0], prec),
                                             Interval::from_dyadic(cert.zbar0[ks][1], prec));
            Interval before = Interval::hull_of(Interval::from_dyadic(in.zbar0_prev[ks][0], prec),
                                                Interval::from_dyadic(in.zbar0_prev[ks][1], prec));
            step = detail::box_pair_ub(step, detail::iv_abs_ub(now - before));
        }
        cert.zbar0_step_ub = step;
        check("start-point-step", cmp_dyadic_rat(step, in.eta) <= 0,
              "the refreshed start point moves by at most eta");
    }

    if (!opts.audit && !cert.all_hold())
        throw std::runtime_error("HYPOTHESIS_VIOLATION: " + cert.first_failure());
    return cert;
}

// ---------------------------------------------------------------------------
// run_stage: search the stage parameters (smallest admissible, verify, double
// on failure), then certify.
// ---------------------------------------------------------------------------
inline StageCertificate run_stage(const StageInput& in, const StageOptions& opts = {}) {
    if (opts.force) return certify_stage(in, *opts.force, opts);

    const mpfr_prec_t prec0 = 320;
    const Rat x1_lo = detail::mag_lo_rat(in.x[0], prec0), x1_hi = detail::mag_hi_rat(in.x[0], prec0);
    const Rat x2_lo = detail::mag_lo_rat(in.x[1], prec0), x2_hi = detail::mag_hi_rat(in.x[1], prec0);
    const Rat x3_lo = detail::mag_lo_rat(in.x[2], prec0);
    const Rat& tp = detail::two_pi_ub();
    const Int q1 = den(in.omega[0]), q2 = den(in.omega[1]), q3 = den(in.omega[2]);
    const Rat rho_a = in.inner.amp.rho;
    const Rat margin17(17, 16);

    StageParams par;

    // deviation budgets for the junction corrections: respect the stage
    // allowance, the live plateau, and every old era's remaining headroom
    Rat budget1 = x1_lo * in.eta / 4;
    Rat budget2 = std::min(Rat(x2_lo * in.eta / 4), Rat(in.inner.nu / 8));
    for (const auto& e : in.eras) {
        Rat head = e.margin_left.to_rat() / 8;
        if (e.trigger == 0) budget1 = std::min(budget1, Rat(x1_lo * head / e.scale_hi));
        if (e.trigger == 1) budget2 = std::min(budget2, Rat(x2_lo * head / e.scale_hi));
    }

    // ---- opening denominator: density, parked span, spend headroom ----------
    Int lo = rat_floor(1 / in.eta) + 1;
    lo = std::max(lo, rat_ceil(2 / x3_lo));
    for (const auto& e : in.eras) {
        if (e.target == 2) lo = std::max(lo, Int(in.M - e.t_last + 1));
        if (e.trigger == 2) {
            // rotational spend at |c3| = 1; re-verified after the numerator
            Rat need = 8 * e.scale_hi * tp * Rat(in.M - e.t_first) / e.margin_left.to_rat();
            lo = std::max(lo, rat_ceil(need));
        }
    }
    Int qh = round_up_multiple(lo, q2);
    Rat wn3;
    for (int rounds = 0;; ++rounds) {
        if (rounds > 200) throw std::runtime_error("RETRY_EXHAUSTED: opening denominator search");
        auto [w, c] = detail::replace_numerator(in.omega[2], qh, in.eta);
        bool ok = true;
        for (const auto& e : in.eras)
            if (e.trigger == 2) {
                Rat spend = e.scale_hi * tp * Rat(boost::multiprecision::abs(c), 1) *
                            Rat(in.M - e.t_first) / Rat(qh);
                ok = ok && 2 * spend <= e.margin_left.to_rat() / 2;
            }
        // survival of the driven coordinate under the inherited career
        Int khat = qh / q2;
        Magnitude x1h = in.x[0].times_pow(in.inner.amp, khat);
        ok = ok && Magnitude::cmp(x1h.times_rat(Rat(4)), in.x[0]) >= 0;
        if (ok) {
            wn3 = w;
            par.c3 = c;
            break;
        }
        qh = round_up_multiple(2 * qh, q2);
    }
    par.qhat3 = qh;
    const Int khat = qh / q2;
    Magnitude x1_hat = in.x[0].times_pow(in.inner.amp, khat);
    const Rat x1h_lo = detail::mag_lo_rat(x1_hat, prec0);
    const Rat x1h_hi = detail::mag_hi_rat(x1_hat, prec0);

    // ---- opening rate: density plus the coordinate-1 correction budget ------
    Int L_hat = 0;
    Int qt = 0;
    for (unsigned m = 2;; ++m) {
        if (Rat(Int(1) << m) * margin17 > x2_lo * Rat(q2 * q2 * q2) / in.inner.nu / Rat(q2 * q2 * q2))
            ;  // placeholder, real cap below
        if (Rat(Int(1) << m) * in.inner.nu * margin17 > x2_lo)
            throw std::runtime_error("RETRY_EXHAUSTED: opening rate hit the dodge cap");
        HalvingCertificate h = halving_count(AmpKey::toy_rate(detail::toy_rho(m)));
        if (Rat(1, h.count) >= in.eta) continue;
        Int qt_c = h.count * qh;
        auto [w, c] = detail::replace_numerator(in.omega[0], qt_c, in.eta);
        Interval pile = detail::geom_pile(rho_a, khat, prec0) *
                        Interval::from_rat(x1_hi * tp *
                                               Rat(q2 * boost::multiprecision::abs(c), qt_c),
                                           prec0);
        if (pile.hi_dyadic().to_rat() <= budget1 / 2) {
            par.m_hat = m;
            par.c1 = c;
            L_hat = h.count;
            qt = qt_c;
            break;
        }
    }

    // ---- squeeze rate: density, dodge cap, correction and spend budgets ------
    Int qb = 0;
    const Rat rho_h = detail::toy_rho(par.m_hat);
    for (unsigned m = 2;; ++m) {
        if (Rat(Int(1) << m) * Rat(margin17, qh * qh * qh) > x3_lo)
            throw std::runtime_error("RETRY_EXHAUSTED: squeeze rate hit the dodge cap");
        HalvingCertificate h = halving_count(AmpKey::toy_rate(detail::toy_rho(m)));
        if (Rat(1, h.count + 1) >= in.eta) continue;
        Int qb_c = (h.count + 1) * qt;
        auto [w, c] = detail::replace_numerator(in.omega[1], qb_c, in.eta);
        const Int ca = boost::multiprecision::abs(c);
        Interval pile = detail::geom_pile(rho_h, L_hat, prec0) *
                        Interval::from_rat(x2_hi * tp * Rat(qh * ca, qb_c), prec0);
        bool ok = pile.hi_dyadic().to_rat() <= budget2 / 2;
        // the inherited fires must also swallow the rotational arc
        Rat arc = x2_hi * (1 + in.eta) * tp * Rat(qh * ca, qb_c);
        ok = ok && in.inner.center_gap.to_rat() + budget2 + arc <= in.inner.nu / 2;
        // old-era rotational spends at the clock edit
        for (const auto& e : in.eras)
            if (e.trigger == 1) {
                Rat spend = e.scale_hi * tp * Rat(ca) * Rat(in.M - e.t_first + qh) / Rat(qb_c);
                ok = ok && 2 * spend <= e.margin_left.to_rat() / 2;
            }
        if (ok) {
            par.m_tilde = m;
            par.c2 = c;
            qb = qb_c;
            break;
        }
    }

    // ---- outer rate: survival forecast for the next stage's opening ---------
    {
        Rat eta_next = in.schedule.next(in.eta, qb, in.n + 1);
        Int dens_next = rat_floor(1 / eta_next) + 1;
        for (unsigned m = 2;; ++m) {
            if (Rat(Int(1) << m) * Rat(margin17, qt * qt * qt) > x1h_lo)
                throw std::runtime_error("RETRY_EXHAUSTED: outer rate hit the dodge cap");
            HalvingCertificate h = halving_count(AmpKey::toy_rate(detail::toy_rho(m)));
            // next opening: one multiple above the parked span or the density floor
            Int khat_next = std::max(h.count + 2, ceil_div(dens_next, qb) + 1);
            // rho_bar^khat_next >= 1/4  <=>  khat_next * 2^-m <= ~1.38; use 1
            if (khat_next <= Int(1) << m) {
                par.m_bar = m;
                break;
            }
        }
    }

    par.prec = static_cast<long>(
        192 + 2 * bit_length(qb) + (Int(1) << par.m_hat > qb ? bit_length(qb) : bit_length(Int(1) << par.m_hat)) +
        16 * in.n);
    par.prec = std::max<long>(par.prec, 192 + static_cast<long>(2 * bit_length(qb)) +
                                            static_cast<long>(par.m_hat + par.m_tilde) / 2);

    return certify_stage(in, par, opts);
}

// ---- seed and theorem loop --------------------------------------------------

struct SeedData {
    std::array<Rat, 3> omega{Rat(63, 256), Rat(255, 4096), Rat(7, 16)};
    std::array<Magnitude, 3> x{Magnitude::from_rat(Rat(1, 2)), Magnitude::from_rat(Rat(1, 2)),
                               Magnitude::from_rat(Rat(1, 4))};
    Rat eps = Rat(1, 2);    // chain budget
    Rat gamma = Rat(1, 2);  // distance-to-identity allowance
    unsigned m_seed = 10;   // rate of the installed clock->drive pair
    Rat nu_seed = Rat(1, Int(4096) * 4096 * 4096);
};

inline CouplingSpec make_seed_coupling(const SeedData& sd) {
    CouplingSpec c;
    c.trigger = 1;
    c.target = 0;
    Rat x2 = *sd.x[1].to_exact_rat();
    c.cx = dyadic_from_rat_ub(x2);  // seed magnitudes are dyadic, so exact
    c.cy = Dyadic{0, 0};
    c.center_gap = Dyadic{0, 0};
    c.center_mag = sd.x[1];
    c.nu = sd.nu_seed;
    c.amp = AmpKey::toy_rate(detail::toy_rho(sd.m_seed));
    c.stage_added = 0;
    c.id = "seed";
    return c;
}

struct TheoremRun {
    SeedData seed;
    CouplingSpec seed_coupling;
    Rat eta0;
    std::vector<Rat> etas;  // etas[k] is the allowance of stage k+1
    std::vector<StageCertificate> stages;
    NormLedger ledger;
    std::vector<NamedCheck> overall;

    bool all_hold() const {
        for (const auto& s : stages)
            if (!s.all_hold()) return false;
        for (const auto& c : overall)
            if (!c.holds) return false;
        return true;
    }
    std::string first_failure() const {
        for (const auto& s : stages)
            if (!s.all_hold()) return s.first_failure();
        for (const auto& c : overall)
            if (!c.holds) return c.name;
        return {};
    }
};

inline Box6 seed_box(const SeedData& sd) {
    Box6 b{};
    for (int i = 0; i < 3; ++i) {
        Dyadic xi = dyadic_from_rat_ub(*sd.x[static_cast<size_t>(i)].to_exact_rat());
        b[static_cast<size_t>(2 * i)] = {xi, xi};
        b[static_cast<size_t>(2 * i + 1)] = {Dyadic{0, 0}, Dyadic{0, 0}};
    }
    return b;
}

// Seed-stage density: the grid witness under the seed frequencies, checked at
// the base allowance before any stage runs.
inline ReachCertificate seed_reach(const SeedData& sd, const Rat& eta0) {
    ReachCertificate rc;
    Int side = rat_ceil(1 / eta0);
    rc.cells = side * side * side;
    rc.grid_mode = true;
    rc.holds = true;
    const Int qb = den(sd.omega[1]);
    for (Int a = 0; a < side && rc.holds; ++a)
        for (Int b = 0; b < side && rc.holds; ++b)
            for (Int c = 0; c < side && rc.holds; ++c) {
                ReachWitness wit =
                    reach_witness(sd.omega[0], sd.omega[1], sd.omega[2], Rat(a, side),
                                  Rat(b, side), Rat(c, side));
                bool ok = wit.m >= 0 && wit.m < qb && wit.err1 <= eta0 && wit.err2 <= eta0 &&
                          wit.err3 <= eta0;
                if (!ok) {
                    rc.holds = false;
                    rc.detail = "cell (" + int_str(a) + "," + int_str(b) + "," + int_str(c) +
                                ") unreached";
                }
            }
    if (rc.holds) rc.detail = "grid witness, " + int_str(rc.cells) + " cells";
    return rc;
}

inline TheoremRun run_theorem(unsigned stages, const SeedData& sd = {},
                              const StageOptions& opts = {}) {
    TheoremRun run;
    run.seed = sd;
    run.seed_coupling = make_seed_coupling(sd);
    EtaSchedule sched{sd.eps, sd.gamma};
    run.eta0 = sched.eta0();
    run.ledger.add("seed", 0, detail::coupling_ledger_bound(den(sd.omega[1])));

    StageInput t;
    t.n = 1;
    t.M = 0;
    t.eta = sched.next(run.eta0, den(sd.omega[1]), 1);
    t.omega = sd.omega;
    t.x = sd.x;
    t.inner = run.seed_coupling;
    t.zbar0_prev = seed_box(sd);
    t.schedule = sched;

    for (unsigned k = 1; k <= stages; ++k) {
        run.etas.push_back(t.eta);
        StageCertificate c = run_stage(t, opts);
        for (const auto& e : c.ledger_entries) run.ledger.add(e.label, e.stage, e.bound);

        StageInput nx;
        nx.n = k + 1;
        nx.M = c.M_out;
        nx.eta = c.eta_next;
        nx.omega = c.omega_out;
        nx.x = c.x_out;
        nx.inner = c.coup_dbar;
        nx.dormant = t.dormant;
        nx.dormant.push_back(t.inner);
        nx.dormant.push_back(c.coup_bhat);
        nx.dormant.push_back(c.coup_ctilde);
        nx.eras = c.eras_after;
        nx.history = t.history;
        nx.zbar0_prev = c.zbar0;
        nx.schedule = sched;

        run.stages.push_back(std::move(c));
        nx.history.push_back(run.stages.back());
        t = std::move(nx);
    }

    auto push = [&](std::string name, bool holds, std::string detail = {}) {
        run.overall.push_back(NamedCheck{std::move(name), holds, std::move(detail)});
    };
    // seed-stage density at the base allowance
    {
        ReachCertificate rc = seed_reach(sd, run.eta0);
        push("seed-reach", rc.holds, rc.detail);
    }
    // geometric envelope: stage k leaves every coordinate at most x/2^k
    {
        bool ok = true;
        for (size_t k = 0; k < run.stages.size(); ++k) {
            Rat scale = rat_pow(Rat(1, 2), static_cast<long>(k) + 1);
            for (size_t i = 0; i < 3; ++i)
                ok = ok && Magnitude::cmp(run.stages[k].x_out[i], sd.x[i].times_rat(scale)) <= 0;
        }
        push("state-halving-chain", ok, "x^(n) <= x^(0) 2^-n per coordinate");
    }
    {
        bool ok = true;
        for (const auto& s : run.stages)
            for (size_t i = 0; i < 3; ++i)
                ok = ok && rat_abs(s.omega_out[i] - s.omega_in[i]) <= s.eta;
        push("frequency-cauchy", ok, "|w^(n) - w^(n-1)| <= eta^(n) per stage");
    }
    {
        bool ok = true;
        for (size_t k = 0; k + 1 < run.etas.size(); ++k)
            ok = ok && run.etas[k + 1] <= run.etas[k] / (2 * Rat(run.stages[k].qbar2));
        push("eta-tail-chain", ok, "allowances shrink below eta/(2 qbar2) each stage");
    }
    {
        bool ok = true;
        for (const auto& s : run.stages)
            ok = ok && cmp_dyadic_rat(s.zbar0_step_ub, s.eta) <= 0;
        push("start-point-cauchy", ok, "start points form a Cauchy chain at rate eta^(n)");
    }
    {
        // cumulative distance to the identity stays within gamma * (1 - 2^-n-1)
        Rat allow = sd.gamma * (1 - rat_pow(Rat(1, 2), static_cast<long>(stages) + 1));
        push("ledger-within-gamma", run.ledger.within(allow),
             "accumulated coupling norms below the split allowance");
    }
    {
        // non-resonance margin: the per-stage witnesses survive the frequency
        // tail because future edits sum below eta^(n)/qbar2^(n)
        bool ok = true;
        for (const auto& s : run.stages) ok = ok && s.reach.holds && s.eta_next * 2 <= s.eta;
        push("limit-grid-margin", ok, "stage witnesses valid for the limit at twice eta");
    }
    return run;
}

}  // namespace attractor
