#pragma once

// Radius budgets for weighted-derivative (Gevrey-style) norms, the per-stage
// perturbation schedule, and the running norm ledger.  All budget constants
// are exact rationals for integer weight exponents alpha; ledger entries are
// dyadic upper bounds because their magnitudes overflow any materialized
// rational.

#include <string>
#include <vector>

#include "attractor/numeric.hpp"
#include "attractor/real.hpp"

namespace attractor {

struct ComposeBudgetParts {
    Rat mu, a, lambda, eps;
};

// Composition survives substitution Id + F at radius L < L1 when the
// nonconstant part of each component of F stays below eps:
//   mu = min{2, (1 + (L1/L)^alpha)/2}
//   a  with (1 + a)^(alpha-1) <= mu  (exact for alpha <= 2, dyadic search above)
//   lambda = (N (1 + 1/a))^(alpha-1)
//   eps = (L1^alpha - mu L^alpha) / lambda
inline ComposeBudgetParts compose_budget_parts(unsigned N, unsigned alpha,
                                               const Rat& L, const Rat& L1) {
    if (alpha == 0 || N == 0) throw std::domain_error("compose_budget: N, alpha >= 1");
    if (!(L > 0 && L1 > L)) throw std::domain_error("compose_budget: need 0 < L < L1");
    ComposeBudgetParts out;
    Rat ratio_pow = rat_pow(L1 / L, alpha);
    out.mu = std::min(Rat(2), Rat((1 + ratio_pow) / 2));
    if (alpha == 1) {
        out.a = 1;  // unused
        out.lambda = 1;
        out.eps = L1 - out.mu * L;
        return out;
    }
    if (alpha == 2) {
        out.a = out.mu - 1;
    } else {
        // largest dyadic a = k/2^24 with (1+a)^(alpha-1) <= mu
        long lo = 0, hi = 1l << 24;
        while (lo < hi) {
            long mid = (lo + hi + 1) / 2;
            Rat cand = 1 + Rat(mid, 1l << 24);
            if (rat_pow(cand, alpha - 1) <= out.mu) lo = mid;
            else hi = mid - 1;
        }
        if (lo == 0) throw std::domain_error("compose_budget: no dyadic a below mu");
        out.a = Rat(lo, 1l << 24);
    }
    out.lambda = rat_pow(Rat(N) * (1 + 1 / out.a), alpha - 1);
    out.eps = (rat_pow(L1, alpha) - out.mu * rat_pow(L, alpha)) / out.lambda;
    if (out.eps <= 0) throw std::logic_error("compose_budget: nonpositive margin");
    return out;
}

inline Rat compose_budget(unsigned N, unsigned alpha, const Rat& L, const Rat& L1) {
    return compose_budget_parts(N, alpha, L, L1).eps;
}

// A Hamiltonian field below this budget has a time-1 map within the
// composition budget at the midpoint radius.
inline Rat flow_budget(unsigned N, unsigned alpha, const Rat& L, const Rat& L1) {
    return compose_budget(N, alpha, L, (L + L1) / 2);
}

// Budget on the Hamiltonian function itself (2n phase-space variables):
// one radius step converts a function bound into a field bound.
inline Rat hamiltonian_budget(unsigned n, unsigned alpha, const Rat& L, const Rat& L1) {
    Rat Lmid = (L + L1) / 2;
    return rat_pow(L1 - Lmid, alpha) * flow_budget(2 * n, alpha, L, Lmid);
}

// Gap-to-field amplification constant C = 2^alpha (L1 - L')^-alpha, L' midpoint.
inline Rat amplification_constant(unsigned alpha, const Rat& L, const Rat& L1) {
    Rat Lmid = (L + L1) / 2;
    return rat_pow(Rat(2), alpha) / rat_pow(L1 - Lmid, alpha);
}

// Total budget for prepending time-1 maps of small Hamiltonians to a near-Id
// map: if ||Psi - Id|| + C * sum ||u_i|| <= eps then the whole composition
// moves by at most C * sum ||u_i||.
inline Rat chain_budget(unsigned n, unsigned alpha, const Rat& L, const Rat& L1) {
    Rat Lmid = (L + L1) / 2;
    Rat e1 = compose_budget(2 * n, alpha, L, Lmid);
    Rat e2 = amplification_constant(alpha, L, L1) * hamiltonian_budget(n, alpha, Lmid, L1);
    return std::min(e1, e2);
}

// Upper bound for the norm of one coupling Hamiltonian at the working radii:
// amplitude exp(-c nu^(-2/(alpha-1))) times profile growth exp(+c nu^(-1/(alpha-1)))
// times the declared coupler envelope.  Dyadic because the result underflows
// everything else.
inline Dyadic coupling_norm_ub(const Rat& c, unsigned alpha, const Rat& nu,
                               const Rat& coupler_envelope, mpfr_prec_t prec = 192) {
    if (alpha < 2) throw std::domain_error("coupling_norm_ub: alpha >= 2");
    if (!(nu > 0) || !(c > 0)) throw std::domain_error("coupling_norm_ub: need nu, c > 0");
    Rat beta(1, alpha - 1);
    Interval nu_i = Interval::from_rat(nu, prec);
    Interval expo = Interval::from_rat(c, prec) *
                    (pow_rat(nu_i, -beta, prec) - pow_rat(nu_i, -2 * beta, prec));
    Interval bound = expo.exp() * Interval::from_rat(coupler_envelope, prec);
    return bound.hi_dyadic();
}

// Dyadic * rational, rounded up.
inline Dyadic dyadic_mul_rat_ub(const Dyadic& d, const Rat& r, mpfr_prec_t prec = 128) {
    if (d.mant < 0 || r < 0) throw std::domain_error("dyadic_mul_rat_ub: negative");
    mpfr_prec_t p = std::max<mpfr_prec_t>(
        prec, static_cast<mpfr_prec_t>(bit_length(d.mant) + 16));
    Interval v = Interval::from_dyadic(d, p) * Interval::from_rat(r, p);
    return v.hi_dyadic();
}

// Per-stage perturbation allowances.  Each stage must fit inside eta(n);
// the recurrence forces at-least-halving plus a 1/(2 q) refinement so that
// the tail after stage n stays below eta(n)/q.
struct EtaSchedule {
    Rat eps;    // chain budget at the working radii
    Rat gamma;  // total distance-to-identity allowance

    Rat eta0() const {
        return std::min(std::min(Rat(eps / 2), Rat(gamma / 2)), Rat(1, 10));
    }
    Rat next(const Rat& eta_n, const Int& q, unsigned n_next) const {
        if (q < 2) throw std::domain_error("EtaSchedule::next: q >= 2 required");
        Rat pow2 = rat_pow(Rat(1, 2), static_cast<long>(n_next) + 1);
        Rat r = std::min(std::min(Rat(eps * pow2), Rat(gamma * pow2)), Rat(1, 10));
        return std::min(r, Rat(eta_n / (2 * Rat(q))));
    }
};

struct LedgerEntry {
    std::string label;
    unsigned stage;
    Dyadic bound;
};

// Running sum of certified coupling-norm upper bounds.  The total must stay
// below gamma for the limit map to remain within the allowance.
class NormLedger {
  public:
    void add(std::string label, unsigned stage, const Dyadic& ub) {
        entries_.push_back(LedgerEntry{std::move(label), stage, ub});
        total_ = dyadic_add_ub(total_, ub);
    }
    const std::vector<LedgerEntry>& entries() const { return entries_; }
    const Dyadic& total() const { return total_; }
    bool within(const Rat& allowance) const {
        return cmp_dyadic_rat(total_, allowance) <= 0;
    }

  private:
    std::vector<LedgerEntry> entries_;
    Dyadic total_{0, 0};
};

}  // namespace attractor
