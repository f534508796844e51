#pragma once

// Symbolic nonnegative magnitudes: an exact rational base times integer
// powers of named per-fire contraction factors.  Orbit radii stay in this
// form through arbitrarily many contraction events; nothing is ever expanded
// into floating point except through certified interval logarithms.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "attractor/numeric.hpp"
#include "attractor/real.hpp"

namespace attractor {

struct UndecidedComparison : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Identity of a per-fire contraction factor exp(-eps):
//   toy:      eps = -log(rho), rho rational in (0,1)
//   faithful: eps = exp(-c * nu^(-2/(alpha-1)))
struct AmpKey {
    enum class Kind { toy, faithful };
    Kind kind = Kind::toy;
    Rat rho;        // toy
    Rat c, nu;      // faithful
    unsigned alpha = 2;

    static AmpKey toy_rate(const Rat& rho) {
        if (!(rho > 0 && rho < 1)) throw std::domain_error("AmpKey: toy rate outside (0,1)");
        AmpKey k;
        k.kind = Kind::toy;
        k.rho = rho;
        return k;
    }
    static AmpKey faithful_rate(const Rat& c, unsigned alpha, const Rat& nu) {
        if (!(c > 0 && nu > 0) || alpha < 2)
            throw std::domain_error("AmpKey: faithful rate parameters");
        AmpKey k;
        k.kind = Kind::faithful;
        k.c = c;
        k.nu = nu;
        k.alpha = alpha;
        return k;
    }

    friend bool operator==(const AmpKey& a, const AmpKey& b) {
        return a.kind == b.kind && a.rho == b.rho && a.c == b.c && a.nu == b.nu &&
               a.alpha == b.alpha;
    }
    friend bool operator<(const AmpKey& a, const AmpKey& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.rho != b.rho) return a.rho < b.rho;
        if (a.c != b.c) return a.c < b.c;
        if (a.nu != b.nu) return a.nu < b.nu;
        return a.alpha < b.alpha;
    }

    // The per-fire contraction exponent eps > 0.  Rates sit arbitrarily close
    // to 1 (rho = 1 - 2^-m with large m), so the quotient must carry enough
    // working bits to keep log(1/rho) away from the rounding of 1.0 before
    // the requested relative precision applies.
    Interval per_fire_log(mpfr_prec_t prec) const {
        if (kind == Kind::toy) {
            mpfr_prec_t p = prec + static_cast<mpfr_prec_t>(
                bit_length(num(rho)) + bit_length(den(rho)) + 8);
            return Interval::from_rat(Rat(1) / rho, p).log();
        }
        Interval x = Interval::from_rat(c, prec) *
                     pow_rat(Interval::from_rat(nu, prec), Rat(-2, alpha - 1), prec);
        return (-x).exp();
    }
};

class Magnitude {
  public:
    Magnitude() = default;
    static Magnitude from_rat(const Rat& r) {
        if (r < 0) throw std::domain_error("Magnitude: negative base");
        Magnitude m;
        m.base_ = r;
        return m;
    }
    static Magnitude zero() { return from_rat(Rat(0)); }

    bool is_zero() const { return base_ == 0; }
    const Rat& base() const { return base_; }
    const std::map<AmpKey, Int>& factors() const { return exps_; }

    Magnitude times_rat(const Rat& r) const {
        if (r < 0) throw std::domain_error("Magnitude: negative scale");
        Magnitude m = *this;
        m.base_ *= r;
        if (m.base_ == 0) m.exps_.clear();
        return m;
    }

    Magnitude times_pow(const AmpKey& key, const Int& count) const {
        Magnitude m = *this;
        if (m.base_ == 0 || count == 0) return m;
        Int& c = m.exps_[key];
        c += count;
        if (c == 0) m.exps_.erase(key);
        return m;
    }

    // this / other as a magnitude (other must be nonzero)
    Magnitude ratio_to(const Magnitude& other) const {
        if (other.base_ == 0) throw std::domain_error("Magnitude::ratio_to zero");
        Magnitude m = *this;
        if (m.base_ == 0) return m;
        m.base_ /= other.base_;
        for (const auto& [k, c] : other.exps_) {
            Int& slot = m.exps_[k];
            slot -= c;
            if (slot == 0) m.exps_.erase(k);
        }
        return m;
    }

    // ln(this); zero magnitude has no logarithm
    Interval log_interval(mpfr_prec_t prec) const {
        if (base_ == 0) throw std::domain_error("Magnitude::log_interval of zero");
        Interval acc = Interval::from_rat(base_, prec).log();
        for (const auto& [k, c] : exps_) {
            Interval eps = k.per_fire_log(prec);
            acc = acc - eps * Interval::from_int(c, prec);
        }
        return acc;
    }

    Interval to_interval(mpfr_prec_t prec) const {
        if (base_ == 0) return Interval::from_int(0, prec);
        return log_interval(prec).exp();
    }

    // exact rational value when all factors are toy rates and the result is
    // small enough to materialize
    std::optional<Rat> to_exact_rat(std::size_t max_bits = 1 << 14) const {
        if (base_ == 0) return Rat(0);
        std::size_t bits = bit_length(num(base_)) + bit_length(den(base_));
        for (const auto& [k, c] : exps_) {
            if (k.kind != AmpKey::Kind::toy) return std::nullopt;
            std::size_t kb = bit_length(num(k.rho)) + bit_length(den(k.rho));
            Int cost = boost::multiprecision::abs(c) * kb;
            if (cost > Int(max_bits)) return std::nullopt;
            bits += static_cast<std::size_t>(cost);
            if (bits > max_bits) return std::nullopt;
        }
        Rat v = base_;
        for (const auto& [k, c] : exps_) {
            if (c >= 0) v *= rat_pow(k.rho, static_cast<long>(c));
            else v /= rat_pow(k.rho, static_cast<long>(-c));
        }
        return v;
    }

    friend bool operator==(const Magnitude& a, const Magnitude& b) {
        return a.base_ == b.base_ && a.exps_ == b.exps_;
    }

    // certified three-way compare; throws UndecidedComparison at the cap
    static int cmp(const Magnitude& a, const Magnitude& b,
                   mpfr_prec_t start = 192, mpfr_prec_t cap = 1 << 22) {
        if (a == b) return 0;
        if (a.base_ == 0) return b.base_ == 0 ? 0 : -1;
        if (b.base_ == 0) return 1;
        auto ea = a.to_exact_rat(), eb = b.to_exact_rat();
        if (ea && eb) return *ea < *eb ? -1 : (*ea > *eb ? 1 : 0);
        for (mpfr_prec_t p = start; p <= cap; p *= 2) {
            auto r = a.log_interval(p).cmp(b.log_interval(p));
            if (r) return *r;
        }
        throw UndecidedComparison("Magnitude::cmp: intervals straddle at precision cap");
    }

    int cmp_rat(const Rat& r, mpfr_prec_t start = 192, mpfr_prec_t cap = 1 << 22) const {
        return cmp(*this, Magnitude::from_rat(r), start, cap);
    }

  private:
    Rat base_;                 // >= 0; zero clears factors
    std::map<AmpKey, Int> exps_;
};

// certified a <= scale * b
inline bool magnitude_le(const Magnitude& a, const Magnitude& b, const Rat& scale = Rat(1)) {
    return Magnitude::cmp(a, b.times_rat(scale)) <= 0;
}

// Minimal L >= 1 with factor^L <= 1/2, plus the certifying bracket
//   L * eps_lo >= ln2_hi   and   (L - 1) * eps_hi < ln2_lo
// at the stored precision.  For exact cases the bracket fields repeat the
// endpoint equalities and `exact` is set.
struct HalvingCertificate {
    Int count;
    long precision = 0;
    bool exact = false;
    Dyadic eps_lo, eps_hi, ln2_lo, ln2_hi;
};

// exact compare of a*k vs b for nonnegative dyadics; cheap log2 separation
// first, exact shift only when the magnitudes overlap (then the shift is
// bounded by the mantissa sizes)
inline int cmp_dyadic_scaled(const Dyadic& a, const Int& k, const Dyadic& b) {
    Int lm = a.mant * k;
    if (lm < 0 || b.mant < 0) throw std::domain_error("cmp_dyadic_scaled: negative");
    if (lm == 0) return b.mant == 0 ? 0 : -1;
    if (b.mant == 0) return 1;
    long la_lo = static_cast<long>(bit_length(lm)) - 1 + a.exp2;
    long lb_lo = static_cast<long>(bit_length(b.mant)) - 1 + b.exp2;
    if (la_lo + 1 <= lb_lo) return -1;  // value_a < 2^(la_lo+1) <= 2^lb_lo <= value_b
    if (lb_lo + 1 <= la_lo) return 1;
    long shift = a.exp2 - b.exp2;
    Int lhs = lm, rhs = b.mant;
    if (shift >= 0) lhs <<= shift;
    else rhs <<= -shift;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

inline HalvingCertificate halving_count(const AmpKey& key,
                                        mpfr_prec_t start = 128,
                                        mpfr_prec_t cap = 1 << 21) {
    HalvingCertificate cert;
    if (key.kind == AmpKey::Kind::toy && key.rho <= Rat(1, 2)) {
        // already at least halved each fire; equality rho = 1/2 included
        cert.count = 1;
        cert.exact = true;
        Interval eps = key.per_fire_log(start);
        Interval l2 = Interval::const_ln2(start);
        cert.precision = start;
        cert.eps_lo = eps.lo_dyadic();
        cert.eps_hi = eps.hi_dyadic();
        cert.ln2_lo = l2.lo_dyadic();
        cert.ln2_hi = l2.hi_dyadic();
        return cert;
    }
    // reduced rational rho != 1/2 can never satisfy rho^L = 1/2 exactly
    // (2-adic valuation), so a strict bracket exists; faithful rates are
    // handled the same way and escalate until the bracket resolves.
    for (mpfr_prec_t p = start; p <= cap; p *= 2) {
        Interval eps = key.per_fire_log(p);
        Interval l2 = Interval::const_ln2(p);
        if (!eps.is_positive()) continue;  // underflow at this precision
        Int L = (l2 / eps).ceil_hi();
        if (L < 1) L = 1;
        Dyadic eps_lo = eps.lo_dyadic(), eps_hi = eps.hi_dyadic();
        Dyadic ln2_lo = l2.lo_dyadic(), ln2_hi = l2.hi_dyadic();
        bool upper_ok = cmp_dyadic_scaled(eps_lo, L, ln2_hi) >= 0;
        bool lower_ok = L == 1 || cmp_dyadic_scaled(eps_hi, L - 1, ln2_lo) < 0;
        if (upper_ok && lower_ok) {
            cert.count = L;
            cert.precision = p;
            cert.eps_lo = eps_lo;
            cert.eps_hi = eps_hi;
            cert.ln2_lo = ln2_lo;
            cert.ln2_hi = ln2_hi;
            return cert;
        }
    }
    throw UndecidedComparison("halving_count: bracket did not resolve below precision cap");
}

}  // namespace attractor
