#pragma once

// Directed-rounding floating layer over MPFR: outward-rounded intervals and
// dyadic (mantissa * 2^exp) scalars.  Every endpoint is rounded away from the
// enclosed set, so interval comparisons that come out decisive are proofs.

#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "attractor/numeric.hpp"

namespace attractor {

inline Int int_from_mpz(mpz_srcptr z) {
    char* s = mpz_get_str(nullptr, 16, z);
    std::string str(s);
    void (*freefunc)(void*, size_t) = nullptr;
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, str.size() + 1);
    bool neg = !str.empty() && str[0] == '-';
    Int v("0x" + (neg ? str.substr(1) : str));
    return neg ? Int(-v) : v;
}

inline void mpz_from_int(mpz_t z, const Int& v) {
    Int a = v < 0 ? Int(-v) : v;
    std::string hex = a.str(0, std::ios_base::hex);
    if (mpz_set_str(z, hex.c_str(), 16) != 0)
        throw std::runtime_error("mpz_from_int: bad hex round trip");
    if (v < 0) mpz_neg(z, z);
}

// value = mant * 2^exp2.  Used for ledger bounds whose magnitudes are far
// outside anything a materialized rational could hold.
struct Dyadic {
    Int mant = 0;
    long exp2 = 0;

    bool is_zero() const { return mant == 0; }

    void normalize() {
        if (mant == 0) { exp2 = 0; return; }
        unsigned long tz = boost::multiprecision::lsb(boost::multiprecision::abs(mant));
        if (tz > 0) { mant >>= tz; exp2 += static_cast<long>(tz); }
    }

    Rat to_rat() const {  // only safe for moderate |exp2|
        if (exp2 > (1 << 22) || exp2 < -(1 << 22))
            throw std::domain_error("Dyadic::to_rat: exponent too large to materialize");
        if (exp2 >= 0) return Rat(mant * (Int(1) << exp2));
        return Rat(mant, Int(1) << -exp2);
    }

    std::string str() const { return int_str(mant) + "p" + std::to_string(exp2); }

    static Dyadic parse(const std::string& s) {
        auto p = s.find('p');
        if (p == std::string::npos) throw std::invalid_argument("Dyadic::parse: missing p");
        return Dyadic{parse_int(s.substr(0, p)), std::stol(s.substr(p + 1))};
    }
};

// Sign of (d - r), exact.  Decides cheaply by log2 separation; only when the
// magnitudes are comparable does it shift, and then the shift is modest.
inline int cmp_dyadic_rat(const Dyadic& d, const Rat& r) {
    int ds = d.mant == 0 ? 0 : (d.mant < 0 ? -1 : 1);
    int rs = r == 0 ? 0 : (r < 0 ? -1 : 1);
    if (ds != rs) return ds < rs ? -1 : 1;
    if (ds == 0) return 0;
    // both strictly same sign; compare |d| vs |r|
    Int am = boost::multiprecision::abs(d.mant);
    Int rn = boost::multiprecision::abs(num(r)), rd = den(r);
    long dl_lo = static_cast<long>(bit_length(am)) - 1 + d.exp2;
    long dl_hi = dl_lo + 1;
    long rl_lo = static_cast<long>(bit_length(rn)) - static_cast<long>(bit_length(rd)) - 1;
    long rl_hi = rl_lo + 2;
    int mag_cmp = 0;
    if (dl_hi < rl_lo) mag_cmp = -1;
    else if (dl_lo > rl_hi) mag_cmp = 1;
    else {
        // comparable: materialize the shift (bounded by the rational's size)
        if (d.exp2 > (1 << 24) || d.exp2 < -(1 << 24))
            throw std::domain_error("cmp_dyadic_rat: comparable magnitudes with huge exponent");
        Int lhs = am * rd, rhs = rn;
        if (d.exp2 >= 0) lhs <<= d.exp2; else rhs <<= -d.exp2;
        mag_cmp = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
    return ds > 0 ? mag_cmp : -mag_cmp;
}

// Upper-bound addition of nonnegative dyadics.  When the exponent gap is too
// wide to align exactly, the smaller term is absorbed into one ulp of the
// larger; the result only ever grows.
inline Dyadic dyadic_add_ub(Dyadic a, Dyadic b, long max_shift = 1 << 16) {
    if (a.mant < 0 || b.mant < 0) throw std::domain_error("dyadic_add_ub: negative term");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.exp2 < b.exp2) std::swap(a, b);
    long shift = a.exp2 - b.exp2;
    if (shift <= max_shift) {
        Dyadic r{(a.mant << shift) + b.mant, b.exp2};
        r.normalize();
        return r;
    }
    // b < 2^(b.exp2 + bitlen) <= 2^a.exp2 = ulp(a) whenever bitlen(b.mant) <= shift
    if (static_cast<long>(bit_length(b.mant)) <= shift) {
        Dyadic r{a.mant + 1, a.exp2};
        r.normalize();
        return r;
    }
    throw std::domain_error("dyadic_add_ub: unalignable operands");
}

inline Dyadic dyadic_from_rat_ub(const Rat& r);  // defined after Interval

class Interval {
  public:
    explicit Interval(mpfr_prec_t prec = 128) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_nan(lo_);
        mpfr_set_nan(hi_);
    }
    Interval(const Interval& o) {
        mpfr_init2(lo_, mpfr_get_prec(o.lo_));
        mpfr_init2(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval(Interval&& o) noexcept {
        mpfr_init2(lo_, 2);
        mpfr_init2(hi_, 2);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    Interval& operator=(Interval o) noexcept {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t prec() const { return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_)); }

    static Interval from_rat(const Rat& r, mpfr_prec_t prec) {
        Interval v(prec);
        mpz_t n, d;
        mpz_init(n); mpz_init(d);
        mpz_from_int(n, num(r));
        mpz_from_int(d, den(r));
        mpfr_set_z(v.lo_, n, MPFR_RNDD);
        mpfr_div_z(v.lo_, v.lo_, d, MPFR_RNDD);
        mpfr_set_z(v.hi_, n, MPFR_RNDU);
        mpfr_div_z(v.hi_, v.hi_, d, MPFR_RNDU);
        mpz_clear(n); mpz_clear(d);
        return v;
    }

    static Interval from_int(const Int& i, mpfr_prec_t prec) {
        Interval v(prec);
        mpz_t z;
        mpz_init(z);
        mpz_from_int(z, i);
        mpfr_set_z(v.lo_, z, MPFR_RNDD);
        mpfr_set_z(v.hi_, z, MPFR_RNDU);
        mpz_clear(z);
        return v;
    }

    static Interval from_dyadic(const Dyadic& d, mpfr_prec_t prec) {
        Interval v = from_int(d.mant, prec);
        mpfr_mul_2si(v.lo_, v.lo_, d.exp2, MPFR_RNDD);
        mpfr_mul_2si(v.hi_, v.hi_, d.exp2, MPFR_RNDU);
        return v;
    }

    static Interval from_double(double x, mpfr_prec_t prec) {
        Interval v(prec);
        mpfr_set_d(v.lo_, x, MPFR_RNDD);
        mpfr_set_d(v.hi_, x, MPFR_RNDU);
        return v;
    }

    static Interval hull_of(const Interval& a, const Interval& b) {
        Interval v(std::max(a.prec(), b.prec()));
        mpfr_min(v.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(v.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return v;
    }

    static Interval const_pi(mpfr_prec_t prec) {
        Interval v(prec);
        mpfr_const_pi(v.lo_, MPFR_RNDD);
        mpfr_const_pi(v.hi_, MPFR_RNDU);
        return v;
    }

    static Interval const_ln2(mpfr_prec_t prec) {
        Interval v(prec);
        mpfr_const_log2(v.lo_, MPFR_RNDD);
        mpfr_const_log2(v.hi_, MPFR_RNDU);
        return v;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval v(std::max(a.prec(), b.prec()));
        mpfr_add(v.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(v.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return v;
    }

    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval v(std::max(a.prec(), b.prec()));
        mpfr_sub(v.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(v.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return v;
    }

    friend Interval operator-(const Interval& a) {
        Interval v(a.prec());
        mpfr_neg(v.lo_, a.hi_, MPFR_RNDD);
        mpfr_neg(v.hi_, a.lo_, MPFR_RNDU);
        return v;
    }

    friend Interval operator*(const Interval& a, const Interval& b) {
        Interval v(std::max(a.prec(), b.prec()));
        mpfr_t t;
        mpfr_init2(t, v.prec());
        const mpfr_srcptr as[2] = {a.lo_, a.hi_};
        const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
        bool first = true;
        for (auto x : as)
            for (auto y : bs) {
                mpfr_mul(t, x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t, v.lo_) < 0) mpfr_set(v.lo_, t, MPFR_RNDD);
                mpfr_mul(t, x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t, v.hi_) > 0) mpfr_set(v.hi_, t, MPFR_RNDU);
                first = false;
            }
        mpfr_clear(t);
        return v;
    }

    friend Interval operator/(const Interval& a, const Interval& b) {
        if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0)
            throw std::domain_error("Interval division by interval containing zero");
        Interval v(std::max(a.prec(), b.prec()));
        mpfr_t t;
        mpfr_init2(t, v.prec());
        const mpfr_srcptr as[2] = {a.lo_, a.hi_};
        const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
        bool first = true;
        for (auto x : as)
            for (auto y : bs) {
                mpfr_div(t, x, y, MPFR_RNDD);
                if (first || mpfr_cmp(t, v.lo_) < 0) mpfr_set(v.lo_, t, MPFR_RNDD);
                mpfr_div(t, x, y, MPFR_RNDU);
                if (first || mpfr_cmp(t, v.hi_) > 0) mpfr_set(v.hi_, t, MPFR_RNDU);
                first = false;
            }
        mpfr_clear(t);
        return v;
    }

    Interval exp() const {
        Interval v(prec());
        mpfr_exp(v.lo_, lo_, MPFR_RNDD);
        mpfr_exp(v.hi_, hi_, MPFR_RNDU);
        return v;
    }

    Interval log() const {
        if (mpfr_sgn(lo_) <= 0) throw std::domain_error("Interval::log of nonpositive");
        Interval v(prec());
        mpfr_log(v.lo_, lo_, MPFR_RNDD);
        mpfr_log(v.hi_, hi_, MPFR_RNDU);
        return v;
    }

    Interval abs() const {
        Interval v(prec());
        if (mpfr_sgn(lo_) >= 0) return *this;
        if (mpfr_sgn(hi_) <= 0) return -*this;
        mpfr_set_zero(v.lo_, 1);
        mpfr_neg(v.hi_, lo_, MPFR_RNDU);
        mpfr_t t;
        mpfr_init2(t, prec());
        mpfr_set(t, hi_, MPFR_RNDU);
        mpfr_max(v.hi_, v.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return v;
    }

    // base must be positive for negative exponents; monotone endpoint map.
    Interval pow_int(const Int& e) const {
        Interval v(prec());
        mpz_t ez;
        mpz_init(ez);
        mpz_from_int(ez, e);
        if (e >= 0) {
            if (mpfr_sgn(lo_) < 0) throw std::domain_error("Interval::pow_int of negative base");
            mpfr_pow_z(v.lo_, lo_, ez, MPFR_RNDD);
            mpfr_pow_z(v.hi_, hi_, ez, MPFR_RNDU);
        } else {
            if (mpfr_sgn(lo_) <= 0) throw std::domain_error("Interval::pow_int: nonpositive base");
            mpfr_pow_z(v.lo_, hi_, ez, MPFR_RNDD);
            mpfr_pow_z(v.hi_, lo_, ez, MPFR_RNDU);
        }
        mpz_clear(ez);
        return v;
    }

    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    bool contains(const Rat& r) const {
        Interval p = from_rat(r, prec());
        return mpfr_cmp(lo_, p.hi_) <= 0 && mpfr_cmp(hi_, p.lo_) >= 0;
    }

    // -1 / +1 when the intervals are strictly separated, nullopt on overlap.
    std::optional<int> cmp(const Interval& o) const {
        if (mpfr_cmp(hi_, o.lo_) < 0) return -1;
        if (mpfr_cmp(lo_, o.hi_) > 0) return 1;
        return std::nullopt;
    }

    // certified a <= b / a < b (false means "not certified", not ">")
    bool le_definite(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }
    bool lt_definite(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

    friend std::pair<Interval, Interval> sin_cos_2pi(const Rat& phase, mpfr_prec_t prec);

    Dyadic lo_dyadic() const { return endpoint_dyadic(lo_); }
    Dyadic hi_dyadic() const { return endpoint_dyadic(hi_); }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    Dyadic width_ub() const {
        Interval w = *this - *this;  // overshoot; fine for diagnostics
        return w.hi_dyadic();
    }

    // smallest integer >= hi endpoint (sound upper integer bound)
    Int ceil_hi() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(hi_) + 2);
        mpfr_ceil(t, hi_);
        mpz_t z;
        mpz_init(z);
        mpfr_get_z(z, t, MPFR_RNDU);
        Int r = int_from_mpz(z);
        mpz_clear(z);
        mpfr_clear(t);
        return r;
    }

    Int floor_lo() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(lo_) + 2);
        mpfr_floor(t, lo_);
        mpz_t z;
        mpz_init(z);
        mpfr_get_z(z, t, MPFR_RNDD);
        Int r = int_from_mpz(z);
        mpz_clear(z);
        mpfr_clear(t);
        return r;
    }

  private:
    static Dyadic endpoint_dyadic(mpfr_srcptr x) {
        if (mpfr_zero_p(x)) return Dyadic{0, 0};
        if (!mpfr_number_p(x)) throw std::domain_error("Interval: non-finite endpoint");
        mpz_t z;
        mpz_init(z);
        mpfr_exp_t e = mpfr_get_z_2exp(z, x);
        Dyadic d{int_from_mpz(z), static_cast<long>(e)};
        mpz_clear(z);
        d.normalize();
        return d;
    }

    mpfr_t lo_, hi_;
};

inline Dyadic dyadic_from_rat_ub(const Rat& r) {
    if (r < 0) throw std::domain_error("dyadic_from_rat_ub: negative");
    mpfr_prec_t p = static_cast<mpfr_prec_t>(
        std::max<std::size_t>(64, bit_length(num(r)) + 8));
    return Interval::from_rat(r, p).hi_dyadic();
}

// Interval power with rational exponent, base > 0.
inline Interval pow_rat(const Interval& base, const Rat& e, mpfr_prec_t prec) {
    if (den(e) == 1) return base.pow_int(num(e));
    Interval le = base.log() * Interval::from_rat(e, prec);
    return le.exp();
}

// sin/cos of 2*pi*phase for exact rational phase.  Endpoint evaluations plus
// a 1-Lipschitz pad of the argument width keep this sound without argument
// monotonicity analysis; the pad is ~one ulp.
inline std::pair<Interval, Interval> sin_cos_2pi(const Rat& phase, mpfr_prec_t prec) {
    Rat ph = mod1(phase);
    Interval theta = Interval::const_pi(prec) * Interval::from_rat(2 * ph, prec);
    Interval pad = theta - theta;  // symmetric [-(width), +width] envelope

    auto eval = [&](int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
        // evaluate both endpoints with both roundings, pad by 1-Lipschitz width
        Interval r1(prec), r2(prec);
        fn(r1.lo_, theta.lo_, MPFR_RNDD);
        fn(r1.hi_, theta.lo_, MPFR_RNDU);
        fn(r2.lo_, theta.hi_, MPFR_RNDD);
        fn(r2.hi_, theta.hi_, MPFR_RNDU);
        Interval res = Interval::hull_of(r1, r2) + pad;
        // clamp into [-1, 1]
        Interval one = Interval::from_int(1, prec);
        Interval neg_one = -one;
        if (res.lt_definite(neg_one) || one.lt_definite(res))
            throw std::logic_error("sin_cos_2pi: clamp invariant violated");
        return res;
    };
    return {eval(mpfr_sin), eval(mpfr_cos)};
}

}  // namespace attractor
