#pragma once

// Exact integer/rational layer. Everything downstream that claims "exact"
// bottoms out in these types.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace attractor {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int int_pow(Int base, unsigned long e) {
    Int acc = 1;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: 0^negative");
        Rat p = rat_pow(base, -e);
        return Rat(den(p), num(p));
    }
    Rat acc = 1, b = base;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

inline bool divides(const Int& a, const Int& b) {
    if (a == 0) return b == 0;
    return b % a == 0;
}

inline Int floor_div(const Int& a, const Int& b) {
    if (b == 0) throw std::domain_error("floor_div: zero divisor");
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int rat_floor(const Rat& r) { return floor_div(num(r), den(r)); }
inline Int rat_ceil(const Rat& r) { return ceil_div(num(r), den(r)); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Fractional part in [0,1); the phase of a point on a circle.
inline Rat mod1(const Rat& r) {
    Rat f = r - Rat(rat_floor(r));
    if (f < 0) f += 1;  // unreachable, kept as guard
    return f;
}

// Distance from r to the nearest integer, in [0, 1/2].
inline Rat dist_to_int(const Rat& r) {
    Rat f = mod1(r);
    return f <= Rat(1, 2) ? f : Rat(1) - f;
}

inline Int gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

inline bool coprime(const Int& a, const Int& b) { return gcd(a, b) == 1; }

// Extended gcd: returns g = gcd(a,b) and x with a*x == g (mod b), b > 0.
inline Int mod_inverse(Int a, const Int& m) {
    if (m <= 0) throw std::domain_error("mod_inverse: modulus <= 0");
    a %= m;
    if (a < 0) a += m;
    Int r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: not invertible");
    if (s0 < 0) s0 += m;
    return s0;
}

inline std::size_t bit_length(const Int& v) {
    if (v == 0) return 0;
    return boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

inline std::string int_str(const Int& v) { return v.str(); }

inline std::string rat_str(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_int: empty string");
    return Int(s);
}

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int n = parse_int(s.substr(0, slash));
    Int d = parse_int(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("parse_rat: zero denominator");
    return Rat(n, d);
}

inline double rat_to_double(const Rat& r) { return static_cast<double>(r); }

// Smallest multiple of step that is >= lo. step > 0.
inline Int round_up_multiple(const Int& lo, const Int& step) {
    if (step <= 0) throw std::domain_error("round_up_multiple: step <= 0");
    return ceil_div(lo, step) * step;
}

}  // namespace attractor
