#pragma once

#include <stdexcept>
#include <utility>

#include "real.hpp"

namespace attractor {

// Planar transfer algebra.  Between fires a coordinate plane evolves by an
// exact rotation (rational revolution fraction); a plateau-certified fire is
// the exact saddle diag(rho, 1/rho).  Every matrix built here encloses a true
// matrix of determinant exactly one, so inverses come from the adjugate with
// no interval division.

struct Vec2 {
    Interval x, y;
};

struct Mat2 {
    Interval a, b, c, d;  // row-major [a b; c d]
};

inline Vec2 vec2_zero(mpfr_prec_t prec) {
    return {Interval::from_int(0, prec), Interval::from_int(0, prec)};
}

inline Vec2 vec2_from_rat(const Rat& x, const Rat& y, mpfr_prec_t prec) {
    return {Interval::from_rat(x, prec), Interval::from_rat(y, prec)};
}

inline Mat2 mat2_identity(mpfr_prec_t prec) {
    return {Interval::from_int(1, prec), Interval::from_int(0, prec),
            Interval::from_int(0, prec), Interval::from_int(1, prec)};
}

// counterclockwise rotation by 2*pi*rev, matching the step map's convention
inline Mat2 rotation_rev(const Rat& rev, mpfr_prec_t prec) {
    auto [s, c] = sin_cos_2pi(rev, prec);
    return {c, -s, s, c};
}

// fire saddle: contracts the first coordinate, expands the second
inline Mat2 saddle(const Rat& rho, mpfr_prec_t prec) {
    if (!(rho > 0)) throw std::domain_error("saddle: rate must be positive");
    return {Interval::from_rat(rho, prec), Interval::from_int(0, prec),
            Interval::from_int(0, prec), Interval::from_rat(Rat(1) / rho, prec)};
}

inline Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

inline Vec2 operator+(const Vec2& u, const Vec2& v) { return {u.x + v.x, u.y + v.y}; }
inline Vec2 operator-(const Vec2& u, const Vec2& v) { return {u.x - v.x, u.y - v.y}; }
inline Vec2 operator*(const Interval& s, const Vec2& v) { return {s * v.x, s * v.y}; }

inline Interval det2(const Mat2& m) { return m.a * m.d - m.b * m.c; }

inline Mat2 adjugate(const Mat2& m) { return {m.d, -m.b, -m.c, m.a}; }

// m^e by binary powering; e >= 0
inline Mat2 mat2_pow(const Mat2& m, Int e, mpfr_prec_t prec) {
    if (e < 0) throw std::domain_error("mat2_pow: negative exponent");
    Mat2 acc = mat2_identity(prec);
    Mat2 base = m;
    while (e > 0) {
        if ((e & 1) != 0) acc = acc * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return acc;
}

// solve m * v = rhs when the true matrix enclosed by m has unit determinant
inline Vec2 solve_unit(const Mat2& m, const Vec2& rhs) { return adjugate(m) * rhs; }

// largest endpoint magnitude across entries, as an upper-bound dyadic
inline Dyadic mat2_norm_ub(const Mat2& m) {
    Interval h = Interval::hull_of(Interval::hull_of(m.a.abs(), m.b.abs()),
                                   Interval::hull_of(m.c.abs(), m.d.abs()));
    return h.hi_dyadic();
}

inline Dyadic vec2_norm_ub(const Vec2& v) {
    return Interval::hull_of(v.x.abs(), v.y.abs()).hi_dyadic();
}

inline Dyadic vec2_width_ub(const Vec2& v) {
    return dyadic_add_ub(v.x.width_ub(), v.y.width_ub());
}

}  // namespace attractor
