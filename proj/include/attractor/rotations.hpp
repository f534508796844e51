#pragma once

// Exact circle-rotation arithmetic: phase residues, minimal residues over a
// time range (continued-fraction walk, no enumeration), and rational
// two-sided bounds for the sup-norm displacement of a rotation.

#include "attractor/numeric.hpp"
#include "attractor/real.hpp"

namespace attractor {

// Phase of (x,0) rotated m times by frequency w, as a rational in [0,1).
inline Rat phase_after(const Int& m, const Rat& w) { return mod1(Rat(m) * w); }

// min over tau in [1,T] of min(tau*p mod q, q - tau*p mod q).
// Stern-Brocot walk over one-sided best approximations; exact, O(log q).
inline Int min_scaled_residue(Int p, const Int& q, const Int& T) {
    if (q <= 0) throw std::domain_error("min_scaled_residue: q <= 0");
    if (T < 1) throw std::domain_error("min_scaled_residue: empty range");
    p %= q;
    if (p < 0) p += q;
    if (p == 0) return 0;
    Int a = p, ta = 1;       // best residue approached from 0+
    Int b = q - p, tb = 1;   // best residue approached from q-
    Int best = a < b ? a : b;
    while (a > 0 && b > 0) {
        if (a <= b) {
            Int k_cap = b / a;
            Int k_budget = (T - tb) / ta;
            Int k = k_cap < k_budget ? k_cap : k_budget;
            if (k <= 0) break;
            b -= k * a;
            tb += k * ta;
            Int cur = (b == 0) ? Int(0) : (a < b ? a : b);
            if (cur < best) best = cur;
            if (k == k_budget && k < k_cap) break;  // time budget exhausted
        } else {
            Int k_cap = a / b;
            Int k_budget = (T - ta) / tb;
            Int k = k_cap < k_budget ? k_cap : k_budget;
            if (k <= 0) break;
            a -= k * b;
            ta += k * tb;
            Int cur = (a == 0) ? Int(0) : (a < b ? a : b);
            if (cur < best) best = cur;
            if (k == k_budget && k < k_cap) break;
        }
    }
    return best;
}

// Sup-norm distance from (x,0) to its rotation by angle 2*pi*phi, x > 0,
// phi in [0,1/2]: d = x * max(1 - cos, |sin|).  Two rational lemmas bound it:
//   d >= 4*x*phi   (equality at phi = 1/4 and 1/2)
//   d <= 2*pi*x*phi <= (44/7)*x*phi
inline Rat chord_lower_bound(const Rat& x, const Rat& phi) {
    if (phi < 0 || phi > Rat(1, 2)) throw std::domain_error("chord_lower_bound: phi range");
    return 4 * x * phi;
}

inline Rat arc_upper_bound(const Rat& x, const Rat& phi) {
    if (phi < 0) throw std::domain_error("arc_upper_bound: negative phi");
    return Rat(44, 7) * x * phi;
}

// Minimum over k = 1..q-1 of the sup distance between (x,0) and its rotation
// by 2*pi*k/q.  The distance is increasing in the angle on (0,pi], so the
// minimum sits at k = 1 (and its mirror).  Exact for q <= 4.
inline bool min_return_distance_exact(const Int& q, const Rat& x, Rat& out) {
    if (q == 2) { out = 2 * x; return true; }
    if (q == 3) { out = Rat(3, 2) * x; return true; }
    if (q == 4) { out = x; return true; }
    return false;
}

inline Interval min_return_distance(const Rat& x, const Int& q, mpfr_prec_t prec = 128) {
    if (q <= 1) throw std::domain_error("min_return_distance: q <= 1 has no nonzero residue");
    Rat exact;
    if (min_return_distance_exact(q, x, exact)) return Interval::from_rat(exact, prec);
    // q >= 5: angle < pi/2, where sin dominates 1-cos
    auto [s, c] = sin_cos_2pi(Rat(1, q), prec);
    (void)c;
    return Interval::from_rat(x, prec) * s;
}

// Certified min-return-distance > bound.  Uses the exact chord lemma, which
// is sharp enough for every isolation radius of the form q^-3.
inline bool return_distance_exceeds(const Rat& x, const Int& q, const Rat& bound) {
    if (q <= 1) return true;  // orbit never re-enters: vacuous
    Rat exact;
    if (min_return_distance_exact(q, x, exact)) return exact > bound;
    return chord_lower_bound(x, Rat(1, q)) > bound;
}

// Witness that the rotation orbit {m*w : 0 <= m < den(w2)} comes within the
// per-coordinate half-grid distances of a target point g.  Requires the
// denominator chain den(w3) | den(w1) | den(w2); the three digits of m adjust
// one coordinate each, leaving the finer coordinates' residues fixed.
struct ReachWitness {
    Int m;
    Rat err1, err2, err3;  // distance of m*w_i to g_i on the circle
};

inline ReachWitness reach_witness(const Rat& w1, const Rat& w2, const Rat& w3,
                                  const Rat& g1, const Rat& g2, const Rat& g3) {
    const Int q3 = den(w3), q1 = den(w1), q2 = den(w2);
    if (!divides(q3, q1) || !divides(q1, q2))
        throw std::domain_error("reach_witness: denominator chain broken");
    const Int p3 = num(w3) % q3 < 0 ? num(w3) % q3 + q3 : num(w3) % q3;
    const Int p1 = num(w1) % q1 < 0 ? num(w1) % q1 + q1 : num(w1) % q1;
    const Int p2 = num(w2) % q2 < 0 ? num(w2) % q2 + q2 : num(w2) % q2;

    auto round_res = [](const Rat& target, const Int& modulus) {
        Int r = rat_floor(target * Rat(modulus) + Rat(1, 2)) % modulus;
        if (r < 0) r += modulus;
        return r;
    };

    // coordinate 3: m*w3 mod 1 depends on m mod q3 only
    Int r3 = round_res(g3, q3);
    Int l3 = (r3 * mod_inverse(p3, q3)) % q3;

    // coordinate 1: adding multiples of q3 leaves coordinate 3 fixed
    Int u = q1 / q3;
    Rat base1 = mod1(Rat(l3) * w1);
    Int r1 = round_res(g1 - base1, u);
    Int l1 = (r1 * mod_inverse(p1 % u, u)) % u;

    // coordinate 2: adding multiples of q1 leaves coordinates 1 and 3 fixed
    Int v = q2 / q1;
    Rat base2 = mod1((Rat(l3) + Rat(l1) * Rat(q3)) * w2);
    Int r2 = round_res(g2 - base2, v);
    Int l2 = (r2 * mod_inverse(p2 % v, v)) % v;

    ReachWitness wit;
    wit.m = l3 + l1 * q3 + l2 * q1;
    wit.err1 = dist_to_int(Rat(wit.m) * w1 - g1);
    wit.err2 = dist_to_int(Rat(wit.m) * w2 - g2);
    wit.err3 = dist_to_int(Rat(wit.m) * w3 - g3);
    return wit;
}

}  // namespace attractor
