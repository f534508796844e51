#pragma once

// Exact multivariate rational polynomials with a coefficient-l1 majorant in
// place of the sup norm.  The majorant is submultiplicative, so the weighted
// derivative ledger built on it obeys the same algebra and derivative-loss
// inequalities as the analytic original, while staying exactly computable.
// This is the independent oracle the budget inequalities are tested against.

#include <map>
#include <vector>

#include "attractor/numeric.hpp"

namespace attractor {

using Monomial = std::vector<unsigned>;

struct MultiPoly {
    unsigned nvars = 0;
    std::map<Monomial, Rat> terms;  // zero coefficients never stored

    static MultiPoly zero(unsigned nvars) { return MultiPoly{nvars, {}}; }

    static MultiPoly constant(unsigned nvars, const Rat& c) {
        MultiPoly p{nvars, {}};
        if (c != 0) p.terms[Monomial(nvars, 0)] = c;
        return p;
    }

    static MultiPoly variable(unsigned nvars, unsigned i) {
        MultiPoly p{nvars, {}};
        Monomial m(nvars, 0);
        m[i] = 1;
        p.terms[m] = 1;
        return p;
    }

    void add_term(const Monomial& m, const Rat& c) {
        if (m.size() != nvars) throw std::invalid_argument("MultiPoly: arity mismatch");
        Rat& slot = terms[m];
        slot += c;
        if (slot == 0) terms.erase(m);
    }

    bool is_zero() const { return terms.empty(); }

    unsigned max_degree(unsigned var) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms) d = std::max(d, m[var]);
        return d;
    }

    Rat majorant() const {
        Rat s = 0;
        for (const auto& [m, c] : terms) s += rat_abs(c);
        return s;
    }

    MultiPoly derivative(unsigned var) const {
        MultiPoly d{nvars, {}};
        for (const auto& [m, c] : terms) {
            if (m[var] == 0) continue;
            Monomial mm = m;
            mm[var] -= 1;
            d.add_term(mm, c * Rat(m[var]));
        }
        return d;
    }
};

inline MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MultiPoly+: arity mismatch");
    MultiPoly r = a;
    for (const auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
}

inline MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MultiPoly-: arity mismatch");
    MultiPoly r = a;
    for (const auto& [m, c] : b.terms) r.add_term(m, -c);
    return r;
}

inline MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MultiPoly*: arity mismatch");
    MultiPoly r{a.nvars, {}};
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Monomial m(a.nvars);
            for (unsigned i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

namespace detail {

// all iterated derivatives, indexed by derivative multi-index
inline void for_each_derivative(const MultiPoly& p, unsigned var, Monomial& idx,
                                const auto& fn) {
    if (var == p.nvars) {
        fn(idx, p);
        return;
    }
    MultiPoly cur = p;
    unsigned k = 0;
    while (true) {
        idx[var] = k;
        for_each_derivative(cur, var + 1, idx, fn);
        if (cur.is_zero()) break;
        cur = cur.derivative(var);
        ++k;
    }
    idx[var] = 0;
}

}  // namespace detail

// Weighted derivative ledger: sum over all derivative multi-indices l of
//   L^(|l|*alpha) / (l!)^alpha * majorant(d^l p),  alpha a positive integer.
inline Rat gevrey_norm(const MultiPoly& p, unsigned alpha, const Rat& L) {
    if (alpha == 0) throw std::domain_error("gevrey_norm: alpha >= 1 required");
    if (L <= 0) throw std::domain_error("gevrey_norm: L > 0 required");
    Rat total = 0;
    Monomial idx(p.nvars, 0);
    detail::for_each_derivative(p, 0, idx, [&](const Monomial& l, const MultiPoly& d) {
        if (d.is_zero()) return;
        unsigned order = 0;
        Int lfact = 1;
        for (unsigned v = 0; v < p.nvars; ++v) {
            order += l[v];
            lfact *= factorial(l[v]);
        }
        Rat weight = rat_pow(L, static_cast<long>(order) * alpha) /
                     Rat(int_pow(lfact, alpha));
        total += weight * d.majorant();
    });
    return total;
}

// Same ledger without the order-zero term.
inline Rat gevrey_nstar(const MultiPoly& p, unsigned alpha, const Rat& L) {
    return gevrey_norm(p, alpha, L) - p.majorant();
}

// Sum over |m| = order of the full ledger norm of d^m p at the smaller radius.
inline Rat derivative_layer_norm(const MultiPoly& p, unsigned order, unsigned alpha,
                                 const Rat& L) {
    Rat total = 0;
    Monomial idx(p.nvars, 0);
    detail::for_each_derivative(p, 0, idx, [&](const Monomial& l, const MultiPoly& d) {
        unsigned o = 0;
        for (unsigned v = 0; v < p.nvars; ++v) o += l[v];
        if (o != order || d.is_zero()) return;
        total += gevrey_norm(d, alpha, L);
    });
    return total;
}

}  // namespace attractor
