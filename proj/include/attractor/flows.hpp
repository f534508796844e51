#pragma once

// Numeric time-1 map of one coupling Hamiltonian eps * f(trigger) * g(target)
// on R^6 = three symplectic planes.  Both factors are first integrals of the
// flow, so the map splits exactly into two plane flows with coefficients
// frozen at the initial point; each plane flow is solved in closed form where
// the profiles are constant and by RK4 on the ramps.

#include <array>
#include <cmath>
#include <stdexcept>

#include "attractor/profiles.hpp"

namespace attractor {

using State6 = std::array<long double, 6>;

struct CouplingNum {
    int trigger = 0;  // plane index 0..2
    int target = 1;
    long double cx = 0, cy = 0;  // bump center in the trigger plane
    long double nu = 0.25;
    long double eps = 1.0;  // amplitude of the Hamiltonian
    long double R = 1.0;    // coupler taper radius
    unsigned alpha = 2;
    int rk_steps = 2048;
};

namespace detail {

template <class Field>
inline void rk4_plane(long double& x, long double& y, const Field& field, int steps) {
    const long double h = 1.0L / steps;
    for (int i = 0; i < steps; ++i) {
        long double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
        field(x, y, k1x, k1y);
        field(x + 0.5L * h * k1x, y + 0.5L * h * k1y, k2x, k2y);
        field(x + 0.5L * h * k2x, y + 0.5L * h * k2y, k3x, k3y);
        field(x + h * k3x, y + h * k3y, k4x, k4y);
        x += h / 6.0L * (k1x + 2 * k2x + 2 * k3x + k4x);
        y += h / 6.0L * (k1y + 2 * k2y + 2 * k3y + k4y);
    }
}

template <class Deriv>
inline void rk4_line(long double& x, const Deriv& deriv, int steps) {
    const long double h = 1.0L / steps;
    for (int i = 0; i < steps; ++i) {
        long double k1 = deriv(x);
        long double k2 = deriv(x + 0.5L * h * k1);
        long double k3 = deriv(x + 0.5L * h * k2);
        long double k4 = deriv(x + h * k3);
        x += h / 6.0L * (k1 + 2 * k2 + 2 * k3 + k4);
    }
}

}  // namespace detail

// Time-dir flow (dir = +1 forward, -1 inverse) of the coupling Hamiltonian.
inline void apply_bump(State6& s, const CouplingNum& cp, int dir = +1) {
    if (cp.trigger == cp.target || cp.trigger < 0 || cp.trigger > 2 || cp.target < 0 ||
        cp.target > 2)
        throw std::domain_error("apply_bump: bad plane indices");
    long double u = s[2 * cp.trigger], v = s[2 * cp.trigger + 1];
    long double x = s[2 * cp.target], y = s[2 * cp.target + 1];

    const Bump2 bump{static_cast<double>(cp.cx), static_cast<double>(cp.cy),
                     static_cast<double>(cp.nu), cp.alpha};
    const Coupler coup{static_cast<double>(cp.R), cp.alpha};

    const long double f_val =
        bump1(static_cast<double>(u) - bump.cx, bump.nu, cp.alpha) *
        bump1(static_cast<double>(v) - bump.cy, bump.nu, cp.alpha);
    // outside the closed bump support the Hamiltonian vanishes to all orders
    if (f_val == 0.0L) {
        long double du = std::fabs(u - cp.cx), dv = std::fabs(v - cp.cy);
        if (du >= cp.nu || dv >= cp.nu) return;
    }
    const long double g_val = coup.value(static_cast<double>(x), static_cast<double>(y));

    // target plane: coefficient frozen at f(initial trigger)
    if (f_val != 0.0L) {
        const long double cH = cp.eps * f_val * dir;
        if (y == 0.0L) {
            // the horizontal axis is invariant; stay on it bit-exactly
            long double xs = x * std::exp(-cH);
            if (std::fabs(x) <= 2.0L * cp.R && std::fabs(xs) <= 2.0L * cp.R) {
                x = xs;  // |x(t)| is monotone, so the whole path is flat
            } else {
                detail::rk4_line(
                    x,
                    [&](long double xx) {
                        return -cH * xx * taper(static_cast<double>(xx), coup.R, cp.alpha);
                    },
                    cp.rk_steps);
            }
        } else {
            long double xs = x * std::exp(-cH), ys = y * std::exp(cH);
            bool pre_in = std::fabs(x) <= 2.0L * cp.R && std::fabs(y) <= 2.0L * cp.R;
            bool post_in = std::fabs(xs) <= 2.0L * cp.R && std::fabs(ys) <= 2.0L * cp.R;
            if (pre_in && post_in) {
                // exact saddle flow; the whole trajectory stays in the flat region
                x = xs;
                y = ys;
            } else {
                detail::rk4_plane(
                    x, y,
                    [&](long double xx, long double yy, long double& dx, long double& dy) {
                        double gx, gy;
                        coup.grad(static_cast<double>(xx), static_cast<double>(yy), gx, gy);
                        dx = -cH * gy;
                        dy = cH * gx;
                    },
                    cp.rk_steps);
            }
        }
    }

    // trigger plane: coefficient frozen at g(initial target)
    if (g_val != 0.0L) {
        const long double cF = cp.eps * g_val * dir;
        long double du = std::fabs(u - cp.cx), dv = std::fabs(v - cp.cy);
        bool plateau = du <= 0.5L * cp.nu && dv <= 0.5L * cp.nu;
        bool outside = du >= cp.nu || dv >= cp.nu;
        if (!plateau && !outside) {
            detail::rk4_plane(
                u, v,
                [&](long double uu, long double vv, long double& duu, long double& dvv) {
                    double fu, fv;
                    bump.grad(static_cast<double>(uu), static_cast<double>(vv), fu, fv);
                    duu = -cF * fv;
                    dvv = cF * fu;
                },
                cp.rk_steps);
        }
        // on the closed plateau and outside the closed support the field
        // vanishes identically: the trigger point does not move
    }

    s[2 * cp.trigger] = u;
    s[2 * cp.trigger + 1] = v;
    s[2 * cp.target] = x;
    s[2 * cp.target + 1] = y;
}

struct RotationNum {
    std::array<long double, 3> c{}, s{};
};

inline RotationNum rotation_from(const std::array<Rat, 3>& w) {
    RotationNum r;
    for (int i = 0; i < 3; ++i) {
        long double th = 2.0L * 3.14159265358979323846264338327950288L *
                         static_cast<long double>(rat_to_double(mod1(w[i])));
        r.c[i] = std::cos(th);
        r.s[i] = std::sin(th);
    }
    return r;
}

inline void apply_rotation(State6& st, const RotationNum& r, int dir = +1) {
    for (int i = 0; i < 3; ++i) {
        long double x = st[2 * i], y = st[2 * i + 1];
        long double c = r.c[i], s = dir >= 0 ? r.s[i] : -r.s[i];
        st[2 * i] = c * x - s * y;
        st[2 * i + 1] = s * x + c * y;
    }
}

// determinant by Gaussian elimination with partial pivoting
inline long double det6(std::array<std::array<long double, 6>, 6> m) {
    long double det = 1.0L;
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0L) return 0.0L;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < 6; ++r) {
            long double f = m[r][col] / m[col][col];
            for (int c = col; c < 6; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

// central-difference Jacobian determinant of a map on R^6
template <class MapFn>
inline long double jacobian_det_fd(const MapFn& map, const State6& s0, long double h) {
    std::array<std::array<long double, 6>, 6> J{};
    for (int j = 0; j < 6; ++j) {
        State6 sp = s0, sm = s0;
        sp[j] += h;
        sm[j] -= h;
        State6 fp = sp, fm = sm;
        map(fp);
        map(fm);
        for (int i = 0; i < 6; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0L * h);
    }
    return det6(J);
}

}  // namespace attractor
