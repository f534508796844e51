#pragma once

// Compactly supported plateau profiles and the saddle coupler they modulate.
// Double-precision evaluation here feeds the numeric integrator; certificates
// never evaluate ramps, they only use the exact region classification at the
// bottom of this header.

#include <cmath>
#include <stdexcept>

#include "attractor/numeric.hpp"

namespace attractor {

// exp(-t^(-1/(alpha-1))) glue seed; alpha >= 2 keeps compact support possible
inline double glue_seed(double t, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("glue_seed: alpha >= 2 required");
    if (t <= 0.0) return 0.0;
    double beta = 1.0 / (alpha - 1);
    return std::exp(-std::pow(t, -beta));
}

inline double glue_seed_deriv(double t, unsigned alpha) {
    if (t <= 0.0) return 0.0;
    double beta = 1.0 / (alpha - 1);
    return glue_seed(t, alpha) * beta * std::pow(t, -beta - 1.0);
}

// monotone 0 -> 1 transition on [0,1]
inline double glue(double t, unsigned alpha) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = glue_seed(t, alpha), b = glue_seed(1.0 - t, alpha);
    return a / (a + b);
}

inline double glue_deriv(double t, unsigned alpha) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double a = glue_seed(t, alpha), b = glue_seed(1.0 - t, alpha);
    double da = glue_seed_deriv(t, alpha), db = glue_seed_deriv(1.0 - t, alpha);
    double denom = (a + b) * (a + b);
    return (da * b + a * db) / denom;
}

// 1-D plateau bump: 1 on [-nu/2, nu/2], 0 off (-nu, nu)
inline double bump1(double u, double nu, unsigned alpha) {
    double au = std::abs(u);
    if (au <= 0.5 * nu) return 1.0;
    if (au >= nu) return 0.0;
    return glue(2.0 * (nu - au) / nu, alpha);
}

inline double bump1_deriv(double u, double nu, unsigned alpha) {
    double au = std::abs(u);
    if (au <= 0.5 * nu || au >= nu) return 0.0;
    double d = glue_deriv(2.0 * (nu - au) / nu, alpha) * (-2.0 / nu);
    return u > 0.0 ? d : -d;
}

// product bump on a plane, centered at (cx, cy)
struct Bump2 {
    double cx, cy, nu;
    unsigned alpha;

    double value(double u, double v) const {
        return bump1(u - cx, nu, alpha) * bump1(v - cy, nu, alpha);
    }
    void grad(double u, double v, double& gu, double& gv) const {
        double fu = bump1(u - cx, nu, alpha), fv = bump1(v - cy, nu, alpha);
        gu = bump1_deriv(u - cx, nu, alpha) * fv;
        gv = fu * bump1_deriv(v - cy, nu, alpha);
    }
};

// saddle xy tapered to compact support: 1 on |u| <= 2R, 0 off |u| < 3R
inline double taper(double u, double R, unsigned alpha) {
    double au = std::abs(u);
    if (au <= 2.0 * R) return 1.0;
    if (au >= 3.0 * R) return 0.0;
    return glue((3.0 * R - au) / R, alpha);
}

inline double taper_deriv(double u, double R, unsigned alpha) {
    double au = std::abs(u);
    if (au <= 2.0 * R || au >= 3.0 * R) return 0.0;
    double d = glue_deriv((3.0 * R - au) / R, alpha) * (-1.0 / R);
    return u > 0.0 ? d : -d;
}

struct Coupler {
    double R;
    unsigned alpha;

    double value(double x, double y) const {
        return x * y * taper(x, R, alpha) * taper(y, R, alpha);
    }
    void grad(double x, double y, double& gx, double& gy) const {
        double tx = taper(x, R, alpha), ty = taper(y, R, alpha);
        double dtx = taper_deriv(x, R, alpha), dty = taper_deriv(y, R, alpha);
        gx = y * (tx + x * dtx) * ty;
        gy = x * tx * (ty + y * dty);
    }
};

// Exact region classification used by certificates: positions are enclosed in
// rational boxes, and a fire is only certified when the whole box sits in the
// plateau (value exactly 1) or clear of the support (value exactly 0).
enum class BumpRegion { plateau, ramp, outside };

inline BumpRegion classify_sup_distance(const Rat& dist, const Rat& nu) {
    if (dist <= nu / 2) return BumpRegion::plateau;
    if (dist >= nu) return BumpRegion::outside;
    return BumpRegion::ramp;
}

}  // namespace attractor
