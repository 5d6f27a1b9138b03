// Double-double arithmetic, just enough for accurate phase accumulation.
//
// The torus propagator multiplies each Fourier mode by exp(-i*theta) with
// theta = alpha*h*t*|k|^2/2.  In the regimes we exercise, theta can exceed
// 1e9 while the physics cares about theta mod 2*pi to ~1e-12.  Plain double
// arithmetic carries ~1e-16 relative error, i.e. ~1e-7 absolute error at
// theta ~ 1e9: every phase digit that matters would be noise.  Double-double
// (~32 significant digits) keeps the absolute error near 1e-22 and makes the
// reduction mod 2*pi trustworthy.
//
// Standard error-free transforms (Dekker/Knuth); products lean on FMA.

#pragma once

#include <cmath>

namespace wignerlab {

struct DDouble {
    double hi = 0.0;
    double lo = 0.0;
};

namespace detail {

// s = fl(a+b), err = exact remainder (Knuth two-sum, no magnitude assumption).
inline DDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Requires |a| >= |b| (or a == 0).
inline DDouble quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

// p = fl(a*b), err = exact remainder via FMA.
inline DDouble two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

} // namespace detail

inline DDouble dd_from(double x) { return {x, 0.0}; }

inline DDouble dd_add(const DDouble& a, const DDouble& b) {
    DDouble s = detail::two_sum(a.hi, b.hi);
    DDouble t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DDouble dd_neg(const DDouble& a) { return {-a.hi, -a.lo}; }

inline DDouble dd_sub(const DDouble& a, const DDouble& b) { return dd_add(a, dd_neg(b)); }

inline DDouble dd_mul(const DDouble& a, const DDouble& b) {
    DDouble p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DDouble dd_mul(const DDouble& a, double b) {
    DDouble p = detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline double dd_to_double(const DDouble& a) { return a.hi + a.lo; }

// 2*pi to double-double precision (hi is the nearest double to 2*pi).
inline DDouble dd_two_pi() { return {6.283185307179586232e+00, 2.449293598294706414e-16}; }

// Reduce a phase to (approximately) [-pi, pi] and return it as a double.
// The quotient n = round(theta / 2pi) stays well below 2^53 for every phase
// this project produces (|theta| < 1e15), so n itself is exact and the
// subtraction theta - n*(2pi) loses nothing at double-double precision.
inline double dd_mod_two_pi(const DDouble& theta) {
    double n = std::round(dd_to_double(theta) / 6.283185307179586232e+00);
    DDouble r = dd_sub(theta, dd_mul(dd_two_pi(), n));
    return dd_to_double(r);
}

} // namespace wignerlab
