// Time-averaging windows: nonnegative, integrable phi(t) whose Fourier
// transforms phihat(tau) = int phi(t) e^{-i tau t} dt are continuous and
// compactly supported in [-R, R].
//
// Compact support of phihat is load-bearing twice over.  Analytically it is
// what kills every mode pair whose frequency-gap lands outside [-R, R]
// ("hyperplane separation"): those contributions are exactly zero, not just
// small, and hat() honors that bit-exactly.  Numerically the slow ~1/t^2
// decay of phi makes naive time quadrature hopeless past |t| = T, so this
// module supplies closed-form tail masses and rigorous oscillatory tail
// bounds that the quadrature oracle adds to its error budget instead of
// integrating forever.
//
// Two families:
//   fejer:             phihat(tau) = max(0, 1 - |tau|/R)
//                      phi(t)      = (1 - cos(R t)) / (pi R t^2)
//   triangle-product:  phihat(tau) = (1 - |tau|/R)^2 on [-R, R]
//                      phi(t)      = 2 (1 - sinc(R t)) / (pi R t^2)
// Both have int phi = phihat(0) = 1 and phi >= 0 (the second is the
// autocorrelation profile of the first, so nonnegativity is inherited).

#pragma once

#include <string>

namespace wignerlab {

struct TestWindow {
    enum class Family { fejer, triangle_product };

    Family family = Family::fejer;
    double R = 1.0;       // bandwidth: supp phihat = [-R, R]
    double decay_C = 0.0; // phi(t) <= decay_C / (1 + t^2) for all t

    static TestWindow make_fejer(double R);
    static TestWindow make_triangle_product(double R);
    static TestWindow from_name(const std::string& name, double R);

    std::string family_name() const;

    // Exactly 0.0 (bit-exact) for |tau| >= R.
    double hat(double tau) const;

    // Nonnegative for all t.
    double phi(double t) const;

    // Closed-form window mass beyond the horizon, int_{|t|>T} phi(t) dt,
    // from an asymptotic sine-integral expansion; and a rigorous bound on
    // the expansion remainder (integration by parts with monotone-envelope
    // control, so the bound is a theorem, not a heuristic).
    double tail_mass(double T) const;
    double tail_mass_error_bound(double T) const;

    // Rigorous bound on |int_{|t|>T} e^{i omega t} phi(t) dt| for omega
    // bounded away from the window's own carrier frequencies {0, +-R}.
    // Splitting phi into 1/t^2 and cos(Rt)/t^2 (or sin(Rt)/t^3) components
    // and integrating each complex exponential by parts gives
    // ~ 1/(dist(omega, {0,+-R}) * T^2) decay.
    double oscillatory_tail_bound(double omega, double T) const;
};

} // namespace wignerlab
