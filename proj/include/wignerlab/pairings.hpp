// Wigner pairings on the torus.
//
// For a sparse state u and a symbol a(x,xi) = sum_l c_l(xi) e^{il.x}, the
// instantaneous pairing is the closed double sum
//     <W_u, a> = sum_{k} sum_{l} uhat(k) conj(uhat(k+l)) c_l(h(k + l/2)),
// i.e. the coefficient attached to the pair (k, j=k+l) is c_{j-k} evaluated
// at the midpoint momentum (h/2)(k+j).  The index orientation, midpoint, and
// normalization are pinned by an independent grid quadrature of the Wigner
// transform (see the test oracles), then frozen in docs/conventions.md.
//
// Time averaging against a window phi turns each pair into a weight
//     phihat(alpha_h h (|j|^2 - |k|^2) / 2)
// on the same sum.  Pairs whose frequency gap lands outside [-R, R] are
// exactly zero — hyperplane separation, implemented bit-exactly, not as
// "small".  Every operation returns a PairingValue carrying a first-class
// error budget (profile truncation, quadrature tails); acceptance tests
// compare against budgets, not magic tolerances.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wignerlab/lattice.hpp"
#include "wignerlab/propagators.hpp"
#include "wignerlab/symbols.hpp"
#include "wignerlab/window.hpp"

namespace wignerlab {

struct PairingValue {
    cplx value{0.0, 0.0};
    double budget = 0.0; // rigorous bound on |value - ideal|, always >= 0
};

// <W_u, a> by the closed double sum; cost O(|support| * |terms|).
PairingValue pairing_instantaneous(const LatticeState& state, const TorusSymbol& symbol, double h);

// int phi(t) <W_{u(t)}, a> dt by the closed phihat-weighted double sum.
PairingValue pairing_time_averaged(const LatticeState& state, const TorusSymbol& symbol, double h,
                                   const TimeScale& scale, const TestWindow& window);

// Independent verification path: composite-Simpson time quadrature of
// phi(t) * pairing_instantaneous(evolve_torus(state, h, scale, t), a, h)
// over [-T, T], with the window mass beyond T restored analytically.
//
// The window decays only like 1/t^2, so truncating at any affordable T and
// ignoring the tail would cost ~1/T — hopeless against 1e-6 budgets.  The
// integrand, however, is a finite trigonometric sum: its DC component sees
// the full window mass (added back as mean * tail_mass, with the mean
// estimated from the same samples), while every oscillating component's
// tail is bounded rigorously by integration by parts.  All of it lands in
// the returned budget, never silently dropped.  The quadrature error itself
// is estimated by Richardson halving of the same sample set (factor-4
// safety).  Frequencies too close to the window carriers {0, +-R} make the
// oscillatory bounds blow up; that appears honestly as a huge budget.
//
// Never evaluates phihat: the closed form under test and this oracle share
// no Fourier-side code.  For speed the dense samples use the factored form
// of the evolved pairing (a trigonometric sum over mode pairs); stratified
// probe nodes re-evaluate the full evolve-then-pair path and cross-check
// the two to ~1e-10, so the propagator is genuinely in the loop.
PairingValue oracle_time_quadrature(const LatticeState& state, const TorusSymbol& symbol, double h,
                                    const TimeScale& scale, const TestWindow& window,
                                    double T, double dt);

// Exact pairing of x-only symbols (constant-in-xi profiles) against the
// position density: int a(x) |u(x)|^2 dx from the density coefficients.
PairingValue pairing_position_density(const LatticeState& state, const TorusSymbol& xsymbol);

// Mass fractions of the spectrum relative to the frequency window [delta, R]:
// |h k|^2 < delta, in [delta, R], > R.  All zero for the zero state.
struct OscillationProfile {
    double below = 0.0;
    double inside = 0.0;
    double above = 0.0;
};

OscillationProfile h_oscillation_profile(const LatticeState& state, double h,
                                         double delta, double R);

namespace pairing_detail {

// One mode pair (k, j = k+l): amplitude uhat(k) conj(uhat(j)) c_{j-k}(mid),
// frequency gap delta = |j|^2 - |k|^2 (exact integer).
struct ModePair {
    cplx amp;
    std::int64_t delta;
};

struct Decomposition {
    std::vector<ModePair> pairs;
    double truncation_budget = 0.0;
};

Decomposition decompose(const LatticeState& state, const TorusSymbol& symbol, double h);

} // namespace pairing_detail

} // namespace wignerlab
