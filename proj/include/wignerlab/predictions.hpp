// Closed-form limits the experiments converge to.
//
// Each prediction is a functional on symbols (never a materialized measure):
//  - mu0 of a modulated profile family: int a(x, xi0) |rho(x)|^2 dx.
//  - mu1: the time-averaged limit of the plane-wave family — a double sum
//    over mode pairs of rho restricted to resonant terms l.xi0 = 0, each
//    weighted by the window hat at half the frequency gap.
//  - mu2: the same limit for the resonant companion family — position-uniform,
//    so only the l = 0 term survives: (int phi) |rho|^2 c_0(xi0).
//  - Zoll circle / non-resonant torus averages: the geodesic average of the
//    symbol at (x0, xi0), which is c_0(xi0) in both closed-geodesic (d=1)
//    and equidistributing (non-resonant) regimes.
//  - Euclidean dispersion: identically zero.  A finite-h companion
//    computation of the actual time-averaged packet pairing quantifies the
//    approach to that zero.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wignerlab/exact.hpp"
#include "wignerlab/lattice.hpp"
#include "wignerlab/pairings.hpp"
#include "wignerlab/propagators.hpp"
#include "wignerlab/symbols.hpp"
#include "wignerlab/window.hpp"

namespace wignerlab {

// int a(x, xi0) |rho(x)|^2 dx = sum_l c_l(xi0) (2pi)^d dens_rho(-l).
cplx predict_mu0_planewave(const LatticeState& rho, const std::vector<double>& xi0,
                           const TorusSymbol& symbol);

// sum over terms with l.xi0 == 0 of
//   sum_k rhohat(k) conj(rhohat(k+l)) c_l(xi0) hat((|k+l|^2 - |k|^2)/2).
cplx predict_mu1(const LatticeState& rho, const std::vector<std::int64_t>& xi0,
                 const TorusSymbol& symbol, const TestWindow& window);

// (int phi) ||rho||^2 c_0(xi0); every l != 0 term contributes zero.
cplx predict_mu2(const LatticeState& rho, const std::vector<double>& xi0,
                 const TorusSymbol& symbol, const TestWindow& window);

// Circle average: evaluate(average_along(symbol, xi0), x0, xi0) = c_0(xi0).
// Requires d = 1 and xi0 != 0 (limits charging {xi = 0} are out of scope).
cplx predict_zoll(double x0, const QuadraticSurd& xi0, const TorusSymbol& symbol);

// Torus average along a non-resonant direction: c_0(xi0); rejects resonant
// xi0 (no closed formula exists there — that regime is the mu1/mu2 pair).
cplx predict_torus_average(const std::vector<double>& x0, const std::vector<QuadraticSurd>& xi0,
                           const TorusSymbol& symbol);

// The Euclidean time-averaged limit: zero for every symbol and window,
// provided the packet carrier is nonzero.
double predict_dispersion(const std::vector<double>& xi0);

// Finite-h companion to predict_dispersion: the actual time-averaged Wigner
// pairing of a free Gaussian packet (time scale 1/h) against the separable
// symbol  prod_i B((x_i - x0_i) sqrt(d) / x_halfwidth)  — supported in
// the ball |x - x0| <= x_halfwidth — times a gaussian xi-profile centered
// at the packet carrier with width xi_scale.  The per-axis profile is
// B(u) = u^(2 ring_power) bump(u): ring_power = 0 is the plain bump peaked
// at the packet center; ring_power >= 1 vanishes at the center, which flips
// the sign of the finite-h width correction (the packet then sits in a
// convex valley of the symbol instead of on a concave peak).  Computed by
// per-axis Gauss-Hermite x Simpson quadrature in sheared variables; the
// budget covers the truncated |t| tail and the quadrature estimate.
PairingValue dispersion_time_average(const GaussianPacket& packet, const TestWindow& window,
                                     double x_halfwidth, double xi_scale,
                                     double tau_max = 24.0, int tau_points = 4801,
                                     int ring_power = 0);

namespace quad_detail {

// Gauss-Hermite nodes/weights for int e^{-u^2} f(u) du, scan+Newton built,
// self-checked against sum w = sqrt(pi).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace quad_detail

} // namespace wignerlab
