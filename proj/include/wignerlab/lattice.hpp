// Sparse Fourier states on the d-torus.
//
// A state is a finite set of lattice modes with complex amplitudes,
//     u(x) = sum_k uhat(k) e^{ik.x} / (2pi)^{d/2},
// so that the l^2 norm is just the Euclidean norm of the amplitudes.  The
// families this project studies have at most a few dozen modes, but at
// lattice indices as large as ~1e6 after modulation — hence a sparse map
// keyed by exact integer vectors rather than any dense array.  std::map
// keeps iteration order deterministic, which the report writer relies on.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wignerlab {

using cplx = std::complex<double>;
using LatticeVector = std::vector<std::int64_t>;

struct LatticeState {
    int dim = 1;
    std::map<LatticeVector, cplx> modes;
};

// Build a state, checking that every key has the declared dimension.
LatticeState make_state(int dim, const std::vector<std::pair<LatticeVector, cplx>>& modes);

double l2_norm(const LatticeState& state);

// Fourier coefficients of the position density |u|^2:
//   c(l) = (2pi)^{-d} sum_j uhat(j+l) conj(uhat(j)).
// Hermitian by construction: c(-l) = conj(c(l)); c(0) = (2pi)^{-d} ||u||^2.
std::map<LatticeVector, cplx> density_coefficients(const LatticeState& state);

// Translate every mode by `shift` on the lattice (exact, overflow-checked).
LatticeState modulate(const LatticeState& state, const LatticeVector& shift);

// Largest Euclidean norm over the support; 0 for the zero state.
double mode_radius(const LatticeState& state);

// Evaluate u on the equispaced tensor grid x_m = 2pi m / N per axis,
// row-major over axes.  Requires N >= 2*max|k_i|+1 so distinct modes stay
// distinguishable on the grid (no aliasing); violations are rejected.
std::vector<cplx> sample_on_grid(const LatticeState& state, int points_per_axis);

// JSON round-trip: {dim, modes:[{k:[...], re, im}]}.
std::string state_to_json(const LatticeState& state);
LatticeState state_from_json(const std::string& text);

} // namespace wignerlab
