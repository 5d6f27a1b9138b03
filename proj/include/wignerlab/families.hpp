// Semiclassical families on the torus.
//
// Three generators drive the experiments: plane-wave modulated profiles
// uhat(k) = rhohat(k - lambda_n^2 xi0), their resonant companions with an
// extra lambda_n k_n shift (k_n rational convergents of an irrational
// direction), and Gaussian wave packets concentrated at one phase-space
// point.  The first two share a semiclassical limit at t = 0 and part ways
// only after time averaging — that separation is the headline experiment.
//
// The ladder arithmetic (continued-fraction convergents, LCM denominators,
// lambda_n = q_n lambda_{n-1}, h_n = 1/lambda_n^2) is exact integer work:
// every shift lambda_n^2 xi0 + lambda_n k_n must land on the lattice
// exactly, and the ladder refuses depths whose lambda_n^2 would leave the
// representable range rather than rounding.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wignerlab/exact.hpp"
#include "wignerlab/lattice.hpp"

namespace wignerlab {

// Per-coordinate continued-fraction convergents of a non-resonant vector of
// quadratic surds.  Rational coordinates have terminating expansions; their
// convergent chain saturates at the exact value.
struct RationalApproxStream {
    std::vector<QuadraticSurd> target;
    std::vector<std::vector<Rational>> chains; // chains[coord][depth-1]

    int depth() const { return chains.empty() ? 0 : static_cast<int>(chains.front().size()); }

    // Convergent vector k_n (1-based n), each coordinate in lowest terms.
    std::vector<Rational> convergent(int n) const;

    static RationalApproxStream make(const std::vector<QuadraticSurd>& theta0, int depth);
};

// q_n = lcm of the (reduced) coordinate denominators of k_n;
// lambda_1 = q_1, lambda_n = q_n lambda_{n-1}; h_n = 1/lambda_n^2.
// Construction stops at the last depth whose lambda_n^2 (and shift
// magnitudes) stay inside exact int64 range; `capped` records a refusal.
struct LcmLadder {
    std::vector<std::int64_t> q;
    std::vector<std::int64_t> lambda;
    std::vector<double> h;
    std::vector<std::vector<Rational>> k; // the convergents actually used
    bool capped = false;
    int requested = 0;

    int depth() const { return static_cast<int>(lambda.size()); }

    static LcmLadder build(const RationalApproxStream& stream, int requested_depth);
};

// (h_n, state) with uhat(k) = rhohat(k - lambda_n^2 xi0).
std::pair<double, LatticeState> plane_wave_family(const LatticeState& rho,
                                                  const std::vector<std::int64_t>& xi0,
                                                  const LcmLadder& ladder, int n);

// (h_n, state) with uhat(k) = rhohat(k - lambda_n^2 xi0 - lambda_n k_n).
std::pair<double, LatticeState> resonant_family(const LatticeState& rho,
                                                const std::vector<std::int64_t>& xi0,
                                                const RationalApproxStream& stream,
                                                const LcmLadder& ladder, int n);

// Gaussian coherent state: uhat(k) = c exp(-|hk - xi0|^2 / (2h)) e^{-ik.x0},
// truncated at |hk - xi0| <= 8 sqrt(h), normalized to unit l2 norm.
LatticeState wave_packet_torus(const std::vector<double>& x0, const std::vector<double>& xi0,
                               double h);

// Single unit mode; evolved pairings are time independent.
LatticeState eigenmode(const LatticeVector& k0);

// Config-level family description consumed by the scenario runner.
enum class FamilyKind { plane_wave, resonant, wave_packet, eigenmode };

struct SemiclassicalFamily {
    FamilyKind kind = FamilyKind::eigenmode;
    LatticeState rho;                 // plane-wave / resonant profile
    std::vector<std::int64_t> xi0_int; // plane-wave / resonant carrier
    std::vector<double> x0;           // wave-packet center
    std::vector<double> xi0_real;     // wave-packet carrier
    std::vector<double> h_grid;       // wave-packet / eigenmode h values
    RationalApproxStream stream;      // resonant direction data
    LcmLadder ladder;                 // plane-wave / resonant ladder
    LatticeVector k0;                 // eigenmode index
    int n_max = 1;

    // Emit member n (1-based): the pair (h_n, state).
    std::pair<double, LatticeState> emit(int n) const;
};

} // namespace wignerlab
