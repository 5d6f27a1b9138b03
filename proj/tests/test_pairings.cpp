// Pairing tests.  The heart of this file is a set of reference values frozen
// from an independent quadrature of the Wigner transform written in another
// language: the closed double sum must reproduce them to near machine
// precision, and the in-repo grid oracle must reproduce them to its own
// advertised accuracy.  That pins the index orientation (which factor is
// conjugated), the midpoint momentum, and the overall normalization -- the
// three places a Wigner implementation can silently go wrong while still
// passing symmetry tests.
//
// On top of the frozen anchors: reality, sesquilinear structure, the exact
// derivative identity against the momentum bracket, bit-exact hyperplane
// kills in the time-averaged sum, agreement between the phihat-weighted
// closed form and the brute-force time quadrature within their own error
// budgets, and the spectral mass profile.

#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wignerlab/lattice.hpp"
#include "wignerlab/pairings.hpp"
#include "wignerlab/propagators.hpp"
#include "wignerlab/symbols.hpp"
#include "wignerlab/window.hpp"
#include "oracles.hpp"

using namespace wignerlab;
using namespace oracles;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Reference instance A: two modes, one off-diagonal term.
LatticeState state_a() {
    return make_state(1, {{{0}, {0.8, 0.0}}, {{2}, {0.0, 0.6}}});
}

// Reference instance C: three modes, three terms, mixed phases.
LatticeState state_c() {
    return make_state(1, {{{-1}, {0.5, 0.0}}, {{0}, {0.6, 0.0}}, {{2}, {0.4, 0.3}}});
}

TorusSymbol symbol_c() {
    return make_symbol(1, {
        {{1}, XiProfile::gaussian({0.1}, 0.6, {0.7, 0.2})},
        {{-1}, XiProfile::gaussian({0.1}, 0.6, {0.7, -0.2})},
        {{3}, XiProfile::gaussian({-0.2}, 0.5, {0.25, 0.0})},
    });
}

} // namespace

// ---------------------------------------------------------------------------
// Frozen cross-language anchors
// ---------------------------------------------------------------------------

TEST_CASE("the closed pairing matches values frozen from an external quadrature") {
    // Orientation: with uhat(0) = 0.8, uhat(2) = 0.6i and a single l = 2
    // term, the value is uhat(0) * conj(uhat(2)) * c(mid) -- pure negative
    // imaginary.  Flipping the conjugation flips the sign.
    auto a1 = make_symbol(1, {{{2}, XiProfile::gaussian({0.3}, 0.35, {1.0, 0.0})}});
    auto p1 = pairing_instantaneous(state_a(), a1, 0.25);
    CHECK(std::abs(p1.value - cplx{0.0, -4.751269456217922e-01}) < 1e-13);

    // Midpoint: the same pair evaluated with a profile centered at 0 and
    // width 0.25 must see the midpoint momentum h(k + l/2) = 0.25, one
    // full width out, giving exactly the factor e^{-1/2}.
    auto a2 = make_symbol(1, {{{2}, XiProfile::gaussian({0.0}, 0.25, {1.0, 0.0})}});
    auto p2 = pairing_instantaneous(state_a(), a2, 0.25);
    CHECK(std::abs(p2.value - cplx{0.0, -2.911347166620640e-01}) < 1e-13);
    CHECK(p2.value.imag() == doctest::Approx(-0.48 * std::exp(-0.5)).epsilon(1e-14));

    // A mixed-phase instance exercising several terms at once.
    auto p3 = pairing_instantaneous(state_c(), symbol_c(), 0.2);
    CHECK(std::abs(p3.value - cplx{4.390664875114050e-01, -3.132263292792270e-02}) < 1e-13);

    // Diagonal: a single mode k = 4 at h = 0.25 sits at momentum hk = 1;
    // a unit gaussian centered there reads off exactly the mass.
    auto u4 = make_state(1, {{{4}, {1.0, 0.0}}});
    auto a4 = make_symbol(1, {{{0}, XiProfile::gaussian({1.0}, kInvSqrt2, {1.0, 0.0})}});
    CHECK(std::abs(pairing_instantaneous(u4, a4, 0.25).value - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("the grid quadrature oracle reproduces the same frozen values") {
    auto a1 = make_symbol(1, {{{2}, XiProfile::gaussian({0.3}, 0.35, {1.0, 0.0})}});
    auto g1 = grid_wigner_pairing(state_a(), a1, 0.25);
    CHECK(std::abs(g1 - cplx{0.0, -4.751269456217922e-01}) < 1e-8);

    auto g3 = grid_wigner_pairing(state_c(), symbol_c(), 0.2);
    CHECK(std::abs(g3 - cplx{4.390664875114050e-01, -3.132263292792270e-02}) < 1e-8);

    auto u4 = make_state(1, {{{4}, {1.0, 0.0}}});
    auto a4 = make_symbol(1, {{{0}, XiProfile::gaussian({1.0}, kInvSqrt2, {1.0, 0.0})}});
    CHECK(std::abs(grid_wigner_pairing(u4, a4, 0.25) - cplx{1.0, 0.0}) < 1e-8);
}

TEST_CASE("closed pairing and grid oracle agree on random gaussian instances") {
    auto gen = rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        auto u = random_state(gen, 1, 5, 3);
        auto a = random_real_symbol(gen, 1, 2, 2);
        const double h = trial % 2 == 0 ? 0.25 : 0.1;
        auto closed = pairing_instantaneous(u, a, h);
        auto grid = grid_wigner_pairing(u, a, h);
        CHECK(std::abs(closed.value - grid) < 1e-6 + closed.budget);
    }
}

// ---------------------------------------------------------------------------
// Structure of the instantaneous pairing
// ---------------------------------------------------------------------------

TEST_CASE("a cross term against a wide flat profile reads off the mode product") {
    // uhat(0) = uhat(2) = 1/sqrt(2); the l = 2 coefficient is 1 on a ball
    // that swallows the midpoint, so the pairing is exactly 1/2.
    auto u = make_state(1, {{{0}, {kInvSqrt2, 0.0}}, {{2}, {kInvSqrt2, 0.0}}});
    auto a = make_symbol(1, {{{2}, XiProfile::constant_on_ball({0.0}, 4.0, {1.0, 0.0})}});
    auto p = pairing_instantaneous(u, a, 0.25);
    CHECK(p.value.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(p.value.imag()) < 1e-15);
}

TEST_CASE("pairing a reality-flagged symbol gives a real value") {
    auto gen = rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        int dim = 1 + trial % 2;
        auto u = random_state(gen, dim, 6, 3);
        auto a = random_real_symbol(gen, dim, 3, 3);
        REQUIRE(a.reality);
        auto p = pairing_instantaneous(u, a, 0.2);
        CHECK(std::abs(p.value.imag()) < 1e-13);
    }
}

TEST_CASE("the pairing is invariant under a global phase and scales like mass") {
    auto gen = rng(9);
    auto u = random_state(gen, 2, 6, 3);
    auto a = random_real_symbol(gen, 2, 3, 2);
    auto base = pairing_instantaneous(u, a, 0.15).value;

    LatticeState rotated = u, doubled = u;
    const cplx phase = std::polar(1.0, 0.9371);
    for (auto& [k, amp] : rotated.modes) amp *= phase;
    for (auto& [k, amp] : doubled.modes) amp *= 2.0;
    CHECK(std::abs(pairing_instantaneous(rotated, a, 0.15).value - base) < 1e-14);
    CHECK(std::abs(pairing_instantaneous(doubled, a, 0.15).value - 4.0 * base) < 1e-13);
}

TEST_CASE("pairing validates dimensions and h") {
    auto u = make_state(2, {{{1, 0}, {1.0, 0.0}}});
    auto a = make_symbol(1, {{{0}, XiProfile::gaussian({0.0}, 1.0, {1.0, 0.0})}});
    CHECK_THROWS_AS(pairing_instantaneous(u, a, 0.25), std::invalid_argument);
    auto b = make_symbol(2, {{{0, 0}, XiProfile::gaussian({0.0, 0.0}, 1.0, {1.0, 0.0})}});
    CHECK_THROWS_AS(pairing_instantaneous(u, b, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pairing_instantaneous(u, b, -1.0), std::invalid_argument);
}

TEST_CASE("the pair decomposition records exact frequency gaps") {
    auto u = make_state(1, {{{0}, {0.8, 0.0}}, {{3}, {0.0, 0.5}}});
    auto a = make_symbol(1, {{{3}, XiProfile::gaussian({0.1}, 0.5, {1.0, 0.0})}});
    auto dec = pairing_detail::decompose(u, a, 0.2);
    REQUIRE(dec.pairs.size() == 1);
    CHECK(dec.pairs[0].delta == 9); // |3|^2 - |0|^2
    const cplx expect = cplx{0.8, 0.0} * std::conj(cplx{0.0, 0.5}) *
                        std::exp(-0.5 * std::pow((0.3 - 0.1) / 0.5, 2));
    CHECK(std::abs(dec.pairs[0].amp - expect) < 1e-14);
}

// ---------------------------------------------------------------------------
// Position-density pairings (x-only symbols)
// ---------------------------------------------------------------------------

TEST_CASE("an x-only constant symbol integrates the density to the total mass") {
    auto gen = rng(10);
    auto u = random_state(gen, 1, 5, 3);
    auto one = make_symbol(1, {{{0}, XiProfile::constant_on_ball({0.0}, 50.0, {1.0, 0.0})}});
    auto p = pairing_position_density(u, one);
    const double mass = l2_norm(u) * l2_norm(u);
    CHECK(p.value.real() == doctest::Approx(mass).epsilon(1e-13));
    CHECK(std::abs(p.value.imag()) < 1e-14);
}

TEST_CASE("pairing cos x against a two-mode state gives one half") {
    auto u = make_state(1, {{{0}, {kInvSqrt2, 0.0}}, {{1}, {kInvSqrt2, 0.0}}});
    auto cosx = make_symbol(1, {
        {{1}, XiProfile::constant_on_ball({0.0}, 30.0, {0.5, 0.0})},
        {{-1}, XiProfile::constant_on_ball({0.0}, 30.0, {0.5, 0.0})},
    });
    auto p = pairing_position_density(u, cosx);
    CHECK(p.value.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(p.value.imag()) < 1e-15);
}

TEST_CASE("x-only pairings agree between the density route, the closed sum, and the grid") {
    auto gen = rng(11);
    auto u = random_state(gen, 1, 6, 3);
    // Balls wide enough to cover every midpoint h(k + l/2) that occurs.
    auto a = make_symbol(1, {
        {{0}, XiProfile::constant_on_ball({0.0}, 40.0, {0.6, 0.0})},
        {{2}, XiProfile::constant_on_ball({0.0}, 40.0, {0.3, 0.1})},
        {{-2}, XiProfile::constant_on_ball({0.0}, 40.0, {0.3, -0.1})},
    });
    auto dens = pairing_position_density(u, a);
    auto inst = pairing_instantaneous(u, a, 0.25);
    CHECK(std::abs(dens.value - inst.value) < 1e-12);
    auto grid = grid_position_density(u, a);
    CHECK(std::abs(dens.value - grid) < 1e-10);
}

TEST_CASE("the density route refuses symbols that actually depend on momentum") {
    auto u = make_state(1, {{{0}, {1.0, 0.0}}});
    auto a = make_symbol(1, {{{0}, XiProfile::gaussian({0.0}, 1.0, {1.0, 0.0})}});
    CHECK_THROWS_AS(pairing_position_density(u, a), std::invalid_argument);
    auto b = make_symbol(1, {{{0}, XiProfile::linear_times_gaussian({1.0}, {0.0}, 1.0, {1.0, 0.0})}});
    CHECK_THROWS_AS(pairing_position_density(u, b), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Time-averaged pairings
// ---------------------------------------------------------------------------

TEST_CASE("momentum-only symbols make time averaging a no-op") {
    // Every pair is diagonal, the frequency gap vanishes, and the window
    // contributes exactly phihat(0) = 1.
    auto gen = rng(12);
    auto u = random_state(gen, 2, 6, 3);
    auto a = make_symbol(2, {{{0, 0}, XiProfile::gaussian({0.4, 0.0}, 0.9, {1.0, 0.0})}});
    auto win = TestWindow::make_fejer(2.0);
    auto inst = pairing_instantaneous(u, a, 0.1);
    auto avg = pairing_time_averaged(u, a, 0.1, TimeScale::reciprocal(), win);
    CHECK(std::abs(avg.value - inst.value) < 1e-14);
}

TEST_CASE("pairs whose frequency gap falls outside the window vanish bit-exactly") {
    // Reciprocal scale: the weight argument is (|j|^2 - |k|^2)/2 = 50,
    // far beyond R = 2, and the fejer hat is identically zero there -- so
    // the value is 0.0, not merely small.
    auto u = make_state(1, {{{0}, {0.7, 0.0}}, {{10}, {0.5, 0.5}}});
    auto a = make_symbol(1, {{{10}, XiProfile::gaussian({0.0}, 3.0, {1.0, 0.0})}});
    auto avg = pairing_time_averaged(u, a, 0.05, TimeScale::reciprocal(),
                                     TestWindow::make_fejer(2.0));
    CHECK(avg.value.real() == 0.0);
    CHECK(avg.value.imag() == 0.0);
}

TEST_CASE("the time-averaged closed form matches the brute-force time quadrature") {
    // The two sides share no Fourier-side code: one evaluates phihat at the
    // exact pair frequencies, the other integrates phi(t) times the evolved
    // pairing by Simpson's rule with analytic tail restoration.  Agreement
    // is asserted against the sum of their own error budgets.
    auto u = make_state(1, {{{3}, {1.0, 0.0}}});
    auto a = make_symbol(1, {{{0}, XiProfile::gaussian({0.2}, 0.7, {1.0, 0.0})}});
    auto win = TestWindow::make_fejer(2.0);
    auto closed = pairing_time_averaged(u, a, 0.25, TimeScale::reciprocal(), win);
    auto oracle = oracle_time_quadrature(u, a, 0.25, TimeScale::reciprocal(), win, 2000.0, 0.01);
    // Single diagonal mode: the average is just c0(h k0).
    CHECK(closed.value.real() ==
          doctest::Approx(std::exp(-0.5 * std::pow((0.75 - 0.2) / 0.7, 2))).epsilon(1e-13));
    CHECK(std::abs(closed.value - oracle.value) < closed.budget + oracle.budget + 1e-12);
}

TEST_CASE("closed form and time quadrature agree across random instances") {
    auto gen = rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        const int dim = 1 + trial % 2;
        auto u = random_state(gen, dim, 4 + trial % 3, 3);
        auto a = random_real_symbol(gen, dim, 2, 2);
        const double h = trial % 2 == 0 ? 0.25 : 0.1;
        auto win = trial % 3 == 0 ? TestWindow::make_triangle_product(4.0)
                                  : TestWindow::make_fejer(2.0);
        auto scale = TimeScale::reciprocal();
        auto closed = pairing_time_averaged(u, a, h, scale, win);
        auto oracle = oracle_time_quadrature(u, a, h, scale, win, 1000.0, 0.01);
        CHECK(std::abs(closed.value - oracle.value) < closed.budget + oracle.budget + 1e-9);
        CHECK(oracle.budget < 1e-2);
    }
}

TEST_CASE("a zero symbol pairs to zero with a near-zero budget") {
    auto u = make_state(1, {{{1}, {1.0, 0.0}}});
    auto zero = make_symbol(1, {});
    auto win = TestWindow::make_fejer(2.0);
    auto closed = pairing_time_averaged(u, zero, 0.25, TimeScale::reciprocal(), win);
    CHECK(closed.value == cplx{0.0, 0.0});
    auto oracle = oracle_time_quadrature(u, zero, 0.25, TimeScale::reciprocal(), win, 500.0, 0.01);
    CHECK(std::abs(oracle.value) < 1e-12);
}

TEST_CASE("the time quadrature validates its step and horizon") {
    auto u = make_state(1, {{{1}, {1.0, 0.0}}});
    auto a = make_symbol(1, {{{0}, XiProfile::gaussian({0.0}, 1.0, {1.0, 0.0})}});
    auto win = TestWindow::make_fejer(2.0);
    CHECK_THROWS_AS(oracle_time_quadrature(u, a, 0.25, TimeScale::reciprocal(), win, 100.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle_time_quadrature(u, a, 0.25, TimeScale::reciprocal(), win, 1.0, 2.0),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Derivative identity against the momentum bracket
// ---------------------------------------------------------------------------

TEST_CASE("the time derivative of the pairing is the bracket pairing") {
    // d/dt <W_{u(t)}, a> = -(alpha_h / 2) <W_{u(t)}, {a, p}> holds exactly
    // at finite h because the flow hamiltonian is quadratic; the check
    // uses a central difference on the left.
    auto gen = rng(14);
    for (int trial = 0; trial < 4; ++trial) {
        const int dim = 1 + trial % 2;
        auto u = random_state(gen, dim, 5, 2);
        auto a = random_real_symbol(gen, dim, 2, 2);
        auto bracket = poisson_bracket_with_p(a);
        const double h = 0.25;
        const auto scale = TimeScale::reciprocal();
        const double alpha = scale.alpha(h);
        const double t0 = 0.3, step = 1e-5;

        auto at = [&](double t) {
            return pairing_instantaneous(evolve_torus(u, h, scale, t), a, h).value;
        };
        const cplx lhs = (at(t0 + step) - at(t0 - step)) / (2.0 * step);
        const cplx rhs = -0.5 * alpha *
            pairing_instantaneous(evolve_torus(u, h, scale, t0), bracket, h).value;
        CHECK(std::abs(lhs - rhs) < 1e-6);
    }
}

// ---------------------------------------------------------------------------
// Spectral mass profile
// ---------------------------------------------------------------------------

TEST_CASE("the oscillation profile splits spectral mass by |h k|^2") {
    // h = 1, modes at |k|^2 = 0, 1, 4 against the window [1/2, 2].
    auto u = make_state(1, {{{0}, {0.6, 0.0}}, {{1}, {0.0, 0.6}}, {{2}, {std::sqrt(0.28), 0.0}}});
    auto prof = h_oscillation_profile(u, 1.0, 0.5, 2.0);
    CHECK(prof.below == doctest::Approx(0.36).epsilon(1e-13));
    CHECK(prof.inside == doctest::Approx(0.36).epsilon(1e-13));
    CHECK(prof.above == doctest::Approx(0.28).epsilon(1e-13));
    CHECK(prof.below + prof.inside + prof.above == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a carrier frequency inside the window concentrates all mass there") {
    auto u = make_state(2, {{{10, 0}, {1.0, 0.0}}});
    auto prof = h_oscillation_profile(u, 0.1, 0.5, 2.0); // |hk|^2 = 1
    CHECK(prof.inside == 1.0);
    CHECK(prof.below == 0.0);
    CHECK(prof.above == 0.0);
}

TEST_CASE("the zero mode lands below any window and the zero state nowhere") {
    auto u = make_state(1, {{{0}, {1.0, 0.0}}});
    auto prof = h_oscillation_profile(u, 0.3, 0.5, 2.0);
    CHECK(prof.below == 1.0);
    LatticeState empty;
    empty.dim = 1;
    auto zero = h_oscillation_profile(empty, 0.3, 0.5, 2.0);
    CHECK(zero.below == 0.0);
    CHECK(zero.inside == 0.0);
    CHECK(zero.above == 0.0);
}

TEST_CASE("the oscillation profile rejects degenerate windows") {
    auto u = make_state(1, {{{1}, {1.0, 0.0}}});
    CHECK_THROWS_AS(h_oscillation_profile(u, 0.0, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(h_oscillation_profile(u, 0.3, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(h_oscillation_profile(u, 0.3, 2.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(h_oscillation_profile(u, 0.3, 0.0, 2.0), std::invalid_argument);
}
