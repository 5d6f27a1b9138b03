// Exact integer, rational, and quadratic-surd arithmetic.
//
// Everything downstream leans on this layer being exact: lattice shifts as
// large as lambda_n^2 ~ 1e10, continued-fraction convergents, and the
// resonance test k.xi = 0 all refuse to round.  Overflow must throw, never
// wrap.

#include <doctest/doctest.h>

#include <cmath>
#include <stdexcept>

#include "wignerlab/exact.hpp"

using namespace wignerlab;

TEST_CASE("checked arithmetic throws on overflow instead of wrapping") {
    const std::int64_t big = INT64_MAX / 2 + 1;
    CHECK_THROWS_AS(checked_add(big, big), ExactOverflow);
    CHECK_THROWS_AS(checked_mul(INT64_MAX / 3, 4), ExactOverflow);
    CHECK_THROWS_AS(checked_sub(INT64_MIN, 1), ExactOverflow);
    CHECK(checked_add(3, 4) == 7);
    CHECK(checked_mul(-(1LL << 31), 1LL << 32) == INT64_MIN);
    CHECK_THROWS_AS(checked_mul(1LL << 31, 1LL << 32), ExactOverflow);
}

TEST_CASE("gcd, lcm, floor division agree with hand values") {
    CHECK(gcd64(12, 18) == 6);
    CHECK(gcd64(-12, 18) == 6);
    CHECK(gcd64(0, 7) == 7);
    CHECK(checked_lcm(4, 6) == 12);
    CHECK(checked_lcm(1, 1) == 1);
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_div(-8, 2) == -4);
}

TEST_CASE("isqrt64 is the floor square root at the boundaries") {
    CHECK(isqrt64(0) == 0);
    CHECK(isqrt64(1) == 1);
    CHECK(isqrt64(3) == 1);
    CHECK(isqrt64(4) == 2);
    CHECK(isqrt64(15) == 3);
    CHECK(isqrt64(16) == 4);
    const std::int64_t n = 3037000499LL; // floor(sqrt(2^63 - 1))
    CHECK(isqrt64(n * n) == n);
    CHECK(isqrt64(n * n - 1) == n - 1);
}

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
    const Rational a = Rational::make(6, -4);
    CHECK(a.num == -3);
    CHECK(a.den == 2);
    CHECK(rat_add(Rational::make(1, 2), Rational::make(1, 3)) == Rational::make(5, 6));
    CHECK(rat_mul(Rational::make(2, 3), Rational::make(3, 4)) == Rational::make(1, 2));
    CHECK(rat_sub(Rational::make(1, 2), Rational::make(1, 2)).is_zero());
    CHECK(rat_div(Rational::make(1, 3), Rational::make(2, 5)) == Rational::make(5, 6));
    CHECK(rat_neg(Rational::make(-7, 5)) == Rational::make(7, 5));
    CHECK_THROWS_AS(Rational::make(1, 0), std::invalid_argument);
}

TEST_CASE("quadratic surds store (p + q sqrt(m)) / r canonically") {
    const QuadraticSurd s = QuadraticSurd::make(1, 1, 2, 1); // 1 + sqrt(2)
    CHECK(s.to_double() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(!s.is_rational());
    CHECK(QuadraticSurd::integer(5).is_rational());
    CHECK(QuadraticSurd::integer(0).is_zero());
    // A perfect-square radicand collapses to a rational.
    const QuadraticSurd t = QuadraticSurd::make(0, 1, 4, 2); // sqrt(4)/2 = 1
    CHECK(t.is_rational());
    CHECK(t.rational_part() == Rational::make(1, 1));
}

TEST_CASE("continued fraction of sqrt(2) gives the classical convergents") {
    const QuadraticSurd root2 = QuadraticSurd::make(0, 1, 2, 1);
    const auto conv = cf_convergents(root2, 4);
    REQUIRE(conv.size() == 4);
    CHECK(conv[0] == Rational::make(1, 1));
    CHECK(conv[1] == Rational::make(3, 2));
    CHECK(conv[2] == Rational::make(7, 5));
    CHECK(conv[3] == Rational::make(17, 12));
}

TEST_CASE("continued fraction of the golden ratio gives Fibonacci quotients") {
    // (1 + sqrt(5)) / 2 = [1; 1, 1, 1, ...]
    const QuadraticSurd phi = QuadraticSurd::make(1, 1, 5, 2);
    const auto conv = cf_convergents(phi, 6);
    REQUIRE(conv.size() == 6);
    CHECK(conv[0] == Rational::make(1, 1));
    CHECK(conv[1] == Rational::make(2, 1));
    CHECK(conv[2] == Rational::make(3, 2));
    CHECK(conv[3] == Rational::make(5, 3));
    CHECK(conv[4] == Rational::make(8, 5));
    CHECK(conv[5] == Rational::make(13, 8));
}

TEST_CASE("continued fraction of a rational terminates at the exact value") {
    const QuadraticSurd x = QuadraticSurd::from_rational(Rational::make(7, 5));
    const auto conv = cf_convergents(x, 10);
    REQUIRE(!conv.empty());
    CHECK(conv.back() == Rational::make(7, 5));
    CHECK(conv.size() <= 4); // 7/5 = [1; 2, 2]
}

TEST_CASE("convergents approach the target monotonically in error") {
    const QuadraticSurd root3 = QuadraticSurd::make(0, 1, 3, 1);
    const auto conv = cf_convergents(root3, 8);
    const double target = std::sqrt(3.0);
    double prev = 1e9;
    for (const auto& c : conv) {
        const double err = std::abs(c.to_double() - target);
        CHECK(err < prev);
        prev = err;
    }
    // eighth convergent of sqrt 3 is 97/56, off by ~9.2e-5
    CHECK(prev < 1e-4);
}

TEST_CASE("resonance on the axes: (1,0) is resonant, (1,sqrt 2) is not") {
    const QuadraticSurd one = QuadraticSurd::integer(1);
    const QuadraticSurd zero = QuadraticSurd::integer(0);
    const QuadraticSurd root2 = QuadraticSurd::make(0, 1, 2, 1);
    CHECK(is_resonant({one, zero}));          // k = (0, 1)
    CHECK(!is_resonant({one, root2}));        // rationally independent
    CHECK(!is_resonant({QuadraticSurd::integer(5)})); // d = 1: k.xi = 0 forces k = 0
}

TEST_CASE("rational d >= 2 vectors are always resonant") {
    const auto a = QuadraticSurd::from_rational(Rational::make(2, 3));
    const auto b = QuadraticSurd::from_rational(Rational::make(4, 5));
    CHECK(is_resonant({a, b})); // k = (12, -10) works
    // Mixed surd coordinates sharing the radical are resonant too:
    const auto s1 = QuadraticSurd::make(0, 1, 2, 1);  // sqrt(2)
    const auto s2 = QuadraticSurd::make(0, 3, 2, 1);  // 3 sqrt(2)
    CHECK(is_resonant({s1, s2})); // k = (3, -1)
}

TEST_CASE("dot_is_zero decides orthogonality exactly for surd vectors") {
    const QuadraticSurd one = QuadraticSurd::integer(1);
    const QuadraticSurd root2 = QuadraticSurd::make(0, 1, 2, 1);
    CHECK(dot_is_zero({0, 0}, {one, root2}));
    CHECK(!dot_is_zero({1, 0}, {one, root2}));
    CHECK(!dot_is_zero({1, 1}, {one, root2}));
    // (3, -1) . (sqrt 2, 3 sqrt 2) = 3 sqrt 2 - 3 sqrt 2 = 0 exactly.
    const QuadraticSurd s2 = QuadraticSurd::make(0, 3, 2, 1);
    CHECK(dot_is_zero({3, -1}, {root2, s2}));
    // Near-miss that floating point could not distinguish:
    CHECK(!dot_is_zero({665857, -470832}, {one, root2})); // |dot| ~ 1e-6
}
