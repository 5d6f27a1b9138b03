// Exact arithmetic: checked 64-bit integers, rationals, quadratic surds,
// continued-fraction convergents, and resonance classification.
//
// Resonance of a direction xi (does some nonzero integer vector annihilate
// it?) is a measure-zero, floating-point-undecidable question, so directions
// are carried exactly: each component is (p + q*sqrt(m))/r with integer
// p,q,m,r.  Everything downstream that needs a yes/no answer (geodesic
// averaging, the resonant-family ladder) works on this representation.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wignerlab {

// ---------------------------------------------------------------------------
// Checked 64-bit integer arithmetic.  Lattice shifts scale like lambda_n^2,
// which grows super-exponentially along the LCM ladder; silent wraparound
// would fabricate plausible-looking garbage, so every ladder-sized product
// goes through these.
// ---------------------------------------------------------------------------

class ExactOverflow : public std::overflow_error {
public:
    explicit ExactOverflow(const std::string& what) : std::overflow_error(what) {}
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw ExactOverflow("integer add overflow");
    return out;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_sub_overflow(a, b, &out)) throw ExactOverflow("integer subtract overflow");
    return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw ExactOverflow("integer multiply overflow");
    return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b);          // nonnegative result
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);    // a,b > 0

// floor(a/b) for b != 0 (rounds toward minus infinity, unlike C++ division).
std::int64_t floor_div(std::int64_t a, std::int64_t b);

// Largest s with s*s <= n (n >= 0).
std::int64_t isqrt64(std::int64_t n);

// ---------------------------------------------------------------------------
// Rational numbers, always normalized: den > 0, gcd(|num|, den) == 1.
// ---------------------------------------------------------------------------

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d);

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational rat_add(const Rational& a, const Rational& b);
Rational rat_sub(const Rational& a, const Rational& b);
Rational rat_mul(const Rational& a, const Rational& b);
Rational rat_div(const Rational& a, const Rational& b);    // b != 0
Rational rat_neg(const Rational& a);

// ---------------------------------------------------------------------------
// Quadratic surds (p + q*sqrt(m))/r.
//
// Normal form: r > 0; gcd(|p|,|q|,r) == 1; m squarefree and >= 2 when the
// radical is present; a vanished radical (q == 0, or m a perfect square,
// which folds into p) is stored as q == 0, m == 0.  Normal forms are unique,
// so equality is field-wise.
// ---------------------------------------------------------------------------

struct QuadraticSurd {
    std::int64_t p = 0;
    std::int64_t q = 0;
    std::int64_t m = 0;
    std::int64_t r = 1;

    static QuadraticSurd make(std::int64_t p, std::int64_t q, std::int64_t m, std::int64_t r);
    static QuadraticSurd from_rational(const Rational& x) { return make(x.num, 0, 0, x.den); }
    static QuadraticSurd integer(std::int64_t n) { return make(n, 0, 0, 1); }

    bool is_rational() const { return q == 0; }
    bool is_zero() const { return p == 0 && q == 0; }
    Rational rational_part() const { return Rational::make(p, r); }
    Rational radical_coeff() const { return Rational::make(q, r); }
    double to_double() const;

    friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;
};

// ---------------------------------------------------------------------------
// Continued fractions.
//
// cf_convergents returns the first `count` convergents of x as exact
// rationals in lowest terms (the standard recurrence produces lowest terms
// automatically).  Rational x has a finite expansion: the list simply stops
// at the exact value.  Surd expansions are eventually periodic, hence exact
// at any depth; convergent numerators/denominators that would overflow int64
// raise ExactOverflow, which callers treat as "ladder exhausted".
// ---------------------------------------------------------------------------

std::vector<Rational> cf_convergents(const QuadraticSurd& x, int count);

// ---------------------------------------------------------------------------
// Resonance: xi in R^d is resonant iff some nonzero k in Z^d has k.xi == 0.
//
// Writing xi_i = a_i + b_i*sqrt(m_i) with rational a_i, b_i, the numbers
// {1} u {sqrt(m) : m distinct squarefree >= 2} are linearly independent over
// Q, so k.xi == 0 splits into one rational linear constraint per radical
// class plus one for the rational parts.  A nonzero integer kernel vector
// exists iff the constraint matrix has rank < d over Q, decided by exact
// rational elimination.
// ---------------------------------------------------------------------------

bool is_resonant(const std::vector<QuadraticSurd>& xi);

// Exact test of l . xi == 0 for an integer vector l (same decomposition).
bool dot_is_zero(const std::vector<std::int64_t>& l, const std::vector<QuadraticSurd>& xi);

} // namespace wignerlab
