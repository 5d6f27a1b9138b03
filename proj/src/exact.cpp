#include "wignerlab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wignerlab {

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    // std::gcd is fine except for INT64_MIN, whose absolute value does not
    // exist in int64; nothing in this project legitimately produces it.
    if (a == INT64_MIN || b == INT64_MIN) throw ExactOverflow("gcd at INT64_MIN");
    return std::gcd(a, b);
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("lcm needs positive arguments");
    return checked_mul(a / gcd64(a, b), b);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    std::int64_t r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    if (n == 0) return 0;
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    if (s < 1) s = 1;
    // sqrt of large int64 can be off by an ulp in either direction; compare
    // via division (s*s <= n  <=>  s <= n/s for s > 0) so the fix-up never
    // squares a candidate, which would overflow near 2^63.
    while (s > 1 && s > n / s) --s;
    while (s + 1 <= n / (s + 1)) ++s;
    return s;
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) { n = checked_sub(0, n); d = checked_sub(0, d); }
    std::int64_t g = gcd64(n, d);
    if (g > 1) { n /= g; d /= g; }
    return Rational{n, d};
}

Rational rat_add(const Rational& a, const Rational& b) {
    // Reduce cross terms early so intermediate products stay small.
    std::int64_t g = gcd64(a.den, b.den);
    std::int64_t db = b.den / g;
    std::int64_t n = checked_add(checked_mul(a.num, db), checked_mul(b.num, a.den / g));
    std::int64_t d = checked_mul(a.den, db);
    return Rational::make(n, d);
}

Rational rat_neg(const Rational& a) { return Rational{checked_sub(0, a.num), a.den}; }

Rational rat_sub(const Rational& a, const Rational& b) { return rat_add(a, rat_neg(b)); }

Rational rat_mul(const Rational& a, const Rational& b) {
    std::int64_t g1 = gcd64(a.num, b.den);
    std::int64_t g2 = gcd64(b.num, a.den);
    std::int64_t n = checked_mul(a.num / g1, b.num / g2);
    std::int64_t d = checked_mul(a.den / g2, b.den / g1);
    return Rational::make(n, d);
}

Rational rat_div(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::invalid_argument("rational division by zero");
    return rat_mul(a, Rational::make(b.den, b.num));
}

// ---------------------------------------------------------------------------
// QuadraticSurd
// ---------------------------------------------------------------------------

namespace {

// Split m = s^2 * f with f squarefree; returns {s, f}.  Trial division is
// plenty: radicands in practice are single digits (2, 3, 5, ...).
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t m) {
    std::int64_t s = 1, f = 1;
    for (std::int64_t d = 2; d * d <= m; ++d) {
        if (m % d != 0) continue;
        int count = 0;
        while (m % d == 0) { m /= d; ++count; }
        for (int i = 0; i + 1 < count; i += 2) s = checked_mul(s, d);
        if (count % 2 == 1) f = checked_mul(f, d);
    }
    f = checked_mul(f, m); // leftover prime
    return {s, f};
}

} // namespace

QuadraticSurd QuadraticSurd::make(std::int64_t p, std::int64_t q, std::int64_t m, std::int64_t r) {
    if (r == 0) throw std::invalid_argument("surd with zero denominator");
    if (m < 0) throw std::invalid_argument("surd with negative radicand");
    if (q == 0 || m == 0) { q = 0; m = 0; }
    if (m > 0) {
        auto [s, f] = squarefree_split(m);
        q = checked_mul(q, s);
        m = f;
        if (m == 1) { p = checked_add(p, q); q = 0; m = 0; } // radical was a perfect square
    }
    if (r < 0) { p = checked_sub(0, p); q = checked_sub(0, q); r = checked_sub(0, r); }
    std::int64_t g = gcd64(gcd64(p, q), r);
    if (g > 1) { p /= g; q /= g; r /= g; }
    return QuadraticSurd{p, q, m, r};
}

double QuadraticSurd::to_double() const {
    double v = static_cast<double>(p);
    if (q != 0) v += static_cast<double>(q) * std::sqrt(static_cast<double>(m));
    return v / static_cast<double>(r);
}

// ---------------------------------------------------------------------------
// Continued fractions
// ---------------------------------------------------------------------------

namespace {

// Convergent accumulator: h_n = a_n h_{n-1} + h_{n-2}, same for denominators.
// The classical recurrence yields fractions already in lowest terms.
struct ConvergentAccum {
    std::int64_t h_prev = 1, h_prev2 = 0; // numerators
    std::int64_t k_prev = 0, k_prev2 = 1; // denominators

    Rational push(std::int64_t a) {
        std::int64_t h = checked_add(checked_mul(a, h_prev), h_prev2);
        std::int64_t k = checked_add(checked_mul(a, k_prev), k_prev2);
        h_prev2 = h_prev; h_prev = h;
        k_prev2 = k_prev; k_prev = k;
        return Rational{h, k};
    }
};

std::vector<Rational> rational_convergents(Rational x, int count) {
    // Euclid: finite expansion, last convergent equals x exactly.
    std::vector<Rational> out;
    ConvergentAccum acc;
    std::int64_t num = x.num, den = x.den;
    while (static_cast<int>(out.size()) < count) {
        std::int64_t a = floor_div(num, den);
        out.push_back(acc.push(a));
        std::int64_t rem = num - a * den;
        if (rem == 0) break;
        num = den;
        den = rem;
    }
    return out;
}

} // namespace

std::vector<Rational> cf_convergents(const QuadraticSurd& x, int count) {
    if (count <= 0) return {};
    if (x.is_rational()) return rational_convergents(x.rational_part(), count);

    // Write x = (P + sqrt(D)) / Q.  The textbook iteration
    //   a = floor((P + sqrt(D))/Q),  P' = a*Q - P,  Q' = (D - P'^2)/Q
    // stays in integers provided Q | (D - P^2); scaling numerator and
    // denominator by |Q| enforces that without changing x.
    std::int64_t P = x.p, Q = x.r;
    std::int64_t D = checked_mul(checked_mul(x.q, x.q), x.m);
    if (x.q < 0) { P = checked_sub(0, P); Q = checked_sub(0, Q); } // (P - sqrt(D))/Q form

    std::int64_t absQ = Q < 0 ? checked_sub(0, Q) : Q;
    if ((D - checked_mul(P, P)) % Q != 0) {
        P = checked_mul(P, absQ);
        D = checked_mul(D, checked_mul(absQ, absQ));
        Q = checked_mul(Q, absQ);
    }

    std::vector<Rational> out;
    ConvergentAccum acc;
    std::int64_t sD = isqrt64(D);
    for (int i = 0; i < count; ++i) {
        // floor((P + sqrt(D))/Q); sqrt(D) is irrational here, so the floor
        // is decided by the integer part sD alone.
        std::int64_t a = (Q > 0) ? floor_div(checked_add(P, sD), Q)
                                 : checked_sub(0, floor_div(checked_add(P, sD), checked_sub(0, Q)) + 1);
        out.push_back(acc.push(a));
        std::int64_t Pn = checked_sub(checked_mul(a, Q), P);
        std::int64_t Qn = (D - checked_mul(Pn, Pn)) / Q;
        P = Pn;
        Q = Qn;
        if (Q == 0) throw std::logic_error("continued fraction of rational routed to surd path");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Resonance
// ---------------------------------------------------------------------------

namespace {

// Exact rank of a small rational matrix by Gaussian elimination.
int rational_rank(std::vector<std::vector<Rational>> rows) {
    const int nrows = static_cast<int>(rows.size());
    if (nrows == 0) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < nrows; ++col) {
        int pivot = -1;
        for (int i = rank; i < nrows; ++i) {
            if (!rows[i][col].is_zero()) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int i = rank + 1; i < nrows; ++i) {
            if (rows[i][col].is_zero()) continue;
            Rational f = rat_div(rows[i][col], rows[rank][col]);
            for (int j = col; j < ncols; ++j) {
                rows[i][j] = rat_sub(rows[i][j], rat_mul(f, rows[rank][j]));
            }
        }
        ++rank;
    }
    return rank;
}

// Constraint rows of k . xi == 0: rational parts, then one row per distinct
// radical class present in xi.
std::vector<std::vector<Rational>> constraint_rows(const std::vector<QuadraticSurd>& xi) {
    const int d = static_cast<int>(xi.size());
    std::vector<std::vector<Rational>> rows;
    rows.emplace_back(d);
    for (int i = 0; i < d; ++i) rows[0][i] = xi[i].rational_part();

    std::vector<std::int64_t> classes;
    for (const auto& c : xi) {
        if (c.q != 0 && std::find(classes.begin(), classes.end(), c.m) == classes.end()) {
            classes.push_back(c.m);
        }
    }
    std::sort(classes.begin(), classes.end());
    for (std::int64_t m : classes) {
        std::vector<Rational> row(d);
        for (int i = 0; i < d; ++i) {
            row[i] = (xi[i].m == m) ? xi[i].radical_coeff() : Rational{0, 1};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

bool is_resonant(const std::vector<QuadraticSurd>& xi) {
    if (xi.empty()) throw std::invalid_argument("is_resonant on empty vector");
    const int d = static_cast<int>(xi.size());
    return rational_rank(constraint_rows(xi)) < d;
}

bool dot_is_zero(const std::vector<std::int64_t>& l, const std::vector<QuadraticSurd>& xi) {
    if (l.size() != xi.size()) throw std::invalid_argument("dot_is_zero dimension mismatch");
    auto rows = constraint_rows(xi);
    for (const auto& row : rows) {
        Rational acc{0, 1};
        for (std::size_t i = 0; i < l.size(); ++i) {
            acc = rat_add(acc, rat_mul(Rational::make(l[i], 1), row[i]));
        }
        if (!acc.is_zero()) return false;
    }
    return true;
}

} // namespace wignerlab
