#include "wignerlab/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wignerlab {

std::vector<Rational> RationalApproxStream::convergent(int n) const {
    if (n < 1 || n > depth())
        throw std::out_of_range("RationalApproxStream: depth " + std::to_string(n) +
                                " not available (have " + std::to_string(depth()) + ")");
    std::vector<Rational> out;
    out.reserve(chains.size());
    for (const auto& chain : chains)
        out.push_back(chain[static_cast<std::size_t>(n - 1)]);
    return out;
}

RationalApproxStream RationalApproxStream::make(const std::vector<QuadraticSurd>& theta0,
                                                int depth) {
    if (theta0.empty())
        throw std::invalid_argument("RationalApproxStream: empty target");
    if (depth < 1)
        throw std::invalid_argument("RationalApproxStream: depth must be >= 1");
    if (is_resonant(theta0))
        throw std::invalid_argument(
            "RationalApproxStream: target direction is resonant; the construction "
            "requires a non-resonant theta0");

    RationalApproxStream out;
    out.target = theta0;
    out.chains.reserve(theta0.size());
    for (const auto& coord : theta0) {
        auto chain = cf_convergents(coord, depth);
        if (chain.empty())
            throw std::logic_error("RationalApproxStream: empty convergent chain");
        // Rational coordinates terminate early; saturate at the exact value
        // so every depth emits a full d-vector.
        while (static_cast<int>(chain.size()) < depth)
            chain.push_back(chain.back());
        out.chains.push_back(std::move(chain));
    }
    return out;
}

LcmLadder LcmLadder::build(const RationalApproxStream& stream, int requested_depth) {
    if (requested_depth < 1)
        throw std::invalid_argument("LcmLadder: requested depth must be >= 1");
    LcmLadder out;
    out.requested = requested_depth;
    const int depth = std::min(requested_depth, stream.depth());

    std::int64_t lambda_prev = 1;
    for (int n = 1; n <= depth; ++n) {
        const auto kn = stream.convergent(n);
        try {
            std::int64_t qn = 1;
            for (const auto& c : kn)
                qn = checked_lcm(qn, c.den);
            const std::int64_t lambda = (n == 1) ? qn : checked_mul(qn, lambda_prev);
            // h_n = 1/lambda^2 and the shifts need lambda^2 exactly.
            const std::int64_t lambda_sq = checked_mul(lambda, lambda);
            out.q.push_back(qn);
            out.lambda.push_back(lambda);
            out.h.push_back(1.0 / static_cast<double>(lambda_sq));
            out.k.push_back(kn);
            lambda_prev = lambda;
        } catch (const ExactOverflow&) {
            out.capped = true;
            break;
        }
    }
    if (static_cast<int>(out.lambda.size()) < requested_depth && !out.capped) {
        // Stream ran out of convergents before the ladder overflowed.
        out.capped = true;
    }
    if (out.lambda.empty())
        throw std::invalid_argument("LcmLadder: no admissible depth at all");
    return out;
}

namespace {

std::int64_t ladder_lambda(const LcmLadder& ladder, int n, const char* who) {
    if (n < 1 || n > ladder.depth()) {
        throw std::out_of_range(std::string(who) + ": depth " + std::to_string(n) +
                                " not admissible; largest admissible n is " +
                                std::to_string(ladder.depth()) +
                                (ladder.capped ? " (ladder capped at representable range)" : ""));
    }
    return ladder.lambda[static_cast<std::size_t>(n - 1)];
}

} // namespace

std::pair<double, LatticeState> plane_wave_family(const LatticeState& rho,
                                                  const std::vector<std::int64_t>& xi0,
                                                  const LcmLadder& ladder, int n) {
    if (static_cast<int>(xi0.size()) != rho.dim)
        throw std::invalid_argument("plane_wave_family: xi0 dimension mismatch");
    const std::int64_t lambda = ladder_lambda(ladder, n, "plane_wave_family");
    const std::int64_t lambda_sq = checked_mul(lambda, lambda);

    LatticeVector shift(xi0.size());
    for (std::size_t i = 0; i < xi0.size(); ++i)
        shift[i] = checked_mul(lambda_sq, xi0[i]);
    return {ladder.h[static_cast<std::size_t>(n - 1)], modulate(rho, shift)};
}

std::pair<double, LatticeState> resonant_family(const LatticeState& rho,
                                                const std::vector<std::int64_t>& xi0,
                                                const RationalApproxStream& stream,
                                                const LcmLadder& ladder, int n) {
    if (static_cast<int>(xi0.size()) != rho.dim)
        throw std::invalid_argument("resonant_family: xi0 dimension mismatch");
    if (stream.chains.size() != xi0.size())
        throw std::invalid_argument("resonant_family: stream dimension mismatch");
    const std::int64_t lambda = ladder_lambda(ladder, n, "resonant_family");
    const std::int64_t lambda_sq = checked_mul(lambda, lambda);
    const auto kn = ladder.k[static_cast<std::size_t>(n - 1)];

    LatticeVector shift(xi0.size());
    for (std::size_t i = 0; i < xi0.size(); ++i) {
        // lambda_n k_n is integral because q_n | lambda_n; anything else is
        // a broken ladder, not a rounding situation.
        const std::int64_t num = checked_mul(lambda, kn[i].num);
        if (num % kn[i].den != 0)
            throw std::logic_error("resonant_family: lambda_n k_n not integral");
        shift[i] = checked_add(checked_mul(lambda_sq, xi0[i]), num / kn[i].den);
    }
    return {ladder.h[static_cast<std::size_t>(n - 1)], modulate(rho, shift)};
}

LatticeState wave_packet_torus(const std::vector<double>& x0, const std::vector<double>& xi0,
                               double h) {
    const int d = static_cast<int>(x0.size());
    if (d < 1 || xi0.size() != x0.size())
        throw std::invalid_argument("wave_packet_torus: x0/xi0 dimension mismatch");
    if (!(h > 0.0))
        throw std::invalid_argument("wave_packet_torus: h must be positive");

    const double radius = 8.0 * std::sqrt(h);
    std::vector<std::int64_t> lo(x0.size()), hi(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double a = (xi0[i] - radius) / h;
        const double b = (xi0[i] + radius) / h;
        if (!(std::abs(a) < 9.0e15 && std::abs(b) < 9.0e15))
            throw ExactOverflow("wave_packet_torus: truncation window leaves int64 range");
        lo[i] = static_cast<std::int64_t>(std::ceil(a));
        hi[i] = static_cast<std::int64_t>(std::floor(b));
        if (lo[i] > hi[i])
            throw std::invalid_argument("wave_packet_torus: empty truncation window");
    }

    LatticeState out;
    out.dim = d;
    LatticeVector k = lo;
    double mass = 0.0;
    while (true) {
        double dist2 = 0.0;
        double phase = 0.0;
        for (int i = 0; i < d; ++i) {
            const double g = h * static_cast<double>(k[i]) - xi0[i];
            dist2 += g * g;
            phase -= static_cast<double>(k[i]) * x0[static_cast<std::size_t>(i)];
        }
        if (dist2 <= radius * radius) {
            const cplx amp = std::exp(-dist2 / (2.0 * h)) * std::polar(1.0, phase);
            out.modes[k] = amp;
            mass += std::norm(amp);
        }
        int axis = d - 1;
        while (axis >= 0) {
            if (++k[axis] <= hi[static_cast<std::size_t>(axis)])
                break;
            k[axis] = lo[static_cast<std::size_t>(axis)];
            --axis;
        }
        if (axis < 0)
            break;
    }
    if (out.modes.empty() || !(mass > 0.0))
        throw std::invalid_argument("wave_packet_torus: empty truncation window");

    const double inv = 1.0 / std::sqrt(mass);
    for (auto& [kk, amp] : out.modes)
        amp *= inv;
    return out;
}

LatticeState eigenmode(const LatticeVector& k0) {
    if (k0.empty())
        throw std::invalid_argument("eigenmode: empty index");
    LatticeState out;
    out.dim = static_cast<int>(k0.size());
    out.modes[k0] = cplx{1.0, 0.0};
    return out;
}

std::pair<double, LatticeState> SemiclassicalFamily::emit(int n) const {
    if (n < 1 || n > n_max)
        throw std::out_of_range("SemiclassicalFamily: member index out of range");
    switch (kind) {
    case FamilyKind::plane_wave:
        return plane_wave_family(rho, xi0_int, ladder, n);
    case FamilyKind::resonant:
        return resonant_family(rho, xi0_int, stream, ladder, n);
    case FamilyKind::wave_packet: {
        if (n > static_cast<int>(h_grid.size()))
            throw std::out_of_range("SemiclassicalFamily: h grid exhausted");
        const double h = h_grid[static_cast<std::size_t>(n - 1)];
        return {h, wave_packet_torus(x0, xi0_real, h)};
    }
    case FamilyKind::eigenmode: {
        const double h =
            h_grid.empty()
                ? 1.0
                : h_grid[static_cast<std::size_t>(std::min<int>(n, static_cast<int>(h_grid.size())) - 1)];
        return {h, eigenmode(k0)};
    }
    }
    throw std::logic_error("SemiclassicalFamily: unknown kind");
}

} // namespace wignerlab
