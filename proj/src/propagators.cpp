#include "wignerlab/propagators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wignerlab/ddouble.hpp"
#include "wignerlab/exact.hpp"

namespace wignerlab {

// ---------------------------------------------------------------------------
// TimeScale
// ---------------------------------------------------------------------------

TimeScale TimeScale::reciprocal() {
    TimeScale s;
    s.kind = Kind::reciprocal;
    s.gamma = 1.0;
    return s;
}

TimeScale TimeScale::power(double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("power time scale needs gamma >= 0");
    TimeScale s;
    s.kind = Kind::power;
    s.gamma = gamma;
    return s;
}

TimeScale TimeScale::constant(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("constant time scale needs alpha > 0");
    TimeScale s;
    s.kind = Kind::constant;
    s.fixed_alpha = alpha;
    return s;
}

TimeScale TimeScale::table(std::vector<std::pair<double, double>> pairs) {
    if (pairs.empty()) throw std::invalid_argument("table time scale needs entries");
    for (auto [h, a] : pairs) {
        if (!(h > 0.0) || !(a > 0.0)) throw std::invalid_argument("table entries must be positive");
    }
    TimeScale s;
    s.kind = Kind::table;
    s.pairs = std::move(pairs);
    return s;
}

double TimeScale::alpha(double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("alpha requires h > 0");
    switch (kind) {
        case Kind::reciprocal: return 1.0 / h;
        case Kind::power: return std::pow(h, -gamma);
        case Kind::constant: return fixed_alpha;
        case Kind::table:
            for (auto [hh, aa] : pairs) {
                if (hh == h) return aa;
            }
            throw std::invalid_argument("table time scale has no entry for this h");
    }
    throw std::logic_error("unreachable");
}

double TimeScale::alpha_times_h(double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("alpha_times_h requires h > 0");
    switch (kind) {
        case Kind::reciprocal: return 1.0; // exact by definition, never (1/h)*h
        case Kind::power: return std::pow(h, 1.0 - gamma);
        case Kind::constant: return fixed_alpha * h;
        case Kind::table: return alpha(h) * h;
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Torus propagator
// ---------------------------------------------------------------------------

LatticeState evolve_torus(const LatticeState& state, double h, const TimeScale& scale, double t) {
    const double ah = scale.alpha_times_h(h);
    LatticeState out;
    out.dim = state.dim;
    for (const auto& [k, amp] : state.modes) {
        std::int64_t n2 = 0;
        for (auto ki : k) n2 = checked_add(n2, checked_mul(ki, ki));
        if (n2 > (std::int64_t{1} << 53)) {
            throw ExactOverflow("mode norm too large for exact double conversion");
        }
        // theta = (alpha h) * t * |k|^2 / 2, accumulated in double-double:
        // |k|^2/2 is exact in binary, the products carry ~32 digits, and the
        // reduction mod 2pi keeps absolute phase error near 1e-22 even for
        // theta ~ 1e9.
        DDouble theta = detail::two_prod(ah, t);
        theta = dd_mul(theta, dd_from(0.5 * static_cast<double>(n2)));
        double phase = dd_mod_two_pi(theta);
        out.modes.emplace(k, amp * std::polar(1.0, -phase));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gaussian packets
// ---------------------------------------------------------------------------

GaussianPacket GaussianPacket::make(std::vector<double> x0, std::vector<double> xi0,
                                    double sigma, double h) {
    if (x0.size() != xi0.size() || x0.empty()) {
        throw std::invalid_argument("packet center/momentum dimension mismatch");
    }
    if (!(sigma > 0.0) || !(h > 0.0)) throw std::invalid_argument("packet needs sigma > 0, h > 0");
    GaussianPacket p;
    p.dim = static_cast<int>(x0.size());
    p.x0 = std::move(x0);
    p.xi0 = std::move(xi0);
    p.sigma = sigma;
    p.h = h;
    p.width = cplx{sigma * sigma, 0.0};
    return p;
}

double GaussianPacket::density(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("density: wrong dimension");
    // |u|^2 = (pi h)^{-d/2} sigma^d |A|^{-d} exp(-sigma^2 |x-x0|^2 / (h |A|^2))
    const double absA2 = std::norm(width);
    double q = 0.0;
    for (int i = 0; i < dim; ++i) q += (x[i] - x0[i]) * (x[i] - x0[i]);
    double prefactor = std::pow(std::numbers::pi * h, -0.5 * dim) *
                       std::pow(sigma, dim) * std::pow(absA2, -0.5 * dim);
    return prefactor * std::exp(-sigma * sigma * q / (h * absA2));
}

GaussianPacket evolve_free(const GaussianPacket& packet, const TimeScale& scale, double t) {
    const double a = scale.alpha(packet.h);
    GaussianPacket out = packet;
    // One Fourier-multiplier application: the carrier e^{i xi0.x/h} rides at
    // group velocity alpha_h xi0, and the width parameter gains i alpha_h t.
    // Both are additive, so evolving by t then s equals evolving by t + s.
    for (int i = 0; i < packet.dim; ++i) out.x0[i] += a * t * packet.xi0[i];
    out.width += cplx{0.0, a * t};
    return out;
}

WignerGaussian wigner_gaussian(const GaussianPacket& packet) {
    WignerGaussian w;
    w.dim = packet.dim;
    w.mean_x = packet.x0;
    w.mean_xi = packet.xi0;
    const double s = packet.width.imag();       // accumulated alpha_h t
    const double s2 = packet.sigma * packet.sigma;
    w.var_x = packet.h * std::norm(packet.width) / (2.0 * s2);
    w.var_xi = packet.h / (2.0 * s2);
    w.cov_x_xi = s * packet.h / (2.0 * s2);     // shear: Cov = (alpha t) Var(xi)
    return w;
}

double WignerGaussian::eval(const std::vector<double>& x, const std::vector<double>& xi) const {
    if (static_cast<int>(x.size()) != dim || static_cast<int>(xi.size()) != dim) {
        throw std::invalid_argument("wigner eval: wrong dimension");
    }
    const double det = var_x * var_xi - cov_x_xi * cov_x_xi; // = h^2/4 per axis
    double value = 1.0;
    for (int i = 0; i < dim; ++i) {
        double dx = x[i] - mean_x[i];
        double dxi = xi[i] - mean_xi[i];
        double quad = (var_xi * dx * dx - 2.0 * cov_x_xi * dx * dxi + var_x * dxi * dxi) / det;
        value *= std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
    }
    return value;
}

} // namespace wignerlab
