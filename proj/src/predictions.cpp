#include "wignerlab/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wignerlab {

cplx predict_mu0_planewave(const LatticeState& rho, const std::vector<double>& xi0,
                           const TorusSymbol& symbol) {
    if (rho.dim != symbol.dim || static_cast<int>(xi0.size()) != rho.dim)
        throw std::invalid_argument("predict_mu0_planewave: dimension mismatch");
    const auto dens = density_coefficients(rho);
    const double cell = std::pow(2.0 * std::numbers::pi, rho.dim);

    cplx out{0.0, 0.0};
    for (const auto& [l, profile] : symbol.terms) {
        LatticeVector neg(l.size());
        for (std::size_t i = 0; i < l.size(); ++i)
            neg[i] = -l[i];
        const auto it = dens.find(neg);
        if (it == dens.end())
            continue;
        out += profile.eval(xi0) * cell * it->second;
    }
    return out;
}

cplx predict_mu1(const LatticeState& rho, const std::vector<std::int64_t>& xi0,
                 const TorusSymbol& symbol, const TestWindow& window) {
    if (rho.dim != symbol.dim || static_cast<int>(xi0.size()) != rho.dim)
        throw std::invalid_argument("predict_mu1: dimension mismatch");
    std::vector<double> xi0d(xi0.size());
    for (std::size_t i = 0; i < xi0.size(); ++i)
        xi0d[i] = static_cast<double>(xi0[i]);

    cplx out{0.0, 0.0};
    for (const auto& [l, profile] : symbol.terms) {
        std::int64_t ldot = 0;
        for (std::size_t i = 0; i < l.size(); ++i)
            ldot = checked_add(ldot, checked_mul(l[i], xi0[i]));
        if (ldot != 0)
            continue; // non-resonant term: killed in the limit
        const cplx cl = profile.eval(xi0d);
        for (const auto& [k, ak] : rho.modes) {
            LatticeVector j(k.size());
            for (std::size_t i = 0; i < k.size(); ++i)
                j[i] = checked_add(k[i], l[i]);
            const auto it = rho.modes.find(j);
            if (it == rho.modes.end())
                continue;
            // |j|^2 - |k|^2 = sum l_i (2 k_i + l_i); the window takes half.
            std::int64_t delta = 0;
            for (std::size_t i = 0; i < k.size(); ++i)
                delta = checked_add(delta,
                                    checked_mul(l[i], checked_add(checked_mul(std::int64_t{2}, k[i]), l[i])));
            out += ak * std::conj(it->second) * cl * window.hat(0.5 * static_cast<double>(delta));
        }
    }
    return out;
}

cplx predict_mu2(const LatticeState& rho, const std::vector<double>& xi0,
                 const TorusSymbol& symbol, const TestWindow& window) {
    if (rho.dim != symbol.dim || static_cast<int>(xi0.size()) != rho.dim)
        throw std::invalid_argument("predict_mu2: dimension mismatch");
    const LatticeVector zero(static_cast<std::size_t>(rho.dim), 0);
    const auto it = symbol.terms.find(zero);
    if (it == symbol.terms.end())
        return {0.0, 0.0};
    const double norm = l2_norm(rho);
    return window.hat(0.0) * (norm * norm) * it->second.eval(xi0);
}

cplx predict_zoll(double x0, const QuadraticSurd& xi0, const TorusSymbol& symbol) {
    if (symbol.dim != 1)
        throw std::invalid_argument("predict_zoll: circle prediction needs d = 1");
    if (xi0.is_zero())
        throw std::invalid_argument(
            "predict_zoll: carrier xi0 = 0 is outside the averaging hypothesis");
    const TorusSymbol averaged = average_along(symbol, {xi0});
    return evaluate(averaged, {x0}, {xi0.to_double()});
}

cplx predict_torus_average(const std::vector<double>& x0, const std::vector<QuadraticSurd>& xi0,
                           const TorusSymbol& symbol) {
    if (static_cast<int>(x0.size()) != symbol.dim || xi0.size() != x0.size())
        throw std::invalid_argument("predict_torus_average: dimension mismatch");
    if (is_resonant(xi0))
        throw std::invalid_argument(
            "predict_torus_average: resonant carrier; no closed prediction applies "
            "(resonant concentration is the mu1/mu2 regime)");
    const TorusSymbol averaged = average_along(symbol, xi0);
    std::vector<double> xi0d(xi0.size());
    for (std::size_t i = 0; i < xi0.size(); ++i)
        xi0d[i] = xi0[i].to_double();
    return evaluate(averaged, x0, xi0d);
}

double predict_dispersion(const std::vector<double>& xi0) {
    bool all_zero = true;
    for (const double v : xi0)
        if (v != 0.0)
            all_zero = false;
    if (all_zero)
        throw std::invalid_argument(
            "predict_dispersion: carrier xi0 = 0 charges {xi = 0}; outside hypothesis");
    return 0.0;
}

namespace quad_detail {

namespace {

// Orthonormal Hermite chain p_0..p_n at u (weight e^{-u^2}); returns p_n and
// p_{n-1} (for the Newton derivative p_n' = sqrt(2n) p_{n-1}) plus the
// Christoffel sum K = sum_{k<n} p_k(u)^2 when requested.
struct HermiteEval {
    double pn;
    double pn_1;
    double christoffel;
};

HermiteEval hermite_chain(int n, double u) {
    const double inv_pi4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    double pkm1 = 0.0;
    double pk = inv_pi4; // p_0
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += pk * pk;
        const double pnext =
            (u * pk * std::sqrt(2.0 / (k + 1))) - pkm1 * std::sqrt(static_cast<double>(k) / (k + 1));
        pkm1 = pk;
        pk = pnext;
    }
    return {pk, pkm1, sum};
}

} // namespace

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1)
        throw std::invalid_argument("gauss_hermite: n must be >= 1");
    nodes.clear();
    weights.clear();

    // All roots lie inside |u| < sqrt(2n+1); scan for sign changes, then
    // polish with Newton.  Scan resolution far below the minimal root gap.
    const double limit = std::sqrt(2.0 * n + 1.0);
    const int scan = 64 * n;
    double prev_u = -limit;
    double prev_p = hermite_chain(n, prev_u).pn;
    for (int i = 1; i <= scan; ++i) {
        const double u = -limit + 2.0 * limit * static_cast<double>(i) / scan;
        const double p = hermite_chain(n, u).pn;
        if ((prev_p < 0.0) != (p < 0.0) || p == 0.0) {
            double x = 0.5 * (prev_u + u);
            for (int it = 0; it < 60; ++it) {
                const auto ev = hermite_chain(n, x);
                const double deriv = std::sqrt(2.0 * n) * ev.pn_1;
                const double step = ev.pn / deriv;
                x -= step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(x)))
                    break;
            }
            nodes.push_back(x);
        }
        prev_u = u;
        prev_p = p;
    }
    if (static_cast<int>(nodes.size()) != n)
        throw std::logic_error("gauss_hermite: root scan failed");

    std::sort(nodes.begin(), nodes.end());
    weights.resize(nodes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        weights[i] = 1.0 / hermite_chain(n, nodes[i]).christoffel;
        total += weights[i];
    }
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    if (std::abs(total - sqrt_pi) > 1e-12 * sqrt_pi)
        throw std::logic_error("gauss_hermite: weight sum check failed");
}

} // namespace quad_detail

namespace {

double bump01(double u) {
    const double s2 = u * u;
    if (s2 >= 1.0)
        return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

} // namespace

PairingValue dispersion_time_average(const GaussianPacket& packet, const TestWindow& window,
                                     double x_halfwidth, double xi_scale,
                                     double tau_max, int tau_points, int ring_power) {
    const int d = packet.dim;
    if (!(x_halfwidth > 0.0) || !(xi_scale > 0.0))
        throw std::invalid_argument("dispersion_time_average: widths must be positive");
    if (std::abs(packet.width.imag()) != 0.0)
        throw std::invalid_argument("dispersion_time_average: packet must be at t = 0");
    if (tau_points < 9)
        throw std::invalid_argument("dispersion_time_average: tau grid too coarse");
    if (ring_power < 0)
        throw std::invalid_argument("dispersion_time_average: ring_power must be >= 0");

    auto profile = [ring_power](double u) {
        double b = bump01(u);
        for (int r = 0; r < ring_power; ++r)
            b *= u * u;
        return b;
    };

    const double h = packet.h;
    const double sigma = packet.sigma;
    const double var_x = h * sigma * sigma / 2.0;
    const double var_xi = h / (2.0 * sigma * sigma);
    const double wx = x_halfwidth / std::sqrt(static_cast<double>(d));

    std::vector<double> gh_nodes, gh_weights;
    quad_detail::gauss_hermite(20, gh_nodes, gh_weights);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

    // Per-axis xi grid: composite Simpson over the packet's 9-sigma window,
    // with the (tau-independent) gaussian weights folded into the Simpson
    // coefficients once.
    const int xi_panels = 768;
    const double span = 9.0 * std::sqrt(var_xi);
    struct AxisGrid {
        std::vector<double> xi;
        std::vector<double> w; // simpson weight * N(xi) * Xi-profile(xi)
        double x_center;
    };
    std::vector<AxisGrid> axes(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        auto& ax = axes[static_cast<std::size_t>(i)];
        ax.x_center = packet.x0[static_cast<std::size_t>(i)];
        const double mean = packet.xi0[static_cast<std::size_t>(i)];
        const double step = 2.0 * span / xi_panels;
        ax.xi.resize(xi_panels + 1);
        ax.w.resize(xi_panels + 1);
        const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var_xi);
        for (int jn = 0; jn <= xi_panels; ++jn) {
            const double xi = mean - span + step * jn;
            double sw = (jn == 0 || jn == xi_panels) ? 1.0 : (jn % 2 == 1 ? 4.0 : 2.0);
            sw *= step / 3.0;
            const double gauss = norm * std::exp(-0.5 * (xi - mean) * (xi - mean) / var_xi);
            const double dxi = (xi - mean) / xi_scale;
            ax.xi[static_cast<std::size_t>(jn)] = xi;
            ax.w[static_cast<std::size_t>(jn)] = sw * gauss * std::exp(-0.5 * dxi * dxi);
        }
    }

    const double y_spread = std::sqrt(2.0 * var_x);
    const double gh_reach = std::sqrt(2.0 * 20 + 1.0) * y_spread;
    auto axis_integral = [&](const AxisGrid& ax, double tau) {
        double acc = 0.0;
        for (std::size_t jn = 0; jn < ax.xi.size(); ++jn) {
            const double shift = tau * ax.xi[jn];
            if (std::abs(shift) > wx + gh_reach)
                continue; // every Gauss-Hermite node lands outside the bump
            double inner = 0.0;
            for (std::size_t g = 0; g < gh_nodes.size(); ++g) {
                const double y = ax.x_center + y_spread * gh_nodes[g] + shift;
                inner += gh_weights[g] * profile((y - ax.x_center) / wx);
            }
            acc += ax.w[jn] * inner * inv_sqrt_pi;
        }
        return acc;
    };

    // tau grid (Simpson, panel count divisible by 4 for the Richardson pass)
    int n = tau_points - 1;
    n = ((n + 3) / 4) * 4;
    const double step = 2.0 * tau_max / n;

    std::vector<double> integrand(static_cast<std::size_t>(n) + 1);
    double envelope = 0.0; // max |P| over the outer 20% of the range
    for (int i = 0; i <= n; ++i) {
        const double tau = -tau_max + step * i;
        double p = 1.0;
        for (const auto& ax : axes)
            p *= axis_integral(ax, tau);
        if (std::abs(tau) >= 0.8 * tau_max)
            envelope = std::max(envelope, std::abs(p));
        // value = int phi(t) P(t/h) dt = h * int phi(h tau) P(tau) dtau
        integrand[static_cast<std::size_t>(i)] = h * window.phi(h * tau) * p;
    }

    auto simpson = [&](int stride) {
        double acc = integrand.front() + integrand.back();
        for (int i = stride; i < n; i += stride)
            acc += integrand[static_cast<std::size_t>(i)] * ((i / stride) % 2 == 1 ? 4.0 : 2.0);
        return acc * (step * stride) / 3.0;
    };
    const double fine = simpson(1);
    const double coarse = simpson(2);

    PairingValue out;
    out.value = cplx{fine, 0.0};
    out.budget = 4.0 * std::abs(fine - coarse) / 15.0 +
                 4.0 * envelope * window.tail_mass(0.8 * h * tau_max);
    return out;
}

} // namespace wignerlab
