#include "wignerlab/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wignerlab/exact.hpp"

#include <nlohmann/json.hpp>

namespace wignerlab {

LatticeState make_state(int dim, const std::vector<std::pair<LatticeVector, cplx>>& modes) {
    if (dim < 1) throw std::invalid_argument("state dimension must be >= 1");
    LatticeState s;
    s.dim = dim;
    for (const auto& [k, amp] : modes) {
        if (static_cast<int>(k.size()) != dim) {
            throw std::invalid_argument("mode index dimension mismatch");
        }
        s.modes[k] += amp;
    }
    return s;
}

double l2_norm(const LatticeState& state) {
    double sum = 0.0;
    for (const auto& [k, amp] : state.modes) sum += std::norm(amp);
    return std::sqrt(sum);
}

std::map<LatticeVector, cplx> density_coefficients(const LatticeState& state) {
    std::map<LatticeVector, cplx> out;
    const double scale = std::pow(2.0 * std::numbers::pi, -state.dim);
    for (const auto& [j1, a1] : state.modes) {
        for (const auto& [j2, a2] : state.modes) {
            LatticeVector l(state.dim);
            for (int i = 0; i < state.dim; ++i) l[i] = checked_sub(j1[i], j2[i]);
            out[l] += scale * a1 * std::conj(a2);
        }
    }
    return out;
}

LatticeState modulate(const LatticeState& state, const LatticeVector& shift) {
    if (static_cast<int>(shift.size()) != state.dim) {
        throw std::invalid_argument("modulate: shift dimension mismatch");
    }
    LatticeState out;
    out.dim = state.dim;
    for (const auto& [k, amp] : state.modes) {
        LatticeVector moved(state.dim);
        for (int i = 0; i < state.dim; ++i) moved[i] = checked_add(k[i], shift[i]);
        out.modes[moved] = amp;
    }
    return out;
}

double mode_radius(const LatticeState& state) {
    double r2 = 0.0;
    for (const auto& [k, amp] : state.modes) {
        double n2 = 0.0;
        for (auto ki : k) n2 += static_cast<double>(ki) * static_cast<double>(ki);
        r2 = std::max(r2, n2);
    }
    return std::sqrt(r2);
}

std::vector<cplx> sample_on_grid(const LatticeState& state, int points_per_axis) {
    const int N = points_per_axis;
    std::int64_t max_abs = 0;
    for (const auto& [k, amp] : state.modes) {
        for (auto ki : k) max_abs = std::max(max_abs, ki < 0 ? -ki : ki);
    }
    if (N < 2 * max_abs + 1) {
        throw std::invalid_argument(
            "sample_on_grid: " + std::to_string(N) + " points per axis alias modes up to |k|=" +
            std::to_string(max_abs) + " (need at least " + std::to_string(2 * max_abs + 1) + ")");
    }

    const int d = state.dim;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(N);

    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * d);
    std::vector<cplx> out(total, cplx{0.0, 0.0});
    std::vector<std::int64_t> m(d, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        cplx value{0.0, 0.0};
        for (const auto& [k, amp] : state.modes) {
            // k.x = 2pi (k.m)/N; reducing the integer k.m mod N first keeps
            // the angle exact even when k is ladder-sized (~1e6).
            std::int64_t km = 0;
            for (int i = 0; i < d; ++i) km = checked_add(km, checked_mul(k[i], m[i]));
            std::int64_t red = ((km % N) + N) % N;
            double theta = 2.0 * std::numbers::pi * static_cast<double>(red) / N;
            value += amp * std::polar(1.0, theta);
        }
        out[idx] = norm * value;
        for (int i = d - 1; i >= 0; --i) { // row-major increment
            if (++m[i] < N) break;
            m[i] = 0;
        }
    }
    return out;
}

std::string state_to_json(const LatticeState& state) {
    nlohmann::json j;
    j["dim"] = state.dim;
    j["modes"] = nlohmann::json::array();
    for (const auto& [k, amp] : state.modes) {
        nlohmann::json mode;
        mode["k"] = k;
        mode["re"] = amp.real();
        mode["im"] = amp.imag();
        j["modes"].push_back(mode);
    }
    return j.dump(2);
}

LatticeState state_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::pair<LatticeVector, cplx>> modes;
    for (const auto& mode : j.at("modes")) {
        modes.emplace_back(mode.at("k").get<LatticeVector>(),
                           cplx{mode.at("re").get<double>(), mode.at("im").get<double>()});
    }
    return make_state(j.at("dim").get<int>(), modes);
}

} // namespace wignerlab
