#include "wignerlab/symbols.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wignerlab {

namespace {

constexpr double kGaussianTruncSigmas = 8.0;

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void require_positive_scale(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("profile scale must be positive");
}

} // namespace

XiProfile XiProfile::gaussian(std::vector<double> center, double scale, cplx amplitude) {
    require_positive_scale(scale);
    XiProfile p;
    p.base = Base::gaussian;
    p.center = std::move(center);
    p.scale = scale;
    p.amplitude = amplitude;
    return p;
}

XiProfile XiProfile::bump(std::vector<double> center, double scale, cplx amplitude) {
    require_positive_scale(scale);
    XiProfile p;
    p.base = Base::bump;
    p.center = std::move(center);
    p.scale = scale;
    p.amplitude = amplitude;
    return p;
}

XiProfile XiProfile::constant_on_ball(std::vector<double> center, double scale, cplx amplitude) {
    require_positive_scale(scale);
    XiProfile p;
    p.base = Base::constant_on_ball;
    p.center = std::move(center);
    p.scale = scale;
    p.amplitude = amplitude;
    return p;
}

XiProfile XiProfile::linear_times_gaussian(std::vector<double> v, std::vector<double> center,
                                           double scale, cplx amplitude) {
    XiProfile p = gaussian(std::move(center), scale, amplitude);
    p.linear_factors.push_back(std::move(v));
    return p;
}

cplx XiProfile::eval(const std::vector<double>& xi) const {
    if (xi.size() != center.size()) throw std::invalid_argument("profile evaluated at wrong dimension");
    const double s = dist(xi, center) / scale;

    double baseval = 0.0;
    switch (base) {
        case Base::gaussian:
            // Treated as exactly zero beyond the truncation radius; the
            // neglected mass is reported via truncation_error().
            if (s > kGaussianTruncSigmas) return cplx{0.0, 0.0};
            baseval = std::exp(-0.5 * s * s);
            break;
        case Base::bump:
            if (s >= 1.0) return cplx{0.0, 0.0};
            baseval = std::exp(1.0 - 1.0 / (1.0 - s * s));
            break;
        case Base::constant_on_ball:
            if (s > 1.0) return cplx{0.0, 0.0};
            baseval = 1.0;
            break;
    }

    cplx value = amplitude * baseval;
    for (const auto& v : linear_factors) {
        double lin = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) lin += v[i] * xi[i];
        value *= lin;
    }
    return value;
}

double XiProfile::truncation_error() const {
    if (base != Base::gaussian) return 0.0;
    // Largest neglected value: |amp| e^{-32}, times the worst linear-factor
    // envelope over the (now discarded) region boundary.
    double bound = std::abs(amplitude) * std::exp(-0.5 * kGaussianTruncSigmas * kGaussianTruncSigmas);
    double reach = norm2(center) + kGaussianTruncSigmas * scale;
    for (const auto& v : linear_factors) bound *= norm2(v) * reach;
    return bound;
}

double XiProfile::support_radius() const {
    return base == Base::gaussian ? kGaussianTruncSigmas * scale : scale;
}

double XiProfile::lipschitz_bound() const {
    double sup = std::abs(amplitude);
    double lip = 0.0;
    switch (base) {
        case Base::gaussian:
            // max |d/ds e^{-s^2/2}| = e^{-1/2} at s = 1
            lip = std::abs(amplitude) * std::exp(-0.5) / scale;
            break;
        case Base::bump:
            // max slope of exp(1 - 1/(1-s^2)) is ~2.09 near s = 0.8
            lip = std::abs(amplitude) * 2.2 / scale;
            break;
        case Base::constant_on_ball:
            return std::numeric_limits<double>::infinity();
    }
    // Product rule over the effective support for each linear factor.
    double reach = norm2(center) + support_radius();
    for (const auto& v : linear_factors) {
        double vn = norm2(v);
        double factor_sup = vn * reach;
        lip = sup * vn + factor_sup * lip;
        sup *= factor_sup;
    }
    return lip;
}

bool profiles_conjugate(const XiProfile& p, const XiProfile& q) {
    return p.base == q.base && p.center == q.center && p.scale == q.scale &&
           p.linear_factors == q.linear_factors && q.amplitude == std::conj(p.amplitude);
}

TorusSymbol make_symbol(int dim, const std::vector<std::pair<LatticeVector, XiProfile>>& terms) {
    if (dim < 1) throw std::invalid_argument("symbol dimension must be >= 1");
    TorusSymbol a;
    a.dim = dim;
    for (const auto& [l, profile] : terms) {
        if (static_cast<int>(l.size()) != dim || static_cast<int>(profile.center.size()) != dim) {
            throw std::invalid_argument("symbol term dimension mismatch");
        }
        for (const auto& v : profile.linear_factors) {
            if (static_cast<int>(v.size()) != dim) {
                throw std::invalid_argument("linear factor dimension mismatch");
            }
        }
        if (!a.terms.emplace(l, profile).second) {
            throw std::invalid_argument("duplicate symbol term");
        }
    }
    // A symbol is real-valued iff c_{-l} == conj(c_l) for every term; check
    // it structurally so downstream reality assertions are meaningful.
    a.reality = true;
    for (const auto& [l, profile] : a.terms) {
        LatticeVector neg(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
        auto it = a.terms.find(neg);
        if (it == a.terms.end() || !profiles_conjugate(profile, it->second)) {
            a.reality = false;
            break;
        }
    }
    return a;
}

cplx evaluate(const TorusSymbol& symbol, const std::vector<double>& x, const std::vector<double>& xi) {
    if (static_cast<int>(x.size()) != symbol.dim || static_cast<int>(xi.size()) != symbol.dim) {
        throw std::invalid_argument("evaluate: dimension mismatch");
    }
    cplx sum{0.0, 0.0};
    for (const auto& [l, profile] : symbol.terms) {
        double theta = 0.0;
        for (int i = 0; i < symbol.dim; ++i) theta += static_cast<double>(l[i]) * x[i];
        sum += profile.eval(xi) * std::polar(1.0, theta);
    }
    return sum;
}

TorusSymbol average_along(const TorusSymbol& symbol, const std::vector<QuadraticSurd>& xi0) {
    if (static_cast<int>(xi0.size()) != symbol.dim) {
        throw std::invalid_argument("average_along: direction dimension mismatch");
    }
    bool all_zero = true;
    for (const auto& c : xi0) all_zero = all_zero && c.is_zero();
    if (all_zero) {
        throw std::invalid_argument("average_along: direction must be nonzero (trivial orbit)");
    }
    std::vector<std::pair<LatticeVector, XiProfile>> kept;
    for (const auto& [l, profile] : symbol.terms) {
        if (dot_is_zero(l, xi0)) kept.emplace_back(l, profile);
    }
    return make_symbol(symbol.dim, kept);
}

TorusSymbol poisson_bracket_with_p(const TorusSymbol& symbol) {
    std::vector<std::pair<LatticeVector, XiProfile>> out;
    for (const auto& [l, profile] : symbol.terms) {
        bool zero = true;
        for (auto li : l) zero = zero && (li == 0);
        if (zero) continue; // {c_0(xi), |xi|^2} = 0: x-independent terms are invariant
        XiProfile bracket = profile;
        std::vector<double> v(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) v[i] = static_cast<double>(l[i]);
        bracket.linear_factors.push_back(std::move(v));
        bracket.amplitude *= cplx{0.0, -2.0};
        out.emplace_back(l, bracket);
    }
    return make_symbol(symbol.dim, out);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

nlohmann::json profile_to_json(const XiProfile& p) {
    nlohmann::json j;
    if (p.linear_factors.empty()) {
        switch (p.base) {
            case XiProfile::Base::gaussian: j["family"] = "gaussian"; break;
            case XiProfile::Base::bump: j["family"] = "bump"; break;
            case XiProfile::Base::constant_on_ball: j["family"] = "constant-on-ball"; break;
        }
    } else if (p.base == XiProfile::Base::gaussian && p.linear_factors.size() == 1) {
        j["family"] = "linear-times-gaussian";
        j["v"] = p.linear_factors[0];
    } else {
        j["family"] = "polynomial-times-profile";
        j["factors"] = p.linear_factors;
        j["base"] = static_cast<int>(p.base);
    }
    j["center"] = p.center;
    j["scale"] = p.scale;
    j["amp_re"] = p.amplitude.real();
    j["amp_im"] = p.amplitude.imag();
    return j;
}

XiProfile profile_from_json(const nlohmann::json& j) {
    auto center = j.at("center").get<std::vector<double>>();
    double scale = j.at("scale").get<double>();
    cplx amp{j.at("amp_re").get<double>(), j.at("amp_im").get<double>()};
    std::string family = j.at("family").get<std::string>();
    if (family == "gaussian") return XiProfile::gaussian(center, scale, amp);
    if (family == "bump") return XiProfile::bump(center, scale, amp);
    if (family == "constant-on-ball") return XiProfile::constant_on_ball(center, scale, amp);
    if (family == "linear-times-gaussian") {
        return XiProfile::linear_times_gaussian(j.at("v").get<std::vector<double>>(), center, scale, amp);
    }
    if (family == "polynomial-times-profile") {
        XiProfile p;
        p.base = static_cast<XiProfile::Base>(j.at("base").get<int>());
        p.center = center;
        p.scale = scale;
        p.amplitude = amp;
        p.linear_factors = j.at("factors").get<std::vector<std::vector<double>>>();
        return p;
    }
    throw std::invalid_argument("unknown profile family: " + family);
}

} // namespace

std::string symbol_to_json(const TorusSymbol& symbol) {
    nlohmann::json j;
    j["dim"] = symbol.dim;
    j["terms"] = nlohmann::json::array();
    for (const auto& [l, profile] : symbol.terms) {
        nlohmann::json term;
        term["l"] = l;
        term["profile"] = profile_to_json(profile);
        j["terms"].push_back(term);
    }
    return j.dump(2);
}

TorusSymbol symbol_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::pair<LatticeVector, XiProfile>> terms;
    for (const auto& term : j.at("terms")) {
        terms.emplace_back(term.at("l").get<LatticeVector>(), profile_from_json(term.at("profile")));
    }
    return make_symbol(j.at("dim").get<int>(), terms);
}

} // namespace wignerlab
