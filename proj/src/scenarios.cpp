#include "wignerlab/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "wignerlab/predictions.hpp"

namespace wignerlab {

// ---------------------------------------------------------------------------
// Names, labels, formatting
// ---------------------------------------------------------------------------

const char* scenario_name(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::zoll_circle: return "zoll-circle";
    case ScenarioKind::torus_nonresonant: return "torus-nonresonant";
    case ScenarioKind::resonant_pair: return "resonant-pair";
    case ScenarioKind::euclid_dispersion: return "euclid-dispersion";
    case ScenarioKind::invariance_residual: return "invariance-residual";
    case ScenarioKind::egorov_invariant: return "egorov-invariant";
    case ScenarioKind::marginal_consistency: return "marginal-consistency";
    case ScenarioKind::oracle_crosscheck: return "oracle-crosscheck";
    }
    throw std::logic_error("scenario_name: unknown kind");
}

ScenarioKind scenario_from_name(const std::string& name) {
    static const std::pair<const char*, ScenarioKind> table[] = {
        {"zoll-circle", ScenarioKind::zoll_circle},
        {"torus-nonresonant", ScenarioKind::torus_nonresonant},
        {"resonant-pair", ScenarioKind::resonant_pair},
        {"euclid-dispersion", ScenarioKind::euclid_dispersion},
        {"invariance-residual", ScenarioKind::invariance_residual},
        {"egorov-invariant", ScenarioKind::egorov_invariant},
        {"marginal-consistency", ScenarioKind::marginal_consistency},
        {"oracle-crosscheck", ScenarioKind::oracle_crosscheck},
    };
    for (const auto& [n, k] : table)
        if (name == n)
            return k;
    throw std::invalid_argument("unknown scenario name: \"" + name + "\"");
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string scale_label(const TimeScale& scale) {
    char buf[64];
    switch (scale.kind) {
    case TimeScale::Kind::reciprocal:
        return "reciprocal";
    case TimeScale::Kind::power:
        std::snprintf(buf, sizeof(buf), "power(%g)", scale.gamma);
        return buf;
    case TimeScale::Kind::constant:
        std::snprintf(buf, sizeof(buf), "const(%g)", scale.fixed_alpha);
        return buf;
    case TimeScale::Kind::table:
        return "table";
    }
    return "scale";
}

// ---------------------------------------------------------------------------
// Parallel row evaluation.  Tasks land in preassigned slots so the output
// order is the config order regardless of scheduling; WIGNERLAB_THREADS caps
// the fan-out (0 or unset -> hardware concurrency).
// ---------------------------------------------------------------------------

std::size_t thread_cap() {
    if (const char* env = std::getenv("WIGNERLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

void run_tasks(std::vector<std::function<void()>>& tasks) {
    const std::size_t want = std::min(thread_cap(), tasks.size());
    if (want <= 1) {
        for (auto& task : tasks)
            task();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            try {
                tasks[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (std::size_t i = 0; i < want; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

QuadraticSurd surd_from_json(const nlohmann::json& j) {
    if (j.is_array()) {
        if (j.size() != 4)
            throw std::invalid_argument("surd array must be [p, q, m, r]");
        return QuadraticSurd::make(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(),
                                   j[2].get<std::int64_t>(), j[3].get<std::int64_t>());
    }
    if (j.is_object()) {
        return QuadraticSurd::make(j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>(),
                                   j.at("m").get<std::int64_t>(), j.at("r").get<std::int64_t>());
    }
    if (j.is_number_integer()) {
        return QuadraticSurd::integer(j.get<std::int64_t>());
    }
    throw std::invalid_argument("surd must be an integer, [p,q,m,r], or {p,q,m,r}");
}

std::vector<QuadraticSurd> surd_vector_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string(what) + " must be a non-empty array of surds");
    std::vector<QuadraticSurd> out;
    out.reserve(j.size());
    for (const auto& item : j)
        out.push_back(surd_from_json(item));
    return out;
}

LatticeState state_from_json_obj(const nlohmann::json& j) { return state_from_json(j.dump()); }

TimeScale scale_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "reciprocal")
        return TimeScale::reciprocal();
    if (kind == "power")
        return TimeScale::power(j.at("gamma").get<double>());
    if (kind == "constant")
        return TimeScale::constant(j.at("alpha").get<double>());
    if (kind == "table") {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& row : j.at("pairs"))
            pairs.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        return TimeScale::table(std::move(pairs));
    }
    throw std::invalid_argument("unknown time-scale kind: \"" + kind + "\"");
}

TestWindow window_from_json(const nlohmann::json& j) {
    return TestWindow::from_name(j.at("family").get<std::string>(), j.at("R").get<double>());
}

SemiclassicalFamily family_from_json(const nlohmann::json& j) {
    SemiclassicalFamily fam;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "wave-packet") {
        fam.kind = FamilyKind::wave_packet;
        fam.x0 = j.at("x0").get<std::vector<double>>();
        fam.xi0_real = j.at("xi0").get<std::vector<double>>();
        fam.h_grid = j.at("h_grid").get<std::vector<double>>();
        if (fam.h_grid.empty())
            throw std::invalid_argument("wave-packet family needs a non-empty h_grid");
        fam.n_max = static_cast<int>(fam.h_grid.size());
        return fam;
    }
    if (kind == "eigenmode") {
        fam.kind = FamilyKind::eigenmode;
        fam.k0 = j.at("k0").get<LatticeVector>();
        if (j.contains("h_grid"))
            fam.h_grid = j.at("h_grid").get<std::vector<double>>();
        fam.n_max = fam.h_grid.empty() ? 1 : static_cast<int>(fam.h_grid.size());
        return fam;
    }
    if (kind == "plane-wave" || kind == "resonant") {
        fam.kind = kind == "plane-wave" ? FamilyKind::plane_wave : FamilyKind::resonant;
        fam.rho = state_from_json_obj(j.at("rho"));
        fam.xi0_int = j.at("xi0_int").get<std::vector<std::int64_t>>();
        const auto theta0 = surd_vector_from_json(j.at("theta0_surd"), "theta0_surd");
        const int depth = j.at("depth").get<int>();
        fam.stream = RationalApproxStream::make(theta0, depth);
        fam.ladder = LcmLadder::build(fam.stream, depth);
        fam.n_max = fam.ladder.depth();
        return fam;
    }
    throw std::invalid_argument("unknown family kind: \"" + kind + "\"");
}

double default_tolerance(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::zoll_circle: return 0.25;
    case ScenarioKind::torus_nonresonant: return 0.25;
    case ScenarioKind::resonant_pair: return 1e-3;
    case ScenarioKind::euclid_dispersion: return 0.05;
    case ScenarioKind::invariance_residual: return 0.5;
    case ScenarioKind::egorov_invariant: return 1e-12;
    case ScenarioKind::marginal_consistency: return 1e-12;
    case ScenarioKind::oracle_crosscheck: return 1e-6;
    }
    return 1e-6;
}

void require(bool condition, const std::string& message) {
    if (!condition)
        throw std::invalid_argument(message);
}

bool is_zero_vector(const LatticeVector& l) {
    return std::all_of(l.begin(), l.end(), [](std::int64_t v) { return v == 0; });
}

} // namespace

ScenarioConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    try {
        cfg.schema_version = j.at("schema_version").get<int>();
        require(cfg.schema_version == 1, "unsupported schema_version (expected 1)");
        cfg.kind = scenario_from_name(j.at("scenario").get<std::string>());

        if (j.contains("window"))
            cfg.window = window_from_json(j.at("window"));
        if (j.contains("scale"))
            cfg.scale = scale_from_json(j.at("scale"));
        cfg.tolerance = j.value("tolerance", default_tolerance(cfg.kind));
        require(cfg.tolerance > 0.0, "tolerance must be positive");
        cfg.output_basename = j.value("output_basename", std::string(scenario_name(cfg.kind)));

        if (j.contains("symbols")) {
            for (const auto& entry : j.at("symbols")) {
                NamedSymbol named;
                named.id = entry.at("id").get<std::string>();
                require(!named.id.empty() &&
                            named.id.find_first_of(",\"\n\r") == std::string::npos,
                        "symbol id must be non-empty and CSV-safe");
                named.symbol = symbol_from_json(entry.at("symbol").dump());
                cfg.symbols.push_back(std::move(named));
            }
        }

        const bool needs_symbols = cfg.kind != ScenarioKind::euclid_dispersion;
        require(!needs_symbols || !cfg.symbols.empty(), "empty symbol list");

        switch (cfg.kind) {
        case ScenarioKind::zoll_circle: {
            cfg.x0 = j.at("x0").get<std::vector<double>>();
            require(cfg.x0.size() == 1, "zoll-circle runs on the circle: x0 must have 1 entry");
            cfg.xi0_surd = surd_vector_from_json(j.at("xi0_surd"), "xi0_surd");
            require(cfg.xi0_surd.size() == 1 && !cfg.xi0_surd[0].is_zero(),
                    "zoll-circle needs a single nonzero xi0 surd");
            cfg.h_grid = j.at("h_grid").get<std::vector<double>>();
            require(!cfg.h_grid.empty(), "h_grid must be non-empty");
            for (const auto& s : cfg.symbols)
                require(s.symbol.dim == 1, "zoll-circle symbols must have dim 1");
            break;
        }
        case ScenarioKind::torus_nonresonant: {
            cfg.x0 = j.at("x0").get<std::vector<double>>();
            cfg.xi0_surd = surd_vector_from_json(j.at("xi0_surd"), "xi0_surd");
            require(cfg.xi0_surd.size() == cfg.x0.size(), "x0/xi0_surd dimension mismatch");
            require(!is_resonant(cfg.xi0_surd),
                    "torus-nonresonant requires a non-resonant carrier direction");
            cfg.h_grid = j.at("h_grid").get<std::vector<double>>();
            require(!cfg.h_grid.empty(), "h_grid must be non-empty");
            for (const auto& s : cfg.symbols)
                require(s.symbol.dim == static_cast<int>(cfg.x0.size()),
                        "symbol dimension must match x0");
            break;
        }
        case ScenarioKind::resonant_pair: {
            cfg.rho = state_from_json_obj(j.at("rho"));
            cfg.xi0_int = j.at("xi0_int").get<std::vector<std::int64_t>>();
            cfg.theta0 = surd_vector_from_json(j.at("theta0_surd"), "theta0_surd");
            cfg.depth = j.at("depth").get<int>();
            require(cfg.depth >= 1, "depth must be >= 1");
            require(static_cast<int>(cfg.xi0_int.size()) == cfg.rho.dim &&
                        cfg.theta0.size() == cfg.xi0_int.size(),
                    "rho/xi0_int/theta0_surd dimensions must agree");
            require(cfg.scale.kind == TimeScale::Kind::reciprocal,
                    "resonant-pair predictions assume the reciprocal time scale");
            for (const auto& s : cfg.symbols)
                require(s.symbol.dim == cfg.rho.dim, "symbol dimension must match rho");
            break;
        }
        case ScenarioKind::euclid_dispersion: {
            cfg.x0 = j.at("x0").get<std::vector<double>>();
            cfg.xi0_real = j.at("xi0").get<std::vector<double>>();
            require(cfg.xi0_real.size() == cfg.x0.size(), "x0/xi0 dimension mismatch");
            predict_dispersion(cfg.xi0_real); // rejects the zero carrier
            cfg.sigma = j.value("sigma", 1.0);
            require(cfg.sigma > 0.0, "sigma must be positive");
            cfg.h_grid = j.at("h_grid").get<std::vector<double>>();
            require(!cfg.h_grid.empty(), "h_grid must be non-empty");
            cfg.x_halfwidth = j.value("x_halfwidth", 0.5);
            cfg.xi_scale = j.value("xi_scale", 2.0);
            require(cfg.x_halfwidth > 0.0 && cfg.xi_scale > 0.0,
                    "x_halfwidth and xi_scale must be positive");
            require(cfg.scale.kind == TimeScale::Kind::reciprocal,
                    "euclid-dispersion is posed at the reciprocal time scale");
            break;
        }
        case ScenarioKind::invariance_residual: {
            cfg.family = family_from_json(j.at("family"));
            require(cfg.symbols.size() == 1,
                    "invariance-residual tabulates exactly one symbol");
            if (j.contains("depths"))
                cfg.depths = j.at("depths").get<std::vector<int>>();
            else
                for (int n = 1; n <= cfg.family.n_max; ++n)
                    cfg.depths.push_back(n);
            require(!cfg.depths.empty(), "depths must be non-empty");
            for (int n : cfg.depths)
                require(n >= 1 && n <= cfg.family.n_max, "depth out of family range");
            break;
        }
        case ScenarioKind::egorov_invariant: {
            cfg.family = family_from_json(j.at("family"));
            if (j.contains("depths"))
                cfg.depths = j.at("depths").get<std::vector<int>>();
            else
                cfg.depths.push_back(cfg.family.n_max);
            for (int n : cfg.depths)
                require(n >= 1 && n <= cfg.family.n_max, "depth out of family range");
            if (j.contains("scales"))
                for (const auto& s : j.at("scales"))
                    cfg.scales.push_back(scale_from_json(s));
            else
                cfg.scales.push_back(cfg.scale);
            cfg.time_points = j.value("time_points", 100);
            require(cfg.time_points >= 2, "time_points must be >= 2");
            if (j.contains("time_range")) {
                const auto range = j.at("time_range").get<std::vector<double>>();
                require(range.size() == 2 && range[0] < range[1],
                        "time_range must be [lo, hi] with lo < hi");
                cfg.time_lo = range[0];
                cfg.time_hi = range[1];
            }
            for (const auto& s : cfg.symbols)
                for (const auto& [l, profile] : s.symbol.terms)
                    require(is_zero_vector(l),
                            "egorov-invariant symbols must be xi-only (l = 0 terms only): "
                            "symbol \"" + s.id + "\" rejected");
            break;
        }
        case ScenarioKind::marginal_consistency: {
            cfg.family = family_from_json(j.at("family"));
            if (j.contains("depths"))
                cfg.depths = j.at("depths").get<std::vector<int>>();
            else
                for (int n = 1; n <= cfg.family.n_max; ++n)
                    cfg.depths.push_back(n);
            for (int n : cfg.depths)
                require(n >= 1 && n <= cfg.family.n_max, "depth out of family range");
            if (j.contains("times"))
                cfg.times = j.at("times").get<std::vector<double>>();
            else
                cfg.times = {0.0, 0.7};
            require(!cfg.times.empty(), "times must be non-empty");
            for (const auto& s : cfg.symbols)
                for (const auto& [l, profile] : s.symbol.terms)
                    require(profile.base == XiProfile::Base::constant_on_ball &&
                                profile.linear_factors.empty(),
                            "marginal-consistency symbols must be x-only "
                            "(constant-on-ball profiles): symbol \"" + s.id + "\" rejected");
            break;
        }
        case ScenarioKind::oracle_crosscheck: {
            cfg.state = state_from_json_obj(j.at("state"));
            cfg.h = j.at("h").get<double>();
            require(cfg.h > 0.0, "h must be positive");
            cfg.oracle_T = j.value("oracle_T", 2000.0);
            cfg.oracle_dt = j.value("oracle_dt", 0.01);
            require(cfg.oracle_T > 0.0 && cfg.oracle_dt > 0.0 && cfg.oracle_dt < cfg.oracle_T,
                    "need 0 < oracle_dt < oracle_T");
            for (const auto& s : cfg.symbols) {
                require(s.symbol.dim == cfg.state.dim, "symbol dimension must match state");
                require(s.symbol.reality,
                        "oracle-crosscheck symbols must be reality-flagged so the "
                        "predicted column is well-defined: symbol \"" + s.id + "\" rejected");
            }
            break;
        }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config field error: ") + e.what());
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Row machinery
// ---------------------------------------------------------------------------

namespace {

ReportRow finish_row(ReportRow row, double tolerance) {
    row.abs_error = std::abs(row.value - cplx{row.predicted, 0.0});
    row.pass = row.abs_error <= std::max(row.budget, tolerance);
    return row;
}

ScenarioReport assemble(const ScenarioConfig& cfg, std::vector<ReportRow> rows) {
    ScenarioReport report;
    report.scenario = scenario_name(cfg.kind);
    report.rows = std::move(rows);
    for (const auto& row : report.rows) {
        report.max_abs_error = std::max(report.max_abs_error, row.abs_error);
        report.all_pass = report.all_pass && row.pass;
    }
    return report;
}

} // namespace

std::vector<ResidualEntry> invariance_residual(const SemiclassicalFamily& family,
                                               const TorusSymbol& symbol,
                                               const TestWindow& window, const TimeScale& scale,
                                               const std::vector<int>& depths) {
    const TorusSymbol bracket = poisson_bracket_with_p(symbol);
    std::vector<ResidualEntry> out(depths.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
        tasks.push_back([&, i] {
            const int n = depths[i];
            const auto [h, state] = family.emit(n);
            const PairingValue pv = pairing_time_averaged(state, bracket, h, scale, window);
            ResidualEntry e;
            e.n = n;
            e.h = h;
            e.residual = std::abs(pv.value);
            e.residual_alpha = e.residual * scale.alpha(h);
            out[i] = e;
        });
    }
    run_tasks(tasks);
    return out;
}

double egorov_invariant_check(const LatticeState& state, double h, const TimeScale& scale,
                              const TorusSymbol& symbol, int points, double t_lo, double t_hi) {
    for (const auto& [l, profile] : symbol.terms)
        if (!is_zero_vector(l))
            throw std::invalid_argument(
                "egorov_invariant_check: symbol has l != 0 terms (not flow-invariant)");
    if (points < 2 || !(t_lo < t_hi))
        throw std::invalid_argument("egorov_invariant_check: bad time grid");

    const cplx base = pairing_instantaneous(state, symbol, h).value;
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (points - 1);
        const LatticeState evolved = evolve_torus(state, h, scale, t);
        const cplx value = pairing_instantaneous(evolved, symbol, h).value;
        worst = std::max(worst, std::abs(value - base));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Scenario bodies
// ---------------------------------------------------------------------------

namespace {

// zoll-circle and torus-nonresonant share the wave-packet-vs-average shape.
ScenarioReport run_packet_average(const ScenarioConfig& cfg) {
    const bool circle = cfg.kind == ScenarioKind::zoll_circle;
    std::vector<double> xi0d(cfg.xi0_surd.size());
    for (std::size_t i = 0; i < cfg.xi0_surd.size(); ++i)
        xi0d[i] = cfg.xi0_surd[i].to_double();

    const std::size_t count = cfg.h_grid.size() * cfg.symbols.size();
    std::vector<ReportRow> rows(count);
    std::vector<std::function<void()>> tasks;
    tasks.reserve(count);
    for (std::size_t hi = 0; hi < cfg.h_grid.size(); ++hi) {
        for (std::size_t si = 0; si < cfg.symbols.size(); ++si) {
            const std::size_t slot = hi * cfg.symbols.size() + si;
            tasks.push_back([&, hi, si, slot] {
                const double h = cfg.h_grid[hi];
                const auto& named = cfg.symbols[si];
                const LatticeState packet = wave_packet_torus(cfg.x0, xi0d, h);
                const PairingValue pv =
                    pairing_time_averaged(packet, named.symbol, h, cfg.scale, cfg.window);
                const cplx predicted =
                    circle ? predict_zoll(cfg.x0[0], cfg.xi0_surd[0], named.symbol)
                           : predict_torus_average(cfg.x0, cfg.xi0_surd, named.symbol);
                ReportRow row;
                row.scenario = scenario_name(cfg.kind);
                row.n = static_cast<int>(hi) + 1;
                row.h = h;
                row.alpha = cfg.scale.alpha(h);
                row.t = "averaged";
                row.symbol_id = named.id;
                row.value = pv.value;
                row.budget = pv.budget;
                row.predicted = predicted.real();
                rows[slot] = finish_row(std::move(row), cfg.tolerance);
            });
        }
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

ScenarioReport run_resonant_pair(const ScenarioConfig& cfg) {
    const auto stream = RationalApproxStream::make(cfg.theta0, cfg.depth);
    const auto ladder = LcmLadder::build(stream, cfg.depth);
    const int n = ladder.depth();
    const auto [h_u, u_state] = plane_wave_family(cfg.rho, cfg.xi0_int, ladder, n);
    const auto [h_v, v_state] = resonant_family(cfg.rho, cfg.xi0_int, stream, ladder, n);

    std::vector<double> xi0d(cfg.xi0_int.size());
    for (std::size_t i = 0; i < cfg.xi0_int.size(); ++i)
        xi0d[i] = static_cast<double>(cfg.xi0_int[i]);

    const std::size_t count = 2 * cfg.symbols.size();
    std::vector<ReportRow> rows(count);
    std::vector<std::function<void()>> tasks;
    tasks.reserve(count);
    for (std::size_t si = 0; si < cfg.symbols.size(); ++si) {
        for (int which = 0; which < 2; ++which) {
            const std::size_t slot = 2 * si + static_cast<std::size_t>(which);
            tasks.push_back([&, si, which, slot, n] {
                const auto& named = cfg.symbols[si];
                const bool is_u = which == 0;
                const auto& state = is_u ? u_state : v_state;
                const double h = is_u ? h_u : h_v;
                const PairingValue pv =
                    pairing_time_averaged(state, named.symbol, h, cfg.scale, cfg.window);
                const cplx predicted =
                    is_u ? predict_mu1(cfg.rho, cfg.xi0_int, named.symbol, cfg.window)
                         : predict_mu2(cfg.rho, xi0d, named.symbol, cfg.window);
                ReportRow row;
                row.scenario = scenario_name(cfg.kind);
                row.n = n;
                row.h = h;
                row.alpha = cfg.scale.alpha(h);
                row.t = "averaged";
                row.symbol_id = (is_u ? "u:" : "v:") + named.id;
                row.value = pv.value;
                row.budget = pv.budget;
                row.predicted = predicted.real();
                rows[slot] = finish_row(std::move(row), cfg.tolerance);
            });
        }
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

ScenarioReport run_euclid_dispersion(const ScenarioConfig& cfg) {
    std::vector<ReportRow> rows(cfg.h_grid.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(rows.size());
    for (std::size_t hi = 0; hi < cfg.h_grid.size(); ++hi) {
        tasks.push_back([&, hi] {
            const double h = cfg.h_grid[hi];
            const GaussianPacket packet = GaussianPacket::make(cfg.x0, cfg.xi0_real, cfg.sigma, h);
            const PairingValue pv =
                dispersion_time_average(packet, cfg.window, cfg.x_halfwidth, cfg.xi_scale);
            ReportRow row;
            row.scenario = scenario_name(cfg.kind);
            row.n = static_cast<int>(hi) + 1;
            row.h = h;
            row.alpha = cfg.scale.alpha(h);
            row.t = "averaged";
            row.symbol_id = "separable-bump";
            row.value = pv.value;
            row.budget = pv.budget;
            row.predicted = predict_dispersion(cfg.xi0_real);
            rows[hi] = finish_row(std::move(row), cfg.tolerance);
        });
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

ScenarioReport run_invariance_residual(const ScenarioConfig& cfg) {
    const auto& named = cfg.symbols.front();
    const TorusSymbol bracket = poisson_bracket_with_p(named.symbol);

    std::vector<ReportRow> rows(cfg.depths.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(rows.size());
    for (std::size_t i = 0; i < cfg.depths.size(); ++i) {
        tasks.push_back([&, i] {
            const int n = cfg.depths[i];
            const auto [h, state] = cfg.family.emit(n);
            const PairingValue pv =
                pairing_time_averaged(state, bracket, h, cfg.scale, cfg.window);
            ReportRow row;
            row.scenario = scenario_name(cfg.kind);
            row.n = n;
            row.h = h;
            row.alpha = cfg.scale.alpha(h);
            row.t = "averaged";
            row.symbol_id = named.id;
            row.value = pv.value;
            row.budget = pv.budget;
            row.predicted = 0.0;
            rows[i] = finish_row(std::move(row), cfg.tolerance);
        });
    }
    run_tasks(tasks);
    ScenarioReport report = assemble(cfg, std::move(rows));
    report.residual_alpha.reserve(report.rows.size());
    for (const auto& row : report.rows)
        report.residual_alpha.push_back(std::abs(row.value) * row.alpha);
    return report;
}

ScenarioReport run_egorov_invariant(const ScenarioConfig& cfg) {
    struct Member {
        int n;
        double h;
        LatticeState state;
    };
    std::vector<Member> members;
    for (int n : cfg.depths) {
        auto [h, state] = cfg.family.emit(n);
        members.push_back({n, h, std::move(state)});
    }

    const std::size_t count =
        cfg.scales.size() * members.size() * cfg.symbols.size() *
        static_cast<std::size_t>(cfg.time_points);
    std::vector<ReportRow> rows(count);
    std::vector<std::function<void()>> tasks;
    std::size_t slot = 0;
    for (const auto& sc : cfg.scales) {
        for (const auto& member : members) {
            for (const auto& named : cfg.symbols) {
                const cplx base =
                    pairing_instantaneous(member.state, named.symbol, member.h).value;
                for (int ti = 0; ti < cfg.time_points; ++ti) {
                    tasks.push_back([&, base, ti, slot] {
                        const double t =
                            cfg.time_lo + (cfg.time_hi - cfg.time_lo) *
                                              static_cast<double>(ti) / (cfg.time_points - 1);
                        const LatticeState evolved = evolve_torus(member.state, member.h, sc, t);
                        const cplx value =
                            pairing_instantaneous(evolved, named.symbol, member.h).value;
                        ReportRow row;
                        row.scenario = scenario_name(cfg.kind);
                        row.n = member.n;
                        row.h = member.h;
                        row.alpha = sc.alpha(member.h);
                        row.t = fmt17(t);
                        row.symbol_id = named.id + "@" + scale_label(sc);
                        row.value = value;
                        row.budget = 0.0;
                        row.predicted = base.real();
                        rows[slot] = finish_row(std::move(row), cfg.tolerance);
                    });
                    ++slot;
                }
            }
        }
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

ScenarioReport run_marginal_consistency(const ScenarioConfig& cfg) {
    struct Member {
        int n;
        double h;
        LatticeState state;
    };
    std::vector<Member> members;
    for (int n : cfg.depths) {
        auto [h, state] = cfg.family.emit(n);
        members.push_back({n, h, std::move(state)});
    }

    const std::size_t count = members.size() * cfg.times.size() * cfg.symbols.size();
    std::vector<ReportRow> rows(count);
    std::vector<std::function<void()>> tasks;
    std::size_t slot = 0;
    for (const auto& member : members) {
        for (const double t : cfg.times) {
            for (const auto& named : cfg.symbols) {
                tasks.push_back([&, t, slot, &member = member, &named = named] {
                    const LatticeState evolved = evolve_torus(member.state, member.h, cfg.scale, t);
                    const cplx value =
                        pairing_instantaneous(evolved, named.symbol, member.h).value;
                    const cplx density = pairing_position_density(evolved, named.symbol).value;
                    ReportRow row;
                    row.scenario = scenario_name(cfg.kind);
                    row.n = member.n;
                    row.h = member.h;
                    row.alpha = cfg.scale.alpha(member.h);
                    row.t = fmt17(t);
                    row.symbol_id = named.id;
                    row.value = value;
                    row.budget = 0.0;
                    row.predicted = density.real();
                    rows[slot] = finish_row(std::move(row), cfg.tolerance);
                });
                ++slot;
            }
        }
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

ScenarioReport run_oracle_crosscheck(const ScenarioConfig& cfg) {
    std::vector<ReportRow> rows(cfg.symbols.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(rows.size());
    for (std::size_t si = 0; si < cfg.symbols.size(); ++si) {
        tasks.push_back([&, si] {
            const auto& named = cfg.symbols[si];
            const PairingValue closed =
                pairing_time_averaged(cfg.state, named.symbol, cfg.h, cfg.scale, cfg.window);
            const PairingValue oracle = oracle_time_quadrature(
                cfg.state, named.symbol, cfg.h, cfg.scale, cfg.window, cfg.oracle_T, cfg.oracle_dt);
            ReportRow row;
            row.scenario = scenario_name(cfg.kind);
            row.n = 1;
            row.h = cfg.h;
            row.alpha = cfg.scale.alpha(cfg.h);
            row.t = "averaged";
            row.symbol_id = named.id;
            row.value = closed.value;
            row.budget = closed.budget + oracle.budget;
            row.predicted = oracle.value.real();
            rows[si] = finish_row(std::move(row), cfg.tolerance);
        });
    }
    run_tasks(tasks);
    return assemble(cfg, std::move(rows));
}

} // namespace

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
    case ScenarioKind::zoll_circle:
    case ScenarioKind::torus_nonresonant:
        return run_packet_average(cfg);
    case ScenarioKind::resonant_pair:
        return run_resonant_pair(cfg);
    case ScenarioKind::euclid_dispersion:
        return run_euclid_dispersion(cfg);
    case ScenarioKind::invariance_residual:
        return run_invariance_residual(cfg);
    case ScenarioKind::egorov_invariant:
        return run_egorov_invariant(cfg);
    case ScenarioKind::marginal_consistency:
        return run_marginal_consistency(cfg);
    case ScenarioKind::oracle_crosscheck:
        return run_oracle_crosscheck(cfg);
    }
    throw std::logic_error("run_scenario: unknown kind");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string report_to_csv(const ScenarioReport& report) {
    std::string out =
        "scenario,n,h,alpha,t,symbol_id,value_re,value_im,budget,predicted,abs_error,pass\n";
    for (const auto& row : report.rows) {
        out += row.scenario;
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += fmt17(row.h);
        out += ',';
        out += fmt17(row.alpha);
        out += ',';
        out += row.t;
        out += ',';
        out += row.symbol_id;
        out += ',';
        out += fmt17(row.value.real());
        out += ',';
        out += fmt17(row.value.imag());
        out += ',';
        out += fmt17(row.budget);
        out += ',';
        out += fmt17(row.predicted);
        out += ',';
        out += fmt17(row.abs_error);
        out += ',';
        out += row.pass ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string report_summary_json(const ScenarioReport& report) {
    nlohmann::json j;
    j["scenario"] = report.scenario;
    j["rows"] = report.rows.size();
    j["max_abs_error"] = report.max_abs_error;
    j["all_pass"] = report.all_pass;
    if (!report.residual_alpha.empty())
        j["residual_alpha"] = report.residual_alpha;
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
        const int rc = std::fclose(f);
        if (written != content.size() || rc != 0) {
            std::remove(tmp.c_str());
            throw std::runtime_error("short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

std::string write_report(const ScenarioReport& report, const ScenarioConfig& config,
                         const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string base = out_dir + "/" + config.output_basename;
    const std::string csv_path = base + ".csv";
    write_file_atomic(csv_path, report_to_csv(report));
    write_file_atomic(base + ".summary.json", report_summary_json(report));
    return csv_path;
}

} // namespace wignerlab
