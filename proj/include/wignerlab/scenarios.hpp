// Batch experiment runner.
//
// A scenario binds one family construction to the pairings that probe it and
// the closed-form prediction it should approach, then emits a convergence
// table: one ReportRow per (member, symbol, time) with the computed value,
// its error budget, the predicted limit, and a pass flag recomputed from the
// row's own columns.  Reports serialize to CSV (17 significant digits,
// byte-identical across runs) and a small JSON summary; files are written
// atomically.  Row evaluation may fan out across threads (WIGNERLAB_THREADS
// caps it); assembly is single-writer and ordering is fixed by the config,
// so parallelism never shows in the output.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wignerlab/exact.hpp"
#include "wignerlab/families.hpp"
#include "wignerlab/lattice.hpp"
#include "wignerlab/pairings.hpp"
#include "wignerlab/propagators.hpp"
#include "wignerlab/symbols.hpp"
#include "wignerlab/window.hpp"

namespace wignerlab {

// The eight experiment kinds the runner knows how to drive.
enum class ScenarioKind {
    zoll_circle,        // d=1 wave packets vs the circle average
    torus_nonresonant,  // d>=2 wave packets vs the non-resonant torus average
    resonant_pair,      // plane-wave u vs resonant companion v, mu1 vs mu2
    euclid_dispersion,  // free Gaussian packet, time-averaged pairing -> 0
    invariance_residual,// time-averaged pairing against {a, p} along a ladder
    egorov_invariant,   // xi-only pairings constant along the evolved flow
    marginal_consistency, // x-only pairings equal position-density integrals
    oracle_crosscheck,  // closed-form time average vs quadrature oracle
};

const char* scenario_name(ScenarioKind kind);
ScenarioKind scenario_from_name(const std::string& name);

struct NamedSymbol {
    std::string id;
    TorusSymbol symbol;
};

struct ScenarioConfig {
    int schema_version = 1;
    ScenarioKind kind = ScenarioKind::oracle_crosscheck;
    TestWindow window = TestWindow::make_fejer(2.0);
    TimeScale scale = TimeScale::reciprocal();
    std::vector<NamedSymbol> symbols;
    double tolerance = 0.0; // > 0 required; per-scenario defaults applied at parse
    std::string output_basename;

    // wave-packet scenarios (zoll-circle, torus-nonresonant)
    std::vector<double> x0;
    std::vector<QuadraticSurd> xi0_surd;
    std::vector<double> h_grid;

    // euclid-dispersion
    std::vector<double> xi0_real;
    double sigma = 1.0;
    double x_halfwidth = 0.5;
    double xi_scale = 2.0;

    // resonant-pair
    LatticeState rho;
    std::vector<std::int64_t> xi0_int;
    std::vector<QuadraticSurd> theta0;
    int depth = 4;

    // family-driven scenarios (invariance-residual, egorov-invariant,
    // marginal-consistency)
    SemiclassicalFamily family;
    std::vector<int> depths;
    std::vector<TimeScale> scales; // egorov-invariant: variants to sweep
    int time_points = 100;
    double time_lo = -2.0;
    double time_hi = 2.0;
    std::vector<double> times; // marginal-consistency sample times

    // oracle-crosscheck
    LatticeState state;
    double h = 1.0;
    double oracle_T = 2000.0;
    double oracle_dt = 0.01;
};

// Parse + validate; throws std::invalid_argument with a line of diagnostics
// on any violation (the CLI maps that to exit code 2).
ScenarioConfig config_from_json(const std::string& text);

struct ReportRow {
    std::string scenario;
    int n = 0;
    double h = 0.0;
    double alpha = 0.0;
    std::string t; // a number rendered at 17 digits, or "averaged"
    std::string symbol_id;
    cplx value{0.0, 0.0};
    double budget = 0.0;
    double predicted = 0.0;
    double abs_error = 0.0; // |value - predicted|, recomputable from columns
    bool pass = false;      // abs_error <= max(budget, scenario tolerance)
};

struct ScenarioReport {
    std::string scenario;
    std::vector<ReportRow> rows;
    double max_abs_error = 0.0;
    bool all_pass = true;
    // invariance-residual only: residual * alpha_h per tabulated depth.
    std::vector<double> residual_alpha;
};

ScenarioReport run_scenario(const ScenarioConfig& config);

std::string report_to_csv(const ScenarioReport& report);
std::string report_summary_json(const ScenarioReport& report);

// Write CSV + JSON summary under out_dir (atomic: temp file + rename).
// Returns the CSV path.
std::string write_report(const ScenarioReport& report, const ScenarioConfig& config,
                         const std::string& out_dir);

void write_file_atomic(const std::string& path, const std::string& content);

// |time-averaged pairing against {a,p}| per ladder member, with the
// alpha-scaled column used for the invariance-rate inspection.
struct ResidualEntry {
    int n = 0;
    double h = 0.0;
    double residual = 0.0;
    double residual_alpha = 0.0;
};

std::vector<ResidualEntry> invariance_residual(const SemiclassicalFamily& family,
                                               const TorusSymbol& symbol,
                                               const TestWindow& window, const TimeScale& scale,
                                               const std::vector<int>& depths);

// Max over the time grid of |pairing(t) - pairing(0)| for an xi-only symbol
// (rejects symbols with l != 0 terms: those are not flow-invariant).
double egorov_invariant_check(const LatticeState& state, double h, const TimeScale& scale,
                              const TorusSymbol& symbol, int points, double t_lo, double t_hi);

} // namespace wignerlab
