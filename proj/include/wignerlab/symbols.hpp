// Phase-space observables a(x, xi) on the cotangent bundle of the d-torus,
// represented as finite Fourier sums in position with smooth momentum
// profiles:  a(x, xi) = sum_l c_l(xi) e^{il.x}.
//
// The three classical operations the experiments need:
//   - geodesic averaging along a direction xi0 (projects onto the terms with
//     l . xi0 == 0, decided in exact arithmetic — resonance is measure-zero
//     and undecidable in floating point, so directions arrive as quadratic
//     surds, never as doubles);
//   - Poisson bracket with the free Hamiltonian p = |xi|^2, termwise
//     l -> -2i (l.xi) c_l(xi), kept inside a profile family closed under
//     multiplication by linear forms;
//   - resonance classification of exact directions (in exact.hpp).

#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "wignerlab/exact.hpp"
#include "wignerlab/lattice.hpp"

namespace wignerlab {

// A momentum profile: amplitude * (product of linear forms v.xi) * base(xi),
// where base is one of
//   gaussian:          exp(-|xi - c|^2 / (2 r^2)), treated as exactly 0
//                      beyond the truncation radius (8r from the center),
//                      with the induced error bound recorded;
//   bump:              exp(1 - 1/(1 - s^2)) for s = |xi - c|/r < 1, else 0
//                      (compactly supported, smooth);
//   constant_on_ball:  indicator of |xi - c| <= r.
// The linear factors exist so the family is closed under the Poisson bracket
// (each bracket multiplies by a linear form); plain profiles have none.
struct XiProfile {
    enum class Base { gaussian, bump, constant_on_ball };

    Base base = Base::gaussian;
    std::vector<double> center;
    double scale = 1.0;
    cplx amplitude{1.0, 0.0};
    std::vector<std::vector<double>> linear_factors; // each factor is v, contributing (v.xi)

    static XiProfile gaussian(std::vector<double> center, double scale, cplx amplitude);
    static XiProfile bump(std::vector<double> center, double scale, cplx amplitude);
    static XiProfile constant_on_ball(std::vector<double> center, double scale, cplx amplitude);
    // Convenience for the bracket-image family: (v.xi) * gaussian.
    static XiProfile linear_times_gaussian(std::vector<double> v, std::vector<double> center,
                                           double scale, cplx amplitude);

    cplx eval(const std::vector<double>& xi) const;

    // Metadata the pairing error budgets rely on.
    double truncation_error() const;           // mass treated as 0 (gaussian only)
    double lipschitz_bound() const;            // +inf for constant_on_ball
    double support_radius() const;             // effective radius about center

    bool operator==(const XiProfile&) const = default;
};

// Is q the complex conjugate profile of p (same shape, conjugate amplitude)?
bool profiles_conjugate(const XiProfile& p, const XiProfile& q);

struct TorusSymbol {
    int dim = 1;
    std::map<LatticeVector, XiProfile> terms;
    bool reality = false; // c_{-l} == conj(c_l) for every term, checked at build
};

TorusSymbol make_symbol(int dim, const std::vector<std::pair<LatticeVector, XiProfile>>& terms);

cplx evaluate(const TorusSymbol& symbol, const std::vector<double>& x, const std::vector<double>& xi);

// Geodesic average along xi0 (exact direction, nonzero): keeps exactly the
// terms with l . xi0 == 0.  For non-resonant xi0 only l = 0 survives.
TorusSymbol average_along(const TorusSymbol& symbol, const std::vector<QuadraticSurd>& xi0);

// {a, p} with p = |xi|^2: termwise l -> -2i (l.xi) c_l(xi); drops l = 0.
TorusSymbol poisson_bracket_with_p(const TorusSymbol& symbol);

// JSON: {dim, terms:[{l:[...], profile:{family, center, scale, amp_re, amp_im}}]}.
std::string symbol_to_json(const TorusSymbol& symbol);
TorusSymbol symbol_from_json(const std::string& text);

} // namespace wignerlab
