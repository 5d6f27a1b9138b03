#include "wignerlab/window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wignerlab {

namespace {

constexpr double kPi = std::numbers::pi;

// (1 - cos z)/z^2, series-guarded near z = 0.
double one_minus_cos_over_z2(double z) {
    double az = std::abs(z);
    if (az < 1e-4) {
        double z2 = z * z;
        return 0.5 - z2 / 24.0 + z2 * z2 / 720.0;
    }
    return (1.0 - std::cos(z)) / (z * z);
}

// (1 - sinc z)/z^2 with sinc z = sin(z)/z, series-guarded near z = 0.
double one_minus_sinc_over_z2(double z) {
    double az = std::abs(z);
    if (az < 1e-3) {
        double z2 = z * z;
        return (1.0 / 6.0) - z2 / 120.0 + z2 * z2 / 5040.0;
    }
    return (1.0 - std::sin(z) / z) / (z * z);
}

// |int_{|t|>T} e^{i nu t} / t^p dt| for p in {2,3}, always finite.  Two
// rigorous bounds: the absolute integral 2/((p-1) T^{p-1}), and -- once nu is
// large enough for one integration by parts to help -- 4/(|nu| T^p).  Take
// whichever is smaller; near nu = 0 the carrier barely oscillates over the
// tail and the absolute bound is the honest one.
double exp_tail_bound(double nu, double T, int p) {
    double absolute = 2.0 / ((p - 1) * std::pow(T, p - 1));
    double anu = std::abs(nu);
    if (anu * T <= 2.0 * (p - 1)) return absolute;
    return std::min(absolute, 4.0 / (anu * std::pow(T, p)));
}

// Construction-time cross-check that (phi, phihat) really is a Fourier pair
// under the pinned convention phihat(tau) = int phi(t) e^{-i tau t} dt, i.e.
// phi(t) = (1/2pi) int_{-R}^{R} phihat(tau) e^{i tau t} dtau.  phihat is even,
// so the inverse transform reduces to a cosine integral over [0, R], done by
// composite Simpson (the only kink of phihat sits at the endpoint tau = 0).
void verify_fourier_pair(const TestWindow& w) {
    const double probes[] = {0.0, 0.37, 1.0, 2.6, 9.0};
    const int n = 4096; // panels; Simpson error way below the 1e-8 gate
    for (double t : probes) {
        double sum = 0.0;
        double h = w.R / n;
        for (int i = 0; i <= n; ++i) {
            double tau = i * h;
            double f = w.hat(std::min(tau, w.R)) * std::cos(tau * t);
            double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            sum += weight * f;
        }
        double inverse = (sum * h / 3.0) / kPi; // doubled half-line over 2pi
        if (std::abs(inverse - w.phi(t)) > 1e-8) {
            throw std::logic_error("window self-check failed: phi and phihat disagree");
        }
    }
}

} // namespace

TestWindow TestWindow::make_fejer(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("window bandwidth must be positive");
    TestWindow w;
    w.family = Family::fejer;
    w.R = R;
    // phi <= min(R/2pi, 2/(pi R t^2)); the branches cross at t^2 = 4/R^2 and
    // the envelope C/(1+t^2) is tight with C = R/2pi + 2/(pi R).
    w.decay_C = R / (2.0 * kPi) + 2.0 / (kPi * R);
    verify_fourier_pair(w);
    return w;
}

TestWindow TestWindow::make_triangle_product(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("window bandwidth must be positive");
    TestWindow w;
    w.family = Family::triangle_product;
    w.R = R;
    // phi <= min(R/3pi, 4/(pi R t^2)), crossing at t^2 = 12/R^2.
    w.decay_C = R / (3.0 * kPi) + 4.0 / (kPi * R);
    verify_fourier_pair(w);
    return w;
}

TestWindow TestWindow::from_name(const std::string& name, double R) {
    if (name == "fejer") return make_fejer(R);
    if (name == "triangle-product") return make_triangle_product(R);
    throw std::invalid_argument("unknown window family: " + name);
}

std::string TestWindow::family_name() const {
    return family == Family::fejer ? "fejer" : "triangle-product";
}

double TestWindow::hat(double tau) const {
    double a = std::abs(tau);
    if (a >= R) return 0.0; // exact zero outside the support, by contract
    double u = 1.0 - a / R;
    return family == Family::fejer ? u : u * u;
}

double TestWindow::phi(double t) const {
    double z = R * t;
    if (family == Family::fejer) {
        // (1 - cos(Rt)) / (pi R t^2) = R/pi * (1-cos z)/z^2
        return (R / kPi) * one_minus_cos_over_z2(z);
    }
    // 2 (1 - sinc(Rt)) / (pi R t^2) = 2R/pi * (1-sinc z)/z^2
    return (2.0 * R / kPi) * one_minus_sinc_over_z2(z);
}

double TestWindow::tail_mass(double T) const {
    if (!(T > 0.0)) throw std::invalid_argument("tail horizon must be positive");
    double Z = R * T;
    if (family == Family::fejer) {
        // 2 int_T^inf (1 - cos Rt)/(pi R t^2) dt
        //   = 2/(pi R T) + (2/pi) (sin Z / Z^2 - 2 cos Z / Z^3) + O(Z^-4)
        return 2.0 / (kPi * R * T) + (2.0 / kPi) * (std::sin(Z) / (Z * Z) - 2.0 * std::cos(Z) / (Z * Z * Z));
    }
    // 2 int_T^inf [2/(pi R t^2) - 2 sin(Rt)/(pi R^2 t^3)] dt
    //   = 4/(pi R T) - (4/pi) cos Z / Z^3 + O(Z^-4)
    return 4.0 / (kPi * R * T) - (4.0 / kPi) * std::cos(Z) / (Z * Z * Z);
}

double TestWindow::tail_mass_error_bound(double T) const {
    double Z = R * T;
    // Remainder of the truncated integration-by-parts series; both families
    // leave a pure cos/z^4-type integral bounded via monotone envelopes.
    return 24.0 / (kPi * Z * Z * Z * Z);
}

double TestWindow::oscillatory_tail_bound(double omega, double T) const {
    if (family == Family::fejer) {
        // phi = (1/(pi R)) [ 1/t^2 - (e^{iRt} + e^{-iRt}) / (2 t^2) ]
        return (1.0 / (kPi * R)) * (exp_tail_bound(omega, T, 2)
                                    + 0.5 * exp_tail_bound(omega + R, T, 2)
                                    + 0.5 * exp_tail_bound(omega - R, T, 2));
    }
    // phi = (2/(pi R)) / t^2 - (1/(pi R^2)) (e^{iRt} - e^{-iRt}) / (i t^3)
    return (2.0 / (kPi * R)) * exp_tail_bound(omega, T, 2)
           + (1.0 / (kPi * R * R)) * (exp_tail_bound(omega + R, T, 3)
                                      + exp_tail_bound(omega - R, T, 3));
}

} // namespace wignerlab
