// bath.hpp: Ohmic reservoir spectral density and thermal dephasing coefficients
//
// Units: hbar = k_B = 1, frequencies in units of omega0, time in 1/omega0.
// The dephasing rate gamma(t), the complex coefficient alpha(t) and their
// accumulated exponents Gamma(t), X(t) are evaluated by quadrature over the
// spectral density; closed-form limits used as cross-checks live in
// closed_form.hpp.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "cohdyn/errors.hpp"
#include "cohdyn/quadrature.hpp"

namespace cohdyn {

/// Reservoir parameters. kT = 0 selects the zero-temperature limit
/// (coth -> 1) as a first-class case rather than a small-kT evaluation.
struct BathSpec {
    double eta;    // system-reservoir coupling strength
    double lambda; // cutoff frequency Lambda
    double kT;     // temperature, >= 0

    void validate() const {
        if (!(eta > 0.0) || !std::isfinite(eta))
            throw ParameterError("BathSpec: eta must be positive");
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw ParameterError("BathSpec: lambda must be positive");
        if (!(kT >= 0.0) || !std::isfinite(kT))
            throw ParameterError("BathSpec: kT must be nonnegative");
    }

    friend bool operator==(const BathSpec& a, const BathSpec& b) {
        return a.eta == b.eta && a.lambda == b.lambda && a.kT == b.kT;
    }
};

/// Ohmic spectral density eta * omega * exp(-omega/Lambda).
inline double ohmic_j(double omega, const BathSpec& spec) {
    if (omega < 0.0)
        throw ParameterError("ohmic_j: omega must be nonnegative");
    return spec.eta * omega * std::exp(-omega / spec.lambda);
}

namespace bath_detail {

inline constexpr double kOmegaMaxInCutoffs = 50.0; // e^-50 tail is negligible
inline constexpr double kSeriesSwitchScale = 1e-3;

inline double panel_width(double t, const BathSpec& spec) {
    // Resolve both the exponential cutoff and the sin(omega t) oscillation.
    double w = spec.lambda / 4.0;
    if (t > 0.0) w = std::min(w, M_PI / (4.0 * t));
    return w;
}

inline void require_converged(const quad::Result& r, const char* what) {
    if (!r.converged) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge, achieved error estimate "
            << r.error_estimate;
        throw NumericalError(msg.str());
    }
}

/// integral_0^inf J(w) coth(w/2kT) sin(w t)/w dw.
///
/// Below series_switch * min(kT, Lambda) the integrand coth(w/2kT) sin(w t)
/// is replaced by its small-omega series 2 kT t + w^2 (t/(6 kT) - kT t^3/3),
/// removing the 1/w blowup of coth before the product is formed.
inline double thermal_sine_integral(double t, const BathSpec& spec,
                                    double series_switch = kSeriesSwitchScale,
                                    quad::Result* diag = nullptr) {
    if (t < 0.0) throw ParameterError("bath: t must be nonnegative");
    if (t == 0.0) return 0.0;

    const double eta = spec.eta;
    const double lambda = spec.lambda;
    const double kT = spec.kT;
    const double omega_max = kOmegaMaxInCutoffs * lambda;

    quad::Result r;
    if (kT == 0.0) {
        r = quad::integrate(
            [=](double w) { return eta * std::exp(-w / lambda) * std::sin(w * t); },
            0.0, omega_max, panel_width(t, spec));
    } else {
        const double w_switch = series_switch * std::min(kT, lambda);
        const double c2 = t / (6.0 * kT) - kT * t * t * t / 3.0;
        r = quad::integrate(
            [=](double w) {
                const double env = eta * std::exp(-w / lambda);
                if (w < w_switch)
                    return env * (2.0 * kT * t + w * w * c2);
                return env / std::tanh(w / (2.0 * kT)) * std::sin(w * t);
            },
            0.0, omega_max, panel_width(t, spec));
    }
    require_converged(r, "thermal_sine_integral");
    if (diag) *diag = r;
    return r.value;
}

/// integral_0^inf J(w) (1 - cos(w t))/w dw  (temperature independent, >= 0).
inline double phase_integral(double t, const BathSpec& spec,
                             quad::Result* diag = nullptr) {
    if (t < 0.0) throw ParameterError("bath: t must be nonnegative");
    if (t == 0.0) return 0.0;
    const double eta = spec.eta;
    const double lambda = spec.lambda;
    const quad::Result r = quad::integrate(
        [=](double w) {
            const double s = std::sin(0.5 * w * t);
            return eta * std::exp(-w / lambda) * 2.0 * s * s;
        },
        0.0, kOmegaMaxInCutoffs * lambda, panel_width(t, spec));
    require_converged(r, "phase_integral");
    if (diag) *diag = r;
    return r.value;
}

/// Cumulative integral of uniformly sampled values, advancing one point at a
/// time with the quadratic through the three nearest samples (composite
/// Simpson). values.size() == 1 yields {0}; two samples fall back to the
/// trapezoid.
inline std::vector<double> cumulative_simpson(const std::vector<double>& values,
                                              double h) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
    for (std::size_t k = 2; k < n; ++k)
        out[k] = out[k - 1] +
                 h / 12.0 * (-values[k - 2] + 8.0 * values[k - 1] + 5.0 * values[k]);
    return out;
}

} // namespace bath_detail

/// Time-dependent dephasing rate
///   gamma(t) = 2 integral_0^inf J(w) coth(w/2kT) sin(w t)/w dw.
inline double gamma_rate(double t, const BathSpec& spec) {
    return 2.0 * bath_detail::thermal_sine_integral(t, spec);
}

/// Complex coefficient of the common-environment master equation:
/// real part = integral J coth sin(wt)/w (= gamma/2), imaginary part
/// = -integral J (1-cos(wt))/w (temperature independent).
inline std::complex<double> alpha_coeff(double t, const BathSpec& spec) {
    return {bath_detail::thermal_sine_integral(t, spec),
            -bath_detail::phase_integral(t, spec)};
}

/// Tabulated coefficients on a uniform time grid plus their accumulated
/// exponents Gamma(t) = int_0^t gamma and X(t) = int_0^t (-Im alpha).
/// Dynamics consumes only this table; rates are never re-quadratured inside
/// the ODE stepper.
struct RateTable {
    BathSpec spec{};
    std::vector<double> t;
    std::vector<double> gamma;
    std::vector<double> re_alpha;
    std::vector<double> im_alpha;
    std::vector<double> Gamma;
    std::vector<double> X;

    std::size_t size() const { return t.size(); }
    double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

/// Check that a grid starts at 0 and is uniform and strictly increasing.
inline void check_uniform_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ParameterError("time grid: must be nonempty");
    if (grid.front() != 0.0) throw ParameterError("time grid: must start at 0");
    if (grid.size() < 2) return;
    const double h = grid[1] - grid[0];
    if (!(h > 0.0)) throw ParameterError("time grid: must be strictly increasing");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double step = grid[k] - grid[k - 1];
        if (std::abs(step - h) > 1e-9 * std::max(1.0, h))
            throw ParameterError("time grid: must be uniform");
    }
}

inline RateTable build_rate_table(const BathSpec& spec,
                                  const std::vector<double>& t_grid) {
    spec.validate();
    check_uniform_grid(t_grid);

    RateTable table;
    table.spec = spec;
    table.t = t_grid;
    const std::size_t n = t_grid.size();
    table.gamma.resize(n);
    table.re_alpha.resize(n);
    table.im_alpha.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double thermal = bath_detail::thermal_sine_integral(t_grid[k], spec);
        const double phase = bath_detail::phase_integral(t_grid[k], spec);
        table.gamma[k] = 2.0 * thermal;
        table.re_alpha[k] = thermal;
        table.im_alpha[k] = -phase;
    }
    const double h = table.dt();
    table.Gamma = bath_detail::cumulative_simpson(table.gamma, h);
    std::vector<double> minus_im(n);
    for (std::size_t k = 0; k < n; ++k) minus_im[k] = -table.im_alpha[k];
    table.X = bath_detail::cumulative_simpson(minus_im, h);
    return table;
}

} // namespace cohdyn
