// closed_form.hpp: analytic limits of the Ohmic dephasing coefficients.
//
// Used as independent cross-checks of the quadrature path (verify CLI,
// tests); the simulator itself always integrates numerically.
#pragma once

#include <cmath>

#include "cohdyn/bath.hpp"

namespace cohdyn::closed_form {

/// gamma(t) at kT = 0: 2 eta Lambda^2 t / (1 + Lambda^2 t^2).
inline double zero_temperature_gamma(double t, const BathSpec& spec) {
    const double lt = spec.lambda * t;
    return 2.0 * spec.eta * spec.lambda * lt / (1.0 + lt * lt);
}

/// Gamma(t) at kT = 0: eta ln(1 + Lambda^2 t^2).
inline double zero_temperature_exponent(double t, const BathSpec& spec) {
    const double lt = spec.lambda * t;
    return spec.eta * std::log1p(lt * lt);
}

/// High-temperature asymptote gamma(t) ~ 4 eta kT arctan(Lambda t),
/// valid for kT >> Lambda.
inline double high_temperature_gamma(double t, const BathSpec& spec) {
    return 4.0 * spec.eta * spec.kT * std::atan(spec.lambda * t);
}

/// High-temperature asymptote of the accumulated exponent:
/// 4 eta kT [t arctan(Lambda t) - ln(1 + Lambda^2 t^2)/(2 Lambda)].
inline double high_temperature_exponent(double t, const BathSpec& spec) {
    const double lt = spec.lambda * t;
    return 4.0 * spec.eta * spec.kT *
           (t * std::atan(lt) - std::log1p(lt * lt) / (2.0 * spec.lambda));
}

/// Im alpha(t) = -eta Lambda^3 t^2 / (1 + Lambda^2 t^2), temperature
/// independent (exact at all kT for the Ohmic density).
inline double im_alpha(double t, const BathSpec& spec) {
    const double lt = spec.lambda * t;
    return -spec.eta * spec.lambda * lt * lt / (1.0 + lt * lt);
}

/// X(t) = int_0^t (-Im alpha) = eta (Lambda t - arctan(Lambda t)).
inline double phase_accumulator(double t, const BathSpec& spec) {
    const double lt = spec.lambda * t;
    return spec.eta * (lt - std::atan(lt));
}

} // namespace cohdyn::closed_form
