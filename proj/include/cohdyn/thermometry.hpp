// thermometry.hpp: reservoir temperature estimation from an observed
// coherence trajectory, by inverting the forward dephasing model.
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cohdyn/coherence.hpp"
#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"

namespace cohdyn {

struct ThermometryResult {
    double kt_hat = 0.0;      // estimated temperature, within the bounds
    double residual = 0.0;    // RMS misfit of the best-fit C_R series
    bool identifiable = false; // false whenever sensitivity < 1e-6
    double sensitivity = 0.0; // max_t |dC_R/dkT| at kt_hat
    bool boundary_warning = false; // minimizer pinned at a search bound
};

struct TemperatureBounds {
    double lo = 0.0;
    double hi = 0.0;

    void validate() const {
        if (!(lo > 0.0) || !(hi > lo))
            throw ParameterError(
                "temperature bounds: require 0 < lo < hi");
    }
};

/// Process-local cache of rate tables keyed by (BathSpec, grid); read-only
/// after insertion. The search revisits temperatures, so tables are reused
/// rather than re-quadratured.
class RateTableCache {
  public:
    const RateTable& get(const BathSpec& spec, const std::vector<double>& grid) {
        std::string key = format_sig17(spec.eta) + "," +
                          format_sig17(spec.lambda) + "," +
                          format_sig17(spec.kT) + ";" +
                          std::to_string(grid.size());
        if (grid.size() > 1) key += "," + format_sig17(grid[1] - grid[0]);
        auto it = entries_.find(key);
        if (it == entries_.end())
            it = entries_.emplace(std::move(key), build_rate_table(spec, grid))
                     .first;
        return it->second;
    }

  private:
    std::map<std::string, RateTable> entries_;
};

/// Copy of the scenario with every bath set to temperature kT.
inline Scenario with_temperature(Scenario scenario, double kT) {
    for (auto& bath : scenario.environment.baths) bath.kT = kT;
    return scenario;
}

namespace thermo_detail {

inline std::vector<double> forward_coherence(const Scenario& model, double kT,
                                             RateTableCache& cache) {
    const Scenario scenario = with_temperature(model, kT);
    std::vector<RateTable> tables;
    tables.reserve(scenario.environment.baths.size());
    for (const auto& bath : scenario.environment.baths)
        tables.push_back(cache.get(bath, scenario.t_grid));
    return coherence_of(propagate_analytic(scenario, tables)).c_r;
}

inline double finite_difference_step(double kT) {
    return std::max(1e-3 * kT, 1e-4);
}

} // namespace thermo_detail

/// RMS misfit between an observed C_R series and the forward model at
/// temperature kT. The observed grid must equal the model grid.
inline double rms_misfit(const CoherenceTrajectory& observed,
                         const Scenario& model, double kT,
                         RateTableCache& cache) {
    if (observed.t.size() != model.t_grid.size())
        throw ParameterError("thermometry: observed grid does not match model grid");
    for (std::size_t k = 0; k < observed.t.size(); ++k)
        if (observed.t[k] != model.t_grid[k])
            throw ParameterError(
                "thermometry: observed grid does not match model grid");
    const std::vector<double> predicted =
        thermo_detail::forward_coherence(model, kT, cache);
    double sum = 0.0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const double d = predicted[k] - observed.c_r[k];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

/// Signed series dC_R/dkT on the scenario grid, by central finite
/// differences with step max(1e-3 kT, 1e-4).
inline std::vector<double> sensitivity_profile(const Scenario& model, double kT,
                                               RateTableCache& cache) {
    if (!(kT > 0.0))
        throw ParameterError("sensitivity_profile: kT must be positive");
    const double step = thermo_detail::finite_difference_step(kT);
    const std::vector<double> hi =
        thermo_detail::forward_coherence(model, kT + step, cache);
    const std::vector<double> lo =
        thermo_detail::forward_coherence(model, kT - step, cache);
    std::vector<double> out(hi.size());
    for (std::size_t k = 0; k < hi.size(); ++k)
        out[k] = (hi[k] - lo[k]) / (2.0 * step);
    return out;
}

inline std::vector<double> sensitivity_profile(const Scenario& model,
                                               double kT) {
    RateTableCache cache;
    return sensitivity_profile(model, kT, cache);
}

/// Minimize the RMS misfit over kT: 33-point log-spaced coarse grid, then
/// golden-section refinement in log kT to relative width 1e-4. Ties break
/// toward smaller kT. Non-identifiability (flat misfit, sensitivity below
/// 1e-6) is reported in the result, not raised as an error.
inline ThermometryResult estimate_temperature(
    const CoherenceTrajectory& observed, const Scenario& model,
    const TemperatureBounds& bounds, RateTableCache* shared_cache = nullptr) {
    bounds.validate();
    RateTableCache local_cache;
    RateTableCache& cache = shared_cache ? *shared_cache : local_cache;

    const auto misfit = [&](double log_kT) {
        return rms_misfit(observed, model, std::exp(log_kT), cache);
    };

    const double log_lo = std::log(bounds.lo);
    const double log_hi = std::log(bounds.hi);
    constexpr int kCoarsePoints = 33;
    int best_index = 0;
    double best_value = 0.0;
    std::vector<double> coarse_logs(kCoarsePoints);
    for (int i = 0; i < kCoarsePoints; ++i) {
        coarse_logs[i] =
            log_lo + (log_hi - log_lo) * i / double(kCoarsePoints - 1);
        const double value = misfit(coarse_logs[i]);
        if (i == 0 || value < best_value) {
            best_value = value;
            best_index = i;
        }
    }

    double a = coarse_logs[std::max(best_index - 1, 0)];
    double b = coarse_logs[std::min(best_index + 1, kCoarsePoints - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = misfit(c);
    double fd = misfit(d);
    // Relative width 1e-4 in kT equals absolute width ~1e-4 in log kT.
    while (b - a > 1e-4) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = misfit(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = misfit(d);
        }
    }
    const double log_hat = fc <= fd ? c : d;

    ThermometryResult result;
    result.kt_hat = std::exp(log_hat);
    result.residual = rms_misfit(observed, model, result.kt_hat, cache);
    const std::vector<double> profile =
        sensitivity_profile(model, result.kt_hat, cache);
    double max_abs = 0.0;
    for (double v : profile) max_abs = std::max(max_abs, std::abs(v));
    result.sensitivity = max_abs;
    result.identifiable = result.sensitivity >= 1e-6;
    result.boundary_warning = log_hat - log_lo <= 2e-4 * (log_hi - log_lo) ||
                              log_hi - log_hat <= 2e-4 * (log_hi - log_lo);
    return result;
}

} // namespace cohdyn
