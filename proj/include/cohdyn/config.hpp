// config.hpp: run configuration shared by the CLI and the sweep runner.
#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"
#include "cohdyn/states.hpp"

namespace cohdyn {

/// Environment variable consulted when no output directory is configured.
inline constexpr const char* kOutputRootEnvVar = "COHDYN_OUTPUT_ROOT";

enum class SolverChoice { Analytic, Ode, Both };

inline SolverChoice parse_solver_choice(std::string_view name) {
    if (name == "analytic") return SolverChoice::Analytic;
    if (name == "ode") return SolverChoice::Ode;
    if (name == "both") return SolverChoice::Both;
    throw ParameterError("unknown solver '" + std::string(name) +
                         "' (expected analytic, ode, both)");
}

inline std::string to_string(SolverChoice choice) {
    switch (choice) {
        case SolverChoice::Analytic: return "analytic";
        case SolverChoice::Ode: return "ode";
        case SolverChoice::Both: return "both";
    }
    throw ParameterError("unknown solver choice");
}

/// One sweep: a single state and environment, identical baths, a list of
/// temperatures. Validation errors name the offending field.
struct RunConfig {
    StateSpec state;
    EnvironmentKind environment = EnvironmentKind::Local;
    double eta = 0.1;
    double lambda = 0.01;
    std::vector<double> kT;
    double t_max = 200.0;
    int samples = 2001;
    SolverChoice solver = SolverChoice::Both;
    std::filesystem::path output_dir; // empty: env var, then "out"
    bool cache = true;
    int ode_substeps = 10;

    void validate() const {
        state.validate();
        if (!(eta > 0.0) || !std::isfinite(eta))
            throw ParameterError("config field 'eta': must be positive");
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw ParameterError("config field 'lambda': must be positive");
        if (kT.empty())
            throw ParameterError("config field 'kT': list must be nonempty");
        for (double value : kT)
            if (!(value >= 0.0) || !std::isfinite(value))
                throw ParameterError(
                    "config field 'kT': values must be finite and nonnegative");
        if (!(t_max > 0.0) || !std::isfinite(t_max))
            throw ParameterError("config field 't_max': must be positive");
        if (samples < 2)
            throw ParameterError("config field 'samples': must be >= 2");
        if (ode_substeps < 4)
            throw ParameterError("config field 'ode_substeps': must be >= 4");
    }

    std::vector<double> time_grid() const {
        const double h = t_max / (samples - 1);
        std::vector<double> grid(samples);
        for (int k = 0; k < samples; ++k) grid[k] = k * h;
        return grid;
    }

    Scenario scenario_for(double temperature) const {
        const BathSpec bath{eta, lambda, temperature};
        Scenario scenario;
        scenario.initial = state;
        scenario.environment = environment == EnvironmentKind::Local
                                   ? Environment::local(bath)
                                   : Environment::common(bath);
        scenario.t_grid = time_grid();
        return scenario;
    }
};

/// Output root resolution: explicit configuration wins, then the
/// environment variable, then "out" under the working directory.
inline std::filesystem::path resolve_output_root(const RunConfig& config) {
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv(kOutputRootEnvVar); env && *env)
        return env;
    return "out";
}

} // namespace cohdyn
