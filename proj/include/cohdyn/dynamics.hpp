// dynamics.hpp: propagation of the three-qubit density matrix under local
// and common pure dephasing.
//
// Two independent routes produce a Trajectory from the same RateTables:
//   propagate_analytic  element-wise closed-form solution
//   propagate_ode       fixed-step RK4 on the assembled master equation
// The analytic route is the oracle for the ODE route; they share no code
// beyond the tabulated rates.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cohdyn/bath.hpp"
#include "cohdyn/errors.hpp"
#include "cohdyn/format.hpp"
#include "cohdyn/states.hpp"
#include "cohdyn/types.hpp"

namespace cohdyn {

enum class EnvironmentKind { Local, Common };

inline EnvironmentKind parse_environment_kind(std::string_view name) {
    if (name == "local") return EnvironmentKind::Local;
    if (name == "common") return EnvironmentKind::Common;
    throw ParameterError("unknown environment '" + std::string(name) +
                         "' (expected local or common)");
}

inline std::string to_string(EnvironmentKind kind) {
    return kind == EnvironmentKind::Local ? "local" : "common";
}

/// Reservoir topology: one bath per qubit (local) or a single shared bath
/// (common). baths.size() is 3 or 1 accordingly.
struct Environment {
    EnvironmentKind kind = EnvironmentKind::Local;
    std::vector<BathSpec> baths;

    static Environment local(const BathSpec& bath) {
        return {EnvironmentKind::Local, {bath, bath, bath}};
    }
    static Environment local(const BathSpec& b0, const BathSpec& b1,
                             const BathSpec& b2) {
        return {EnvironmentKind::Local, {b0, b1, b2}};
    }
    static Environment common(const BathSpec& bath) {
        return {EnvironmentKind::Common, {bath}};
    }

    void validate() const {
        const std::size_t expected =
            kind == EnvironmentKind::Local ? kNumQubits : 1;
        if (baths.size() != expected)
            throw ParameterError("environment '" + to_string(kind) +
                                 "' requires " + std::to_string(expected) +
                                 " bath spec(s), got " +
                                 std::to_string(baths.size()));
        for (const auto& b : baths) b.validate();
    }
};

struct Scenario {
    StateSpec initial;
    Environment environment;
    double omega0 = 1.0;
    std::vector<double> t_grid;

    void validate() const {
        initial.validate();
        environment.validate();
        if (!(omega0 > 0.0) || !std::isfinite(omega0))
            throw ParameterError("scenario: omega0 must be positive");
        check_uniform_grid(t_grid);
    }

    /// Deterministic text form used for digests; doubles are rendered with
    /// full round-trip precision so distinct scenarios never collide by
    /// formatting.
    std::string canonical_text() const {
        std::ostringstream out;
        out << "state=" << to_string(initial.family);
        if (initial.p) out << ";p=" << format_sig17(*initial.p);
        out << ";env=" << to_string(environment.kind);
        for (const auto& b : environment.baths)
            out << ";bath=" << format_sig17(b.eta) << ","
                << format_sig17(b.lambda) << "," << format_sig17(b.kT);
        out << ";omega0=" << format_sig17(omega0);
        out << ";grid=" << t_grid.size();
        if (t_grid.size() > 1)
            out << "," << format_sig17(t_grid[1] - t_grid[0]);
        return out.str();
    }
};

enum class SolverTag { Analytic, Ode };

inline std::string to_string(SolverTag tag) {
    return tag == SolverTag::Analytic ? "analytic" : "ode";
}

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t scenario_digest(const Scenario& scenario) {
    return fnv1a64(scenario.canonical_text());
}

struct Trajectory {
    std::vector<double> t;
    std::vector<DensityMatrix> states;
    std::uint64_t scenario_hash = 0;
    SolverTag solver = SolverTag::Analytic;
};

/// Exponent weight of the element-wise dephasing factor e^{-w Gamma(t)} for
/// identical baths: local w = sum_i (1 - s_i(m) s_i(n)), common
/// w = (M(m) - M(n))^2 / 2.
inline int dephasing_weight(EnvironmentKind kind, int m, int n) {
    if (m < 0 || m >= kDim || n < 0 || n >= kDim)
        throw ParameterError("dephasing_weight: basis index out of range");
    if (kind == EnvironmentKind::Local) {
        int w = 0;
        for (int q = 0; q < kNumQubits; ++q)
            w += 1 - qubit_sz(q, m) * qubit_sz(q, n);
        return w;
    }
    const int dm = collective_sz(m) - collective_sz(n);
    return dm * dm / 2;
}

namespace dyn_detail {

inline void check_tables(const Scenario& scenario,
                         const std::vector<RateTable>& tables) {
    const std::size_t expected =
        scenario.environment.kind == EnvironmentKind::Local ? kNumQubits : 1;
    if (tables.size() != expected)
        throw ParameterError("rate tables: expected " +
                             std::to_string(expected) + " table(s), got " +
                             std::to_string(tables.size()));
    for (const auto& table : tables) {
        if (table.t.size() != scenario.t_grid.size())
            throw ParameterError("rate table grid does not match scenario grid");
        for (std::size_t k = 0; k < table.t.size(); ++k)
            if (table.t[k] != scenario.t_grid[k])
                throw ParameterError(
                    "rate table grid does not match scenario grid");
    }
}

/// Cubic Lagrange interpolation on the uniform table grid; clamped to the
/// first/last four nodes at the ends. Exact on the nodes themselves.
class CubicInterpolant {
  public:
    CubicInterpolant(const std::vector<double>& t, const std::vector<double>& y)
        : t_(&t), y_(&y), h_(t.size() > 1 ? t[1] - t[0] : 1.0) {}

    double operator()(double t) const {
        const auto& ts = *t_;
        const auto& ys = *y_;
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ts.size());
        if (n == 1) return ys[0];
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>((t - ts[0]) / h_);
        if (n < 4) {
            i = std::min(std::max<std::ptrdiff_t>(i, 0), n - 2);
            const double u = (t - ts[i]) / h_;
            return ys[i] * (1.0 - u) + ys[i + 1] * u;
        }
        std::ptrdiff_t j = std::min(std::max<std::ptrdiff_t>(i - 1, 0), n - 4);
        double result = 0.0;
        for (std::ptrdiff_t a = 0; a < 4; ++a) {
            double w = 1.0;
            for (std::ptrdiff_t b = 0; b < 4; ++b) {
                if (a == b) continue;
                w *= (t - ts[j + b]) / (ts[j + a] - ts[j + b]);
            }
            result += w * ys[j + a];
        }
        return result;
    }

  private:
    const std::vector<double>* t_;
    const std::vector<double>* y_;
    double h_;
};

/// sigma_z of one qubit embedded in the 8-dimensional space, as a dense
/// matrix so the ODE route exercises full matrix algebra.
inline DensityMatrix qubit_sz_operator(int qubit) {
    DensityMatrix z = DensityMatrix::Zero();
    for (int m = 0; m < kDim; ++m) z(m, m) = Complex(qubit_sz(qubit, m), 0.0);
    return z;
}

/// Collective S_z = sum_i sigma_z^i, eigenvalues in {±3, ±1}.
inline DensityMatrix collective_sz_operator() {
    DensityMatrix s = DensityMatrix::Zero();
    for (int m = 0; m < kDim; ++m) s(m, m) = Complex(collective_sz(m), 0.0);
    return s;
}

} // namespace dyn_detail

/// Element-wise closed-form propagation.
///
/// Both topologies share the free phase exp[-i(omega0/2)(M(m)-M(n))t]. The
/// decay factor is exp[-sum_i (1-s_i(m)s_i(n)) Gamma_i(t)] for local baths
/// and exp[-(Gamma(t)/2)(M(m)-M(n))^2] exp[+i(M(m)^2-M(n)^2) X(t)] for the
/// common bath. Diagonal elements are copied through untouched.
inline Trajectory propagate_analytic(const Scenario& scenario,
                                     const std::vector<RateTable>& tables) {
    scenario.validate();
    dyn_detail::check_tables(scenario, tables);

    const DensityMatrix rho0 = make_state(scenario.initial);
    const bool local = scenario.environment.kind == EnvironmentKind::Local;

    Trajectory traj;
    traj.t = scenario.t_grid;
    traj.solver = SolverTag::Analytic;
    traj.scenario_hash = scenario_digest(scenario);
    traj.states.reserve(scenario.t_grid.size());

    for (std::size_t k = 0; k < scenario.t_grid.size(); ++k) {
        const double t = scenario.t_grid[k];
        DensityMatrix rho = rho0;
        for (int m = 0; m < kDim; ++m) {
            for (int n = 0; n < kDim; ++n) {
                if (m == n) continue;
                const int dM = collective_sz(m) - collective_sz(n);
                double decay = 0.0;
                double phase = -0.5 * scenario.omega0 * dM * t;
                if (local) {
                    for (int q = 0; q < kNumQubits; ++q)
                        decay += (1 - qubit_sz(q, m) * qubit_sz(q, n)) *
                                 tables[q].Gamma[k];
                } else {
                    const int sq_diff = collective_sz(m) * collective_sz(m) -
                                        collective_sz(n) * collective_sz(n);
                    decay = 0.5 * dM * dM * tables[0].Gamma[k];
                    phase += sq_diff * tables[0].X[k];
                }
                rho(m, n) *= std::exp(-decay) * std::polar(1.0, phase);
            }
        }
        traj.states.push_back(rho);
    }
    return traj;
}

struct OdeOptions {
    int substeps = 10;          // RK4 steps per grid interval, >= 4
    double positivity_tol = 1e-6;
    double trace_tol = 1e-8;

    void validate() const {
        if (substeps < 4)
            throw ParameterError("ode options: substeps must be >= 4");
        if (!(positivity_tol > 0.0) || !(trace_tol > 0.0))
            throw ParameterError("ode options: tolerances must be positive");
    }
};

/// Classic fixed-step RK4 on the master equation assembled from matrices:
///   local:  d rho = -i[H, rho] + sum_i gamma_i(t) (Z_i rho Z_i - rho)
///   common: d rho = -i[H, rho] + gamma(t) S rho S
///                   - alpha(t) S^2 rho - conj(alpha(t)) rho S^2
/// with H = (omega0/2) S. Rates at substep times come from cubic
/// interpolation of the tables, never from fresh quadrature.
inline Trajectory propagate_ode(const Scenario& scenario,
                                const std::vector<RateTable>& tables,
                                const OdeOptions& options = {}) {
    scenario.validate();
    options.validate();
    dyn_detail::check_tables(scenario, tables);

    const bool local = scenario.environment.kind == EnvironmentKind::Local;
    const DensityMatrix s_op = dyn_detail::collective_sz_operator();
    std::vector<DensityMatrix> z_ops;
    std::vector<dyn_detail::CubicInterpolant> gammas;
    for (std::size_t q = 0; q < tables.size(); ++q) {
        z_ops.push_back(dyn_detail::qubit_sz_operator(static_cast<int>(q)));
        gammas.emplace_back(tables[q].t, tables[q].gamma);
    }
    const dyn_detail::CubicInterpolant re_alpha(tables[0].t, tables[0].re_alpha);
    const dyn_detail::CubicInterpolant im_alpha(tables[0].t, tables[0].im_alpha);
    const double half_omega = 0.5 * scenario.omega0;

    DensityMatrix sr, rs, work;
    auto rhs = [&](double t, const DensityMatrix& rho, DensityMatrix& out) {
        sr.noalias() = s_op * rho;
        rs.noalias() = rho * s_op;
        out = Complex(0.0, -half_omega) * (sr - rs);
        if (local) {
            for (int q = 0; q < kNumQubits; ++q) {
                const double g = gammas[q](t);
                work.noalias() = z_ops[q] * rho * z_ops[q];
                out += g * (work - rho);
            }
        } else {
            const double g = gammas[0](t);
            const Complex alpha(re_alpha(t), im_alpha(t));
            work.noalias() = sr * s_op; // S rho S
            out += g * work;
            work.noalias() = s_op * sr; // S^2 rho
            out -= alpha * work;
            work.noalias() = rs * s_op; // rho S^2
            out -= std::conj(alpha) * work;
        }
    };

    Trajectory traj;
    traj.t = scenario.t_grid;
    traj.solver = SolverTag::Ode;
    traj.scenario_hash = scenario_digest(scenario);
    traj.states.reserve(scenario.t_grid.size());

    DensityMatrix rho = make_state(scenario.initial);
    traj.states.push_back(rho);

    DensityMatrix k1, k2, k3, k4, stage;
    for (std::size_t k = 0; k + 1 < scenario.t_grid.size(); ++k) {
        const double t0 = scenario.t_grid[k];
        const double h = (scenario.t_grid[k + 1] - t0) / options.substeps;
        for (int j = 0; j < options.substeps; ++j) {
            const double t = t0 + j * h;
            rhs(t, rho, k1);
            stage = rho + (0.5 * h) * k1;
            rhs(t + 0.5 * h, stage, k2);
            stage = rho + (0.5 * h) * k2;
            rhs(t + 0.5 * h, stage, k3);
            stage = rho + h * k3;
            rhs(t + h, stage, k4);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }

        const double trace_drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_drift > options.trace_tol)
            throw NumericalError(
                "ode propagation: trace drift " + format_sig17(trace_drift) +
                " exceeds tolerance; reduce the grid spacing or raise substeps");
        Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(
            (rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -options.positivity_tol)
            throw NumericalError(
                "ode propagation: positivity violated beyond tolerance; "
                "reduce the grid spacing or raise substeps");
        traj.states.push_back(rho);
    }
    return traj;
}

/// Convenience overloads that build the needed rate tables on the spot.
/// Identical baths share one quadrature pass.
inline std::vector<RateTable> build_scenario_tables(const Scenario& scenario) {
    scenario.validate();
    std::vector<RateTable> tables;
    tables.reserve(scenario.environment.baths.size());
    for (const auto& bath : scenario.environment.baths) {
        auto prior = std::find_if(tables.begin(), tables.end(),
                                  [&](const RateTable& t) { return t.spec == bath; });
        if (prior != tables.end())
            tables.push_back(*prior);
        else
            tables.push_back(build_rate_table(bath, scenario.t_grid));
    }
    return tables;
}

inline Trajectory propagate_analytic(const Scenario& scenario) {
    return propagate_analytic(scenario, build_scenario_tables(scenario));
}

inline Trajectory propagate_ode(const Scenario& scenario,
                                const OdeOptions& options = {}) {
    return propagate_ode(scenario, build_scenario_tables(scenario), options);
}

} // namespace cohdyn
