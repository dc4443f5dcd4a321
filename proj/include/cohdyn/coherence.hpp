// coherence.hpp: relative entropy of coherence, in nats.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"
#include "cohdyn/types.hpp"

namespace cohdyn {

/// Eigenvalues below this floor contribute nothing to -lambda ln lambda;
/// removes -0 and NaN from numerically rank-deficient pure states.
inline constexpr double kEntropyEigenvalueFloor = 1e-12;

/// Von Neumann entropy S = -sum lambda ln lambda over the spectrum of the
/// Hermitian part of rho.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(
        (rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("von_neumann_entropy: eigensolver failed");
    double s = 0.0;
    for (int i = 0; i < kDim; ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda > kEntropyEigenvalueFloor) s -= lambda * std::log(lambda);
    }
    return s;
}

/// C_R = S(rho_diag) - S(rho). The diagonal entropy uses the populations
/// directly; they are the eigenvalues of the dephased matrix.
inline double relative_entropy_of_coherence(const DensityMatrix& rho) {
    double diag_entropy = 0.0;
    for (int m = 0; m < kDim; ++m) {
        const double pop = rho(m, m).real();
        if (pop > kEntropyEigenvalueFloor)
            diag_entropy -= pop * std::log(pop);
    }
    const double c = diag_entropy - von_neumann_entropy(rho);
    if (c < -1e-10)
        throw NumericalError(
            "relative_entropy_of_coherence: negative beyond tolerance");
    return std::max(c, 0.0);
}

struct CoherenceTrajectory {
    std::vector<double> t;
    std::vector<double> c_r;
    std::uint64_t scenario_hash = 0;
    SolverTag solver = SolverTag::Analytic;
};

/// Pointwise C_R along a trajectory; metadata copied through.
inline CoherenceTrajectory coherence_of(const Trajectory& trajectory) {
    CoherenceTrajectory out;
    out.t = trajectory.t;
    out.scenario_hash = trajectory.scenario_hash;
    out.solver = trajectory.solver;
    out.c_r.reserve(trajectory.states.size());
    for (const auto& rho : trajectory.states)
        out.c_r.push_back(relative_entropy_of_coherence(rho));
    return out;
}

} // namespace cohdyn
