// states.hpp: three-qubit basis bookkeeping and initial-state catalog.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "cohdyn/errors.hpp"
#include "cohdyn/types.hpp"

namespace cohdyn {

/// sigma_z eigenvalue of one qubit in a computational basis state.
/// Qubit 1 is the leftmost label, i.e. the most significant bit of the
/// index; |0> carries +1.
inline constexpr int qubit_sz(int qubit, int index) {
    const int bit = (index >> (kNumQubits - 1 - qubit)) & 1;
    return bit == 0 ? +1 : -1;
}

/// Collective sigma_z eigenvalue M = sum_i s_i of a basis state, in {±3, ±1}.
inline constexpr int collective_sz(int index) {
    int m = 0;
    for (int q = 0; q < kNumQubits; ++q) m += qubit_sz(q, index);
    return m;
}

enum class StateFamily {
    Ghz,       // (|000> + |111>)/sqrt(2)
    W,         // (|100> + |010> + |001>)/sqrt(3)
    Wbar,      // (|011> + |101> + |110>)/sqrt(3)
    WbarW,     // (|W> + |Wbar>)/sqrt(2)
    Star,      // (|000> + |100> + |101> + |111>)/2
    MixGhzW,   // p |GHZ><GHZ| + (1-p) |W><W|
    WernerGhz, // p |GHZ><GHZ| + (1-p)/8 I
    WernerW,   // p |W><W| + (1-p)/8 I
};

inline constexpr bool is_mixture(StateFamily f) {
    return f == StateFamily::MixGhzW || f == StateFamily::WernerGhz ||
           f == StateFamily::WernerW;
}

inline StateFamily parse_state_family(std::string_view name) {
    if (name == "ghz") return StateFamily::Ghz;
    if (name == "w") return StateFamily::W;
    if (name == "wbar") return StateFamily::Wbar;
    if (name == "wwbar") return StateFamily::WbarW;
    if (name == "star") return StateFamily::Star;
    if (name == "mix-ghz-w") return StateFamily::MixGhzW;
    if (name == "werner-ghz") return StateFamily::WernerGhz;
    if (name == "werner-w") return StateFamily::WernerW;
    throw ParameterError("unknown state kind '" + std::string(name) +
                         "' (expected ghz, w, wbar, wwbar, star, mix-ghz-w, "
                         "werner-ghz, werner-w)");
}

inline std::string to_string(StateFamily f) {
    switch (f) {
        case StateFamily::Ghz: return "ghz";
        case StateFamily::W: return "w";
        case StateFamily::Wbar: return "wbar";
        case StateFamily::WbarW: return "wwbar";
        case StateFamily::Star: return "star";
        case StateFamily::MixGhzW: return "mix-ghz-w";
        case StateFamily::WernerGhz: return "werner-ghz";
        case StateFamily::WernerW: return "werner-w";
    }
    throw ParameterError("unknown state family");
}

/// Initial-state selector. The mixing weight p applies to the three mixed
/// families only and must be absent for pure ones.
struct StateSpec {
    StateFamily family = StateFamily::Ghz;
    std::optional<double> p;

    void validate() const {
        if (is_mixture(family)) {
            if (!p)
                throw ParameterError("state '" + to_string(family) +
                                     "': p is required");
            if (!(*p >= 0.0 && *p <= 1.0))
                throw ParameterError("state '" + to_string(family) +
                                     "': p must lie in [0, 1]");
        } else if (p) {
            throw ParameterError("state '" + to_string(family) +
                                 "': p is only valid for mixed kinds");
        }
    }

    friend bool operator==(const StateSpec& a, const StateSpec& b) {
        return a.family == b.family && a.p == b.p;
    }
};

namespace state_detail {

using StateVector = Eigen::Matrix<Complex, kDim, 1>;

inline StateVector uniform_over(std::initializer_list<int> indices) {
    StateVector v = StateVector::Zero();
    const double amp = 1.0 / std::sqrt(static_cast<double>(indices.size()));
    for (int idx : indices) v(idx) = amp;
    return v;
}

inline StateVector pure_vector(StateFamily f) {
    switch (f) {
        case StateFamily::Ghz: return uniform_over({0, 7});
        case StateFamily::W: return uniform_over({4, 2, 1});
        case StateFamily::Wbar: return uniform_over({3, 5, 6});
        case StateFamily::WbarW: return uniform_over({1, 2, 3, 4, 5, 6});
        case StateFamily::Star: return uniform_over({0, 4, 5, 7});
        default: throw ParameterError("pure_vector: not a pure family");
    }
}

inline DensityMatrix projector(StateFamily f) {
    const StateVector v = pure_vector(f);
    return v * v.adjoint();
}

} // namespace state_detail

inline DensityMatrix make_state(const StateSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case StateFamily::MixGhzW:
            return *spec.p * state_detail::projector(StateFamily::Ghz) +
                   (1.0 - *spec.p) * state_detail::projector(StateFamily::W);
        case StateFamily::WernerGhz:
            return *spec.p * state_detail::projector(StateFamily::Ghz) +
                   (1.0 - *spec.p) / kDim * DensityMatrix::Identity();
        case StateFamily::WernerW:
            return *spec.p * state_detail::projector(StateFamily::W) +
                   (1.0 - *spec.p) / kDim * DensityMatrix::Identity();
        default:
            return state_detail::projector(spec.family);
    }
}

/// Largest deviation of rho from a valid density matrix: max of the
/// Hermiticity defect, the trace defect and the negative-eigenvalue excess.
inline double density_matrix_defect(const DensityMatrix& rho) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const double trace = std::abs(rho.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(
        (rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double neg = std::max(0.0, -solver.eigenvalues().minCoeff());
    return std::max({herm, trace, neg});
}

inline void check_density_matrix(const DensityMatrix& rho, double tol = 1e-9) {
    const double defect = density_matrix_defect(rho);
    if (!(defect <= tol))
        throw NumericalError("density matrix check failed: defect " +
                             std::to_string(defect) + " exceeds tolerance " +
                             std::to_string(tol));
}

} // namespace cohdyn
