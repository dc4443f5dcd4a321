// types.hpp: common aliases for the three-qubit dephasing toolkit
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cohdyn {

inline constexpr int kNumQubits = 3;
inline constexpr int kDim = 8; // 2^3 computational-basis states

using Complex = std::complex<double>;

/// 8x8 complex matrix over the computational basis |000>,|001>,...,|111>
/// (binary ascending, leftmost symbol = qubit 1).
using DensityMatrix = Eigen::Matrix<Complex, kDim, kDim>;

} // namespace cohdyn
