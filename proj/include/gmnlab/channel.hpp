// Copyright 2026 The gmnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Collective dephasing of three qubits.
//
// All qubits see the same fluctuating field, so the master equation is
// diagonal in the computational basis and is solved entry-wise:
//
//   rho_ij(t) = exp(-Γt (s_i - s_j)^2 / 8) rho_ij(0),
//
// with s_i the eigenvalue of σz^A + σz^B + σz^C on |i>. Coherences inside a
// degenerate s-block (s = +1: |001>,|010>,|100>; s = -1: |011>,|101>,|110>)
// never decay. Coherences between the two blocks decay at Γ/2, not zero, so
// the frozen part is two 3-dimensional blocks rather than one 6-dimensional
// subspace.

#pragma once

#include <array>
#include <bit>
#include <cmath>

#include "gmnlab/matcore.hpp"
#include "gmnlab/states.hpp"

namespace gmnlab {

struct ChannelParams {
  double gamma = 1.0;
  double t = 0.0;

  static ChannelParams from_gt(double gt) { return {1.0, gt}; }

  /// Only the product Γt enters the dynamics.
  double gt() const { return gamma * t; }
};

/// s_i = 3 - 2·popcount(i).
inline constexpr int z_weight(unsigned i) { return 3 - 2 * std::popcount(i & 7u); }

inline constexpr std::array<int, kDim> kZWeights = {
    z_weight(0), z_weight(1), z_weight(2), z_weight(3),
    z_weight(4), z_weight(5), z_weight(6), z_weight(7)};

inline void require_nonnegative_gt(double gt) {
  if (!(gt >= 0.0)) throw std::invalid_argument("Γt must be >= 0, got " + std::to_string(gt));
}

inline double decay_factor(int i, int j, double gt) {
  require_nonnegative_gt(gt);
  const double ds = kZWeights.at(i) - kZWeights.at(j);
  return std::exp(-gt * ds * ds / 8.0);
}

/// Schur-product kernel d_ij(Γt).
inline RealMatrix decay_kernel(double gt) {
  RealMatrix d(kDim, kDim);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) d(i, j) = decay_factor(i, j, gt);
  }
  return d;
}

inline ComplexMatrix evolve_matrix(const ComplexMatrix& rho0, double gt) {
  require_three_qubit(rho0, "evolve");
  return rho0.cwiseProduct(decay_kernel(gt).cast<Complex>());
}

inline DensityMatrix evolve(const DensityMatrix& rho0, double gt) {
  return validate_density(evolve_matrix(rho0.matrix(), gt));
}

inline DensityMatrix evolve(const DensityMatrix& rho0, const ChannelParams& p) {
  return evolve(rho0, p.gt());
}

/// t → ∞ limit: keep ρ_ij only where s_i = s_j.
inline DensityMatrix asymptotic_map(const DensityMatrix& rho0) {
  ComplexMatrix out = ComplexMatrix::Zero(kDim, kDim);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      if (kZWeights[i] == kZWeights[j]) out(i, j) = rho0(i, j);
    }
  }
  return validate_density(out);
}

/// Choi matrix Σ_ij d_ij |i><j| ⊗ |i><j| (64×64, trace 8).
inline ComplexMatrix choi_matrix(double gt) {
  const RealMatrix d = decay_kernel(gt);
  ComplexMatrix c = ComplexMatrix::Zero(kDim * kDim, kDim * kDim);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) c(i * kDim + i, j * kDim + j) = d(i, j);
  }
  return c;
}

inline ComplexMatrix choi_matrix(const ChannelParams& p) { return choi_matrix(p.gt()); }

}  // namespace gmnlab
