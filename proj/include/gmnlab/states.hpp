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

// Three-qubit states: named states, seeded samplers, and density-matrix
// validation.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "gmnlab/matcore.hpp"
#include "gmnlab/rng.hpp"

namespace gmnlab {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

struct PureState {
  std::array<Complex, kDim> amplitudes{};

  double norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
  }

  ComplexVector vector() const {
    ComplexVector v(kDim);
    for (int i = 0; i < kDim; ++i) v(i) = amplitudes[i];
    return v;
  }
};

/// Validated 8×8 density operator: Hermitian, unit trace, PSD.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const { return mat_; }
  Complex operator()(int i, int j) const { return mat_(i, j); }

  friend DensityMatrix validate_density(const ComplexMatrix& m);

 private:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

/// Checks Hermiticity, then PSD, then unit trace; returns the symmetrized matrix.
inline DensityMatrix validate_density(const ComplexMatrix& m) {
  require_three_qubit(m, "density matrix");
  const double herm_err = hermiticity_error(m);
  if (herm_err > kHermitianTol) {
    throw Error(ErrorCode::NotHermitian, "max |rho - rho^dagger| = " + std::to_string(herm_err));
  }
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  const double lmin = min_eigenvalue(h);
  if (lmin < -kPsdTol) {
    throw Error(ErrorCode::NotPSD, "min eigenvalue = " + std::to_string(lmin));
  }
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw Error(ErrorCode::BadTrace, "trace = " + std::to_string(trace) + ", expected 1");
  }
  return DensityMatrix(std::move(h));
}

inline DensityMatrix pure_to_density(const PureState& psi) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw Error(ErrorCode::NotNormalized, "state norm = " + std::to_string(n));
  }
  const ComplexVector v = psi.vector();
  return validate_density(v * v.adjoint());
}

namespace detail {

inline PureState two_term(int i, int j) {
  PureState s;
  s.amplitudes[i] = std::numbers::sqrt2 / 2.0;
  s.amplitudes[j] = std::numbers::sqrt2 / 2.0;
  return s;
}

inline PureState normalized(PureState s) {
  const double n = s.norm();
  for (auto& a : s.amplitudes) a /= n;
  return s;
}

}  // namespace detail

/// (|000> + |111>)/√2
inline PureState ghz1() { return detail::two_term(0, 7); }

/// (|001> + |110>)/√2
inline PureState ghz2() { return detail::two_term(1, 6); }

/// (|001> + |010> + |100>)/√3
inline PureState w_state() {
  PureState s;
  const double a = 1.0 / std::sqrt(3.0);
  s.amplitudes[1] = a;
  s.amplitudes[2] = a;
  s.amplitudes[4] = a;
  return s;
}

/// |+>⊗|+>⊗|+>
inline PureState plus_product() {
  PureState s;
  for (auto& a : s.amplitudes) a = 1.0 / std::sqrt(8.0);
  return s;
}

inline PureState basis_state(int index) {
  PureState s;
  s.amplitudes.at(index) = 1.0;
  return s;
}

/// Haar-random pure state number `index` of the ensemble seeded by `seed`:
/// eight i.i.d. standard complex Gaussians, normalized.
inline PureState random_pure_at(RngSeed seed, std::uint64_t index) {
  Xoshiro256 rng = Xoshiro256::for_stream(seed, index);
  PureState s;
  for (auto& a : s.amplitudes) {
    const auto [re, im] = rng.normal_pair();
    a = Complex(re, im);
  }
  return detail::normalized(s);
}

inline std::vector<PureState> random_pure(RngSeed seed, int count) {
  std::vector<PureState> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(random_pure_at(seed, static_cast<std::uint64_t>(k)));
  return out;
}

/// Controlled-phase weights on the triangle edges AB, AC, BC.
struct EdgePhases {
  double ab = 0.0;
  double ac = 0.0;
  double bc = 0.0;
};

/// Weighted graph state on the triangle: CZ(φ_AB) CZ(φ_AC) CZ(φ_BC) |+++>.
/// Amplitudes are 8^{-1/2} exp(i(φ_AB·ab + φ_AC·ac + φ_BC·bc)).
inline PureState weighted_graph_state(const EdgePhases& phases) {
  PureState s;
  const double amp = 1.0 / std::sqrt(8.0);
  for (unsigned i = 0; i < kDim; ++i) {
    const int a = (i >> 2) & 1u;
    const int b = (i >> 1) & 1u;
    const int c = i & 1u;
    const int ab = a * b;
    const int ac = a * c;
    const int bc = b * c;
    // reduce each phase mod 2π so that φ and φ + 2π give identical output
    double phase = 0.0;
    if (ab) phase += std::remainder(phases.ab, 2.0 * std::numbers::pi);
    if (ac) phase += std::remainder(phases.ac, 2.0 * std::numbers::pi);
    if (bc) phase += std::remainder(phases.bc, 2.0 * std::numbers::pi);
    s.amplitudes[i] = std::polar(amp, phase);
  }
  return s;
}

inline EdgePhases random_edge_phases_at(RngSeed seed, std::uint64_t index) {
  Xoshiro256 rng = Xoshiro256::for_stream(seed, index);
  const double two_pi = 2.0 * std::numbers::pi;
  EdgePhases p;
  p.ab = two_pi * rng.uniform();
  p.ac = two_pi * rng.uniform();
  p.bc = two_pi * rng.uniform();
  return p;
}

inline PureState random_weighted_graph_at(RngSeed seed, std::uint64_t index) {
  return weighted_graph_state(random_edge_phases_at(seed, index));
}

inline std::vector<PureState> random_weighted_graph(RngSeed seed, int count) {
  std::vector<PureState> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.push_back(random_weighted_graph_at(seed, static_cast<std::uint64_t>(k)));
  }
  return out;
}

}  // namespace gmnlab
