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

// Dense complex linear algebra for three-qubit operators.
//
// Basis convention: index i = 4a + 2b + c for qubit values (a, b, c) of the
// parties (A, B, C), i.e. qubit A is the most significant bit.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "gmnlab/error.hpp"

namespace gmnlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr int kQubits = 3;
inline constexpr int kDim = 8;

/// Absolute max-entry tolerance for admitting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-10;

/// Bitmask of one party inside a basis index.
enum class Party : unsigned { A = 4u, B = 2u, C = 1u };

/// The three bipartitions M|M̄, identified by the transposed side M.
enum class Bipartition { A_BC = 0, B_AC = 1, C_AB = 2 };

inline constexpr std::array<Bipartition, 3> kBipartitions = {
    Bipartition::A_BC, Bipartition::B_AC, Bipartition::C_AB};

inline constexpr unsigned transposed_mask(Bipartition m) {
  switch (m) {
    case Bipartition::A_BC: return 4u;
    case Bipartition::B_AC: return 2u;
    case Bipartition::C_AB: return 1u;
  }
  return 0u;
}

inline std::string label(Bipartition m) {
  switch (m) {
    case Bipartition::A_BC: return "A|BC";
    case Bipartition::B_AC: return "B|AC";
    case Bipartition::C_AB: return "C|AB";
  }
  return "?";
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

/// Largest absolute entry.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |M - M†| over entries.
inline double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

/// Returns (M + M†)/2 after checking M is Hermitian within `tol`.
inline ComplexMatrix hermitize(const ComplexMatrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::BadDim, "matrix is " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()) + ", expected square");
  }
  const double err = hermiticity_error(m);
  if (err > tol) {
    throw Error(ErrorCode::NotHermitian,
                "max |M - M^dagger| = " + std::to_string(err) + " exceeds " + std::to_string(tol));
  }
  return (m + m.adjoint()) * 0.5;
}

/// Kronecker product: (A ⊗ B)_{(i·dB + k),(j·dB + l)} = A_ij B_kl.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns, orthonormal
};

/// Eigendecomposition of a Hermitian matrix. Inputs within kHermitianTol are
/// symmetrized first.
inline HermitianEigen eig_hermitian(const ComplexMatrix& m) {
  const ComplexMatrix h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector eigenvalues_hermitian(const ComplexMatrix& m) {
  const ComplexMatrix h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

inline double min_eigenvalue(const ComplexMatrix& m) { return eigenvalues_hermitian(m)(0); }

inline void require_three_qubit(const ComplexMatrix& m, const char* what) {
  if (m.rows() != kDim || m.cols() != kDim) {
    throw Error(ErrorCode::BadDim, std::string(what) + " needs an 8x8 matrix, got " +
                                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

/// Swaps the bits selected by `mask` between row index i and column index j.
inline constexpr std::pair<unsigned, unsigned> swap_bits(unsigned i, unsigned j, unsigned mask) {
  return {(i & ~mask) | (j & mask), (j & ~mask) | (i & mask)};
}

/// Partial transpose over the parties in `mask` (any subset of A=4, B=2, C=1).
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, unsigned mask) {
  require_three_qubit(rho, "partial_transpose");
  ComplexMatrix out(kDim, kDim);
  for (unsigned i = 0; i < kDim; ++i) {
    for (unsigned j = 0; j < kDim; ++j) {
      const auto [ip, jp] = swap_bits(i, j, mask);
      out(i, j) = rho(ip, jp);
    }
  }
  return out;
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, Bipartition m) {
  return partial_transpose(rho, transposed_mask(m));
}

/// Reduced operator on the parties in `keep` (bitmask, A=4, B=2, C=1). Kept
/// parties retain their relative bit order.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, unsigned keep) {
  require_three_qubit(rho, "partial_trace");
  keep &= 7u;
  const unsigned traced = 7u & ~keep;
  const int out_dim = 1 << std::popcount(keep);

  // compress the kept bits of a full index into a reduced index
  auto compress = [keep](unsigned idx) {
    unsigned out = 0;
    for (int bit = 2; bit >= 0; --bit) {
      const unsigned b = 1u << bit;
      if (keep & b) out = (out << 1) | ((idx & b) ? 1u : 0u);
    }
    return out;
  };

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (unsigned i = 0; i < kDim; ++i) {
    for (unsigned j = 0; j < kDim; ++j) {
      if ((i & traced) == (j & traced)) out(compress(i), compress(j)) += rho(i, j);
    }
  }
  return out;
}

/// Real symmetric embedding [[X, -Y], [Y, X]] of H = X + iY. H ⪰ 0 iff the
/// embedding is PSD; each eigenvalue of H appears twice.
inline RealMatrix realify(const ComplexMatrix& h) {
  const ComplexMatrix herm = hermitize(h);
  const Eigen::Index n = herm.rows();
  RealMatrix out(2 * n, 2 * n);
  const RealMatrix x = herm.real();
  const RealMatrix y = herm.imag();
  out.topLeftCorner(n, n) = x;
  out.topRightCorner(n, n) = -y;
  out.bottomLeftCorner(n, n) = y;
  out.bottomRightCorner(n, n) = x;
  return out;
}

/// Adjoint of realify under the Frobenius inner product:
/// <realify(H), G> = Re <H, derealify(G)> for any real 2n×2n G.
inline ComplexMatrix derealify(const RealMatrix& g) {
  const Eigen::Index n = g.rows() / 2;
  ComplexMatrix out(n, n);
  out.real() = g.topLeftCorner(n, n) + g.bottomRightCorner(n, n);
  out.imag() = g.bottomLeftCorner(n, n) - g.topRightCorner(n, n);
  return out;
}

/// Re Tr(A† B).
inline double frobenius_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace gmnlab
