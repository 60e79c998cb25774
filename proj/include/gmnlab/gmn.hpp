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

// Genuine multipartite negativity of three-qubit states.
//
// The monotone is the negated optimum of
//
//   minimize   Tr(W ρ)
//   subject to W = P_M + Q_M^{T_M},  0 ⪯ P_M ⪯ I,  0 ⪯ Q_M ⪯ I
//
// over the bipartitions M ∈ {A|BC, B|AC, C|AB}. A negative optimum certifies
// that ρ is not a mixture of states that are PPT across some bipartition.
//
// The free variables are W and the three Q_M (four Hermitian 8×8 matrices);
// P_M = W - Q_M^{T_M} is implied, which leaves twelve interval constraints
// and no equalities. Each complex PSD constraint enters the solver through
// its real 16×16 embedding.

#pragma once

#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gmnlab/matcore.hpp"
#include "gmnlab/sdp.hpp"
#include "gmnlab/states.hpp"

namespace gmnlab {

/// Orthonormal real coordinates for Hermitian 8×8 matrices.
namespace hermitian_coords {

inline constexpr int kCount = kDim * kDim;

/// k < 8: E_kk. Then for each pair a < b: (E_ab + E_ba)/√2 and i(E_ab - E_ba)/√2.
inline ComplexMatrix basis(int k) {
  ComplexMatrix e = ComplexMatrix::Zero(kDim, kDim);
  if (k < kDim) {
    e(k, k) = 1.0;
    return e;
  }
  int r = k - kDim;
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < kDim; ++a) {
    for (int b = a + 1; b < kDim; ++b) {
      if (r == 0) {
        e(a, b) = s;
        e(b, a) = s;
        return e;
      }
      if (r == 1) {
        e(a, b) = Complex(0, s);
        e(b, a) = Complex(0, -s);
        return e;
      }
      r -= 2;
    }
  }
  return e;
}

inline const std::vector<ComplexMatrix>& all() {
  static const std::vector<ComplexMatrix> cache = [] {
    std::vector<ComplexMatrix> out;
    out.reserve(kCount);
    for (int k = 0; k < kCount; ++k) out.push_back(basis(k));
    return out;
  }();
  return cache;
}

inline ComplexMatrix to_matrix(const RealVector& y, int offset) {
  ComplexMatrix h = ComplexMatrix::Zero(kDim, kDim);
  const auto& b = all();
  for (int k = 0; k < kCount; ++k) h += y(offset + k) * b[k];
  return h;
}

inline void from_matrix(const ComplexMatrix& h, RealVector& y, int offset) {
  const auto& b = all();
  for (int k = 0; k < kCount; ++k) y(offset + k) = frobenius_real(b[k], h);
}

}  // namespace hermitian_coords

enum class GmnStatus { Optimal, MaxIterations, NumericalTrouble };

inline std::string to_string(GmnStatus s) {
  switch (s) {
    case GmnStatus::Optimal: return "Optimal";
    case GmnStatus::MaxIterations: return "MaxIterations";
    case GmnStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

struct GmnResiduals {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double decomposition = 0.0;      // max_M |W - P_M - Q_M^{T_M}|
  double interval_violation = 0.0; // how far eigenvalues of P_M, Q_M leave [0, 1]
};

struct WitnessCertificate {
  ComplexMatrix p;
  ComplexMatrix q;
};

struct GmnResult {
  double value = 0.0;      // E(ρ) ∈ [0, 1/2]
  double objective = 0.0;  // Tr(W ρ) at the returned witness
  ComplexMatrix witness;
  std::array<WitnessCertificate, 3> certificates;  // indexed by Bipartition
  double duality_gap = 0.0;
  GmnResiduals residuals;
  GmnStatus status = GmnStatus::NumericalTrouble;
  int iterations = 0;
  SdpSettings settings;

  const WitnessCertificate& certificate(Bipartition m) const {
    return certificates[static_cast<int>(m)];
  }
};

/// Thrown by genuine_negativity when the solver does not certify its result.
class SolverError : public Error {
 public:
  SolverError(ErrorCode code, const std::string& detail, GmnResult best)
      : Error(code, detail), best_(std::move(best)) {}

  const GmnResult& best_iterate() const { return best_; }

 private:
  GmnResult best_;
};

namespace detail {

inline constexpr int kVarsPerMatrix = hermitian_coords::kCount;
inline constexpr int kWitnessOffset = 0;

inline int q_offset(Bipartition m) { return kVarsPerMatrix * (1 + static_cast<int>(m)); }

inline std::vector<SparseEntry> sparse_realified(const ComplexMatrix& h) {
  const RealMatrix r = realify(h);
  std::vector<SparseEntry> out;
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < r.cols(); ++j) {
      if (r(i, j) != 0.0) out.push_back({i, j, r(i, j)});
    }
  }
  return out;
}

inline std::vector<SparseEntry> scaled(std::vector<SparseEntry> v, double s) {
  for (auto& e : v) e.value *= s;
  return v;
}

/// Constraint structure shared by every ρ; only the objective depends on ρ.
inline const std::vector<LmiBlock>& gmn_blocks() {
  static const std::vector<LmiBlock> cache = [] {
    const auto& basis = hermitian_coords::all();
    const int n = 2 * kDim;
    const RealMatrix zero = RealMatrix::Zero(n, n);
    const RealMatrix ident = RealMatrix::Identity(n, n);

    std::vector<std::vector<SparseEntry>> plain(kVarsPerMatrix);
    for (int k = 0; k < kVarsPerMatrix; ++k) plain[k] = sparse_realified(basis[k]);

    std::vector<LmiBlock> blocks;
    for (Bipartition m : kBipartitions) {
      std::vector<std::vector<SparseEntry>> transposed(kVarsPerMatrix);
      for (int k = 0; k < kVarsPerMatrix; ++k) {
        transposed[k] = sparse_realified(partial_transpose(basis[k], m));
      }
      const int qo = q_offset(m);

      // Z = C - A(y); sign s = -1 for "X ⪰ 0" blocks, +1 for "I - X ⪰ 0".
      for (double s : {-1.0, 1.0}) {
        LmiBlock p_block{s < 0 ? zero : ident, {}};
        for (int k = 0; k < kVarsPerMatrix; ++k) {
          p_block.terms.push_back({kWitnessOffset + k, scaled(plain[k], s)});
        }
        for (int k = 0; k < kVarsPerMatrix; ++k) {
          p_block.terms.push_back({qo + k, scaled(transposed[k], -s)});
        }
        blocks.push_back(std::move(p_block));
      }
      for (double s : {-1.0, 1.0}) {
        LmiBlock q_block{s < 0 ? zero : ident, {}};
        for (int k = 0; k < kVarsPerMatrix; ++k) {
          q_block.terms.push_back({qo + k, scaled(plain[k], s)});
        }
        blocks.push_back(std::move(q_block));
      }
    }
    return blocks;
  }();
  return cache;
}

inline LmiProblem gmn_problem(const ComplexMatrix& rho) {
  LmiProblem p;
  p.num_vars = 4 * kVarsPerMatrix;
  p.objective = RealVector::Zero(p.num_vars);
  const auto& basis = hermitian_coords::all();
  for (int k = 0; k < kVarsPerMatrix; ++k) {
    p.objective(kWitnessOffset + k) = -frobenius_real(basis[k], rho);
  }
  p.blocks = gmn_blocks();
  return p;
}

/// W = I/2, Q_M = I/4, hence P_M = I/4: the centre of the interval constraints.
inline RealVector gmn_start() {
  RealVector y(4 * kVarsPerMatrix);
  hermitian_coords::from_matrix(0.5 * identity(kDim), y, kWitnessOffset);
  for (Bipartition m : kBipartitions) {
    hermitian_coords::from_matrix(0.25 * identity(kDim), y, q_offset(m));
  }
  return y;
}

inline double interval_violation(const ComplexMatrix& h) {
  const RealVector ev = eigenvalues_hermitian(hermitize(h, 1e-6));
  return std::max({0.0, -ev(0), ev(ev.size() - 1) - 1.0});
}

}  // namespace detail

/// Runs the witness program and reports whatever the solver reached; the
/// status field says whether the result is certified.
inline GmnResult solve_gmn(const DensityMatrix& rho, const SdpSettings& settings = {}) {
  const ComplexMatrix& r = rho.matrix();
  const LmiProblem problem = detail::gmn_problem(r);
  SdpStart start;
  start.y = detail::gmn_start();
  SdpSolution sol = solve_lmi(problem, settings, start);
  // degenerate optima (pure states, typically) can stall just short of the
  // tolerances in double precision
  if (sol.status != SdpStatus::Optimal) {
    sol = solve_lmi(problem, settings, start, SdpPrecision::Extended);
  }

  GmnResult res;
  res.settings = settings;
  res.iterations = sol.iterations;
  res.status = sol.status == SdpStatus::Optimal         ? GmnStatus::Optimal
               : sol.status == SdpStatus::MaxIterations ? GmnStatus::MaxIterations
                                                        : GmnStatus::NumericalTrouble;
  res.witness = hermitian_coords::to_matrix(sol.y, detail::kWitnessOffset);
  for (Bipartition m : kBipartitions) {
    auto& cert = res.certificates[static_cast<int>(m)];
    cert.q = hermitian_coords::to_matrix(sol.y, detail::q_offset(m));
    cert.p = res.witness - partial_transpose(cert.q, m);
  }
  res.objective = frobenius_real(res.witness, r);
  res.value = std::max(0.0, -res.objective);
  if (res.value < settings.value_floor) res.value = 0.0;
  res.duality_gap = sol.duality_gap;

  res.residuals.primal_infeasibility = sol.primal_infeasibility;
  res.residuals.dual_infeasibility = sol.dual_infeasibility;
  res.residuals.complementarity = sol.complementarity;
  for (Bipartition m : kBipartitions) {
    const auto& cert = res.certificate(m);
    res.residuals.decomposition = std::max(
        res.residuals.decomposition, max_abs(res.witness - cert.p - partial_transpose(cert.q, m)));
    res.residuals.interval_violation =
        std::max({res.residuals.interval_violation, detail::interval_violation(cert.p),
                  detail::interval_violation(cert.q)});
  }
  return res;
}

/// Genuine negativity E(ρ). Throws SolverError unless the result is certified.
inline GmnResult genuine_negativity(const DensityMatrix& rho, const SdpSettings& settings = {}) {
  GmnResult res = solve_gmn(rho, settings);
  if (res.status == GmnStatus::Optimal) return res;
  std::ostringstream detail;
  detail << std::setprecision(3) << "status " << to_string(res.status) << " after "
         << res.iterations << " iterations, gap " << res.duality_gap << ", primal residual "
         << res.residuals.primal_infeasibility;
  const ErrorCode code = res.residuals.primal_infeasibility > settings.feas_tol
                             ? ErrorCode::InfeasibleNumerics
                             : ErrorCode::SolverFailure;
  throw SolverError(code, detail.str(), std::move(res));
}

/// Sum of |λ| over negative eigenvalues of ρ^{T_M}.
inline double bipartite_negativity(const DensityMatrix& rho, Bipartition m) {
  const RealVector ev = eigenvalues_hermitian(partial_transpose(rho.matrix(), m));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) < 0.0) sum -= ev(k);
  }
  return sum;
}

inline double min_bipartite_negativity(const DensityMatrix& rho) {
  double best = INFINITY;
  for (Bipartition m : kBipartitions) best = std::min(best, bipartite_negativity(rho, m));
  return best;
}

struct CertificateCheck {
  std::string name;
  double violation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return violation <= tolerance; }
};

struct VerificationReport {
  std::vector<CertificateCheck> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed()) return false;
    }
    return true;
  }
};

/// Recomputes every GmnResult invariant from the stored matrices.
inline VerificationReport verify_certificate(const GmnResult& res, const DensityMatrix& rho) {
  const SdpSettings& s = res.settings;
  VerificationReport rep;
  auto add = [&rep](std::string name, double violation, double tol) {
    rep.checks.push_back({std::move(name), violation, tol});
  };

  add("status", res.status == GmnStatus::Optimal ? 0.0 : 1.0, 0.0);
  add("witness hermiticity", hermiticity_error(res.witness), kHermitianTol);
  add("objective = Tr(W rho)", std::abs(frobenius_real(res.witness, rho.matrix()) - res.objective),
      10.0 * s.gap_tol);
  double expected_value = std::max(0.0, -res.objective);
  if (expected_value < s.value_floor) expected_value = 0.0;
  add("value = max(0, -objective)", std::abs(res.value - expected_value), 0.0);
  add("value <= 1/2", std::max(0.0, res.value - 0.5), 1e-6);
  add("objective >= -1", std::max(0.0, -1.0 - res.objective), s.feas_tol);
  add("duality gap", res.duality_gap, s.gap_tol);
  add("primal residual", res.residuals.primal_infeasibility, s.feas_tol);
  add("dual residual", res.residuals.dual_infeasibility, s.feas_tol);

  for (Bipartition m : kBipartitions) {
    const auto& cert = res.certificate(m);
    const std::string tag = " [" + label(m) + "]";
    add("decomposition W = P + Q^T" + tag,
        max_abs(res.witness - cert.p - partial_transpose(cert.q, m)), s.feas_tol);
    add("hermiticity P,Q" + tag,
        std::max(hermiticity_error(cert.p), hermiticity_error(cert.q)), kHermitianTol);
    const ComplexMatrix ph = (cert.p + cert.p.adjoint()) * 0.5;
    const ComplexMatrix qh = (cert.q + cert.q.adjoint()) * 0.5;
    add("0 <= P <= I" + tag, detail::interval_violation(ph), s.feas_tol);
    add("0 <= Q <= I" + tag, detail::interval_violation(qh), s.feas_tol);
  }
  return rep;
}

}  // namespace gmnlab
