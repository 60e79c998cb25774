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

// Small dense primal-dual interior-point solver for linear matrix
// inequalities.
//
// Solves the pair
//
//   (D)  maximize   b·y
//        subject to Z_j = C_j - Σ_k y_k A_{j,k} ⪰ 0      for every block j
//
//   (P)  minimize   Σ_j <C_j, X_j>
//        subject to Σ_j <A_{j,k}, X_j> = b_k,  X_j ⪰ 0
//
// with real symmetric blocks, using the HKM search direction and a Mehrotra
// predictor-corrector. Constraint matrices are stored sparse; the Schur
// complement is formed densely, which suits problems with a few hundred
// variables and blocks of dimension up to a few dozen.
//
// The iteration is templated on the working scalar. Degenerate problems
// (optimal faces without strict complementarity) stall around sqrt(eps) in
// double; SdpPrecision::Extended runs the same iteration in long double.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gmnlab/matcore.hpp"

namespace gmnlab {

struct SparseEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Coefficient matrix of one variable inside one block. Symmetric; both
/// triangles are stored.
struct BlockTerm {
  int var = 0;
  std::vector<SparseEntry> entries;
};

struct LmiBlock {
  RealMatrix constant;
  std::vector<BlockTerm> terms;

  int dim() const { return static_cast<int>(constant.rows()); }
};

struct LmiProblem {
  int num_vars = 0;
  RealVector objective;  // b, maximized
  std::vector<LmiBlock> blocks;
};

struct SdpSettings {
  int max_iterations = 200;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  double value_floor = 1e-9;
};

enum class SdpStatus { Optimal, MaxIterations, NumericalTrouble };

inline std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIterations: return "MaxIterations";
    case SdpStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalTrouble;
  int iterations = 0;
  RealVector y;
  std::vector<RealMatrix> x;  // primal blocks
  std::vector<RealMatrix> z;  // dual slacks
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;      // |pobj - dobj|
  double complementarity = 0.0;  // Σ <X_j, Z_j>
  double primal_infeasibility = 0.0;  // max_k |b_k - A*(X)_k|
  double dual_infeasibility = 0.0;    // max entry of C - A(y) - Z
};

enum class SdpPrecision { Double, Extended };

struct SdpStart {
  RealVector y;          // strictly dual-feasible point; empty means y = 0
  double x_scale = 1.0;  // X_j = x_scale · I
};

namespace detail {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
Mat<T> block_operator(const LmiBlock& block, const Vec<T>& y) {
  Mat<T> out = Mat<T>::Zero(block.dim(), block.dim());
  for (const auto& term : block.terms) {
    const T coeff = y(term.var);
    if (coeff == T(0)) continue;
    for (const auto& e : term.entries) out(e.row, e.col) += coeff * T(e.value);
  }
  return out;
}

template <class T>
void accumulate_adjoint(const LmiBlock& block, const Mat<T>& g, Vec<T>& out) {
  for (const auto& term : block.terms) {
    T sum = 0;
    for (const auto& e : term.entries) sum += T(e.value) * g(e.row, e.col);
    out(term.var) += sum;
  }
}

template <class T>
Vec<T> adjoint(const LmiProblem& p, const std::vector<Mat<T>>& g) {
  Vec<T> out = Vec<T>::Zero(p.num_vars);
  for (std::size_t j = 0; j < p.blocks.size(); ++j) accumulate_adjoint(p.blocks[j], g[j], out);
  return out;
}

template <class T>
T inner(const Mat<T>& a, const Mat<T>& b) {
  return a.cwiseProduct(b).sum();
}

template <class T>
Mat<T> symmetric_part(const Mat<T>& m) {
  return T(0.5) * (m + m.transpose());
}

/// Largest α with X + α dX ⪰ 0 (infinity if unbounded); negative on failure.
template <class T>
T max_step(const Mat<T>& x, const Mat<T>& dx) {
  Eigen::LLT<Mat<T>> llt(x);
  if (llt.info() != Eigen::Success) return T(-1);
  const Mat<T> l_inv_dx = llt.matrixL().solve(dx);
  const Mat<T> s = llt.matrixL().solve(l_inv_dx.transpose());
  Eigen::SelfAdjointEigenSolver<Mat<T>> eig(symmetric_part<T>(s), Eigen::EigenvaluesOnly);
  const T lmin = eig.eigenvalues()(0);
  if (lmin >= T(0)) return std::numeric_limits<T>::infinity();
  return T(-1) / lmin;
}

template <class T>
SdpSolution solve_lmi_as(const LmiProblem& problem, const SdpSettings& settings,
                         const SdpStart& start) {
  const int m = problem.num_vars;
  const std::size_t nb = problem.blocks.size();
  int total_dim = 0;
  for (const auto& b : problem.blocks) total_dim += b.dim();

  const Vec<T> b = problem.objective.cast<T>();
  std::vector<Mat<T>> c(nb);
  for (std::size_t j = 0; j < nb; ++j) c[j] = problem.blocks[j].constant.cast<T>();
  auto op = [&](std::size_t j, const Vec<T>& v) { return block_operator<T>(problem.blocks[j], v); };

  Vec<T> y = start.y.size() == m ? Vec<T>(start.y.cast<T>()) : Vec<T>(Vec<T>::Zero(m));
  std::vector<Mat<T>> x(nb), z(nb), rd(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const int n = problem.blocks[j].dim();
    x[j] = T(start.x_scale) * Mat<T>::Identity(n, n);
    const Mat<T> slack = c[j] - op(j, y);
    Eigen::LLT<Mat<T>> llt(slack);
    if (llt.info() == Eigen::Success) {
      z[j] = slack;
      rd[j] = Mat<T>::Zero(n, n);
    } else {
      // infeasible dual start: shift into the interior and carry the residual
      const T scale = std::max(T(1), slack.cwiseAbs().maxCoeff());
      z[j] = scale * Mat<T>::Identity(n, n);
      rd[j] = slack - z[j];
    }
  }

  SdpSolution sol;
  auto export_iterate = [&] {
    sol.y = y.template cast<double>();
    sol.x.resize(nb);
    sol.z.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      sol.x[j] = x[j].template cast<double>();
      sol.z[j] = z[j].template cast<double>();
    }
  };

  T comp = 0;
  auto measure = [&](const Vec<T>& rp) {
    T dinf = 0;
    T pobj = 0;
    comp = 0;
    for (std::size_t j = 0; j < nb; ++j) {
      if (rd[j].size() > 0) dinf = std::max(dinf, rd[j].cwiseAbs().maxCoeff());
      pobj += inner<T>(c[j], x[j]);
      comp += inner<T>(x[j], z[j]);
    }
    const T dobj = b.dot(y);
    sol.primal_infeasibility = static_cast<double>(rp.cwiseAbs().maxCoeff());
    sol.dual_infeasibility = static_cast<double>(dinf);
    sol.primal_objective = static_cast<double>(pobj);
    sol.dual_objective = static_cast<double>(dobj);
    sol.duality_gap = static_cast<double>(std::abs(pobj - dobj));
    sol.complementarity = static_cast<double>(comp);
  };

  auto converged = [&] {
    return sol.primal_infeasibility <= settings.feas_tol &&
           sol.dual_infeasibility <= settings.feas_tol && sol.duality_gap <= settings.gap_tol &&
           sol.complementarity <= settings.gap_tol;
  };

  auto finish = [&](SdpStatus status) {
    sol.status = status;
    export_iterate();
    return sol;
  };

  std::vector<Mat<T>> z_inv(nb), zinv_rd_x(nb), rc(nb), dx(nb), dz(nb), dx_aff(nb), dz_aff(nb);
  Mat<T> schur(m, m);
  Mat<T> g;
  Vec<T> dy(m);

  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    const Vec<T> rp = b - adjoint<T>(problem, x);
    measure(rp);
    if (converged()) return finish(SdpStatus::Optimal);
    if (iter >= settings.max_iterations) return finish(SdpStatus::MaxIterations);
    const T mu = comp / T(total_dim);

    for (std::size_t j = 0; j < nb; ++j) {
      Eigen::LLT<Mat<T>> llt(z[j]);
      if (llt.info() != Eigen::Success) return finish(SdpStatus::NumericalTrouble);
      z_inv[j] = symmetric_part<T>(llt.solve(Mat<T>::Identity(z[j].rows(), z[j].cols())));
      zinv_rd_x[j] = z_inv[j] * rd[j] * x[j];
    }

    // Schur complement M_kl = Σ_j <A_{j,k}, Z_j^{-1} A_{j,l} X_j>
    schur.setZero();
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& blk = problem.blocks[j];
      const int n = blk.dim();
      g.resize(n, n);
      for (const auto& term_l : blk.terms) {
        g.setZero();
        for (const auto& e : term_l.entries) {
          g.noalias() += T(e.value) * z_inv[j].col(e.row) * x[j].row(e.col);
        }
        for (const auto& term_k : blk.terms) {
          T sum = 0;
          for (const auto& e : term_k.entries) sum += T(e.value) * g(e.row, e.col);
          schur(term_k.var, term_l.var) += sum;
        }
      }
    }
    schur = symmetric_part<T>(schur);

    Eigen::LLT<Mat<T>> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      const T shift = T(1e-13) * schur.diagonal().cwiseAbs().maxCoeff();
      schur_llt.compute(schur + shift * Mat<T>::Identity(m, m));
      if (schur_llt.info() != Eigen::Success) return finish(SdpStatus::NumericalTrouble);
    }

    const Vec<T> adj_zrdx = adjoint<T>(problem, zinv_rd_x);

    // given the complementarity right-hand side rc, fill dy, dz, dx
    auto direction = [&] {
      const Vec<T> rhs = rp - adjoint<T>(problem, rc) + adj_zrdx;
      dy = schur_llt.solve(rhs);
      for (std::size_t j = 0; j < nb; ++j) {
        dz[j] = rd[j] - op(j, dy);
        dx[j] = symmetric_part<T>(rc[j] - z_inv[j] * dz[j] * x[j]);
      }
    };

    auto step_lengths = [&](T& alpha_p, T& alpha_d) {
      alpha_p = std::numeric_limits<T>::infinity();
      alpha_d = std::numeric_limits<T>::infinity();
      for (std::size_t j = 0; j < nb; ++j) {
        const T sp = max_step<T>(x[j], dx[j]);
        const T sd = max_step<T>(z[j], dz[j]);
        if (sp < T(0) || sd < T(0)) return false;
        alpha_p = std::min(alpha_p, sp);
        alpha_d = std::min(alpha_d, sd);
      }
      return true;
    };

    // predictor
    for (std::size_t j = 0; j < nb; ++j) rc[j] = -x[j];
    direction();
    T ap = 0;
    T ad = 0;
    if (!step_lengths(ap, ad)) return finish(SdpStatus::NumericalTrouble);
    ap = std::min(T(1), ap);
    ad = std::min(T(1), ad);
    T mu_aff = 0;
    for (std::size_t j = 0; j < nb; ++j) {
      mu_aff += inner<T>(Mat<T>(x[j] + ap * dx[j]), Mat<T>(z[j] + ad * dz[j]));
    }
    mu_aff /= T(total_dim);
    const T ratio = std::clamp(mu_aff / mu, T(0), T(1));
    const T sigma = ratio * ratio * ratio;

    // corrector
    for (std::size_t j = 0; j < nb; ++j) {
      dx_aff[j] = dx[j];
      dz_aff[j] = dz[j];
      rc[j] = sigma * mu * z_inv[j] - x[j] - z_inv[j] * dz_aff[j] * dx_aff[j];
    }
    direction();
    if (!step_lengths(ap, ad)) return finish(SdpStatus::NumericalTrouble);
    const T step_fraction = T(0.98);
    ap = std::min(T(1), step_fraction * ap);
    ad = std::min(T(1), step_fraction * ad);

    for (std::size_t j = 0; j < nb; ++j) x[j] += ap * dx[j];
    y += ad * dy;
    for (std::size_t j = 0; j < nb; ++j) {
      rd[j] *= (T(1) - ad);
      z[j] = c[j] - op(j, y) - rd[j];
    }
  }
}

}  // namespace detail

/// Solves the LMI pair. The returned solution always holds the last iterate;
/// `status` says whether it met the tolerances in `settings`.
inline SdpSolution solve_lmi(const LmiProblem& problem, const SdpSettings& settings,
                             const SdpStart& start = {},
                             SdpPrecision precision = SdpPrecision::Double) {
  return precision == SdpPrecision::Double
             ? detail::solve_lmi_as<double>(problem, settings, start)
             : detail::solve_lmi_as<long double>(problem, settings, start);
}

}  // namespace gmnlab
