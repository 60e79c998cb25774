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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gmnlab/channel.hpp"
#include "gmnlab/gmn.hpp"
#include "oracles.hpp"

namespace gmnlab {
namespace {

DensityMatrix dm(const PureState& s) { return pure_to_density(s); }

/// σ on party `party` (0 = A, 1 = B, 2 = C) tensored with τ on the other two,
/// which keep their relative order.
ComplexMatrix product_across(int party, const ComplexMatrix& sigma, const ComplexMatrix& tau) {
  ComplexMatrix out(8, 8);
  auto split = [party](int idx, int& single, int& pair) {
    const int bits[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
    single = bits[party];
    pair = 0;
    for (int q = 0; q < 3; ++q)
      if (q != party) pair = 2 * pair + bits[q];
  };
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      int si, pi, sj, pj;
      split(i, si, pi);
      split(j, sj, pj);
      out(i, j) = sigma(si, sj) * tau(pi, pj);
    }
  }
  return out;
}

ComplexMatrix random_qubit_state(std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  ComplexMatrix g(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(nd(gen), nd(gen));
  ComplexMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

ComplexMatrix random_two_qubit_state(std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  ComplexMatrix g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(nd(gen), nd(gen));
  ComplexMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

TEST(GenuineNegativity, GhzAnchor) {
  const GmnResult r = genuine_negativity(dm(ghz1()));
  EXPECT_EQ(r.status, GmnStatus::Optimal);
  EXPECT_NEAR(r.value, 0.5, 1e-6);
  EXPECT_TRUE(verify_certificate(r, dm(ghz1())).passed());
}

TEST(GenuineNegativity, WAnchor) {
  const GmnResult r = genuine_negativity(dm(w_state()));
  EXPECT_NEAR(r.value, 0.443, 5e-3);
}

TEST(GenuineNegativity, WRegressionValue) {
  // optimum of the witness program for |W>, computed at gap_tol 1e-10
  SdpSettings s;
  s.gap_tol = 1e-10;
  const GmnResult r = genuine_negativity(dm(w_state()), s);
  EXPECT_NEAR(r.value, 0.4428090416, 1e-9);
}

TEST(GenuineNegativity, SeparableStatesGiveZero) {
  EXPECT_EQ(genuine_negativity(validate_density(identity(8) / 8.0)).value, 0.0);
  // |0><0| ⊗ |Φ+><Φ+|
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityMatrix rho = validate_density(kron(zero, bell * bell.adjoint()));
  EXPECT_EQ(genuine_negativity(rho).value, 0.0);
  EXPECT_EQ(genuine_negativity(dm(basis_state(0))).value, 0.0);
}

TEST(GenuineNegativity, ResultInvariants) {
  std::mt19937_64 gen(51);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = validate_density(oracle::random_density(gen, 1 + trial % 4));
    const GmnResult r = genuine_negativity(rho);
    EXPECT_LE(r.objective, 1e-8);
    EXPECT_GE(r.objective, -1.0);
    EXPECT_LE(r.value, 0.5 + 1e-6);
    EXPECT_NEAR(frobenius_real(r.witness, rho.matrix()), r.objective, 10 * r.settings.gap_tol);
    for (Bipartition m : kBipartitions) {
      const auto& c = r.certificate(m);
      EXPECT_LE(max_abs(r.witness - c.p - partial_transpose(c.q, m)), 1e-8);
    }
    const VerificationReport rep = verify_certificate(r, rho);
    for (const auto& check : rep.checks) EXPECT_TRUE(check.passed()) << check.name << " " << check.violation;
  }
}

TEST(GenuineNegativity, ValueFloor) {
  SdpSettings s;
  s.value_floor = 1e-3;
  // GHZ at Γt = 2 has E = e^{-9}/2 ≈ 6e-5, below the floor
  const GmnResult r = genuine_negativity(evolve(dm(ghz1()), 2.0), s);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_LT(r.objective, 0.0);
}

TEST(GenuineNegativity, SolverFailureCarriesBestIterate) {
  SdpSettings s;
  s.max_iterations = 2;
  try {
    genuine_negativity(dm(w_state()), s);
    FAIL() << "expected a solver error";
  } catch (const SolverError& e) {
    EXPECT_TRUE(e.code() == ErrorCode::SolverFailure || e.code() == ErrorCode::InfeasibleNumerics);
    EXPECT_EQ(e.best_iterate().status, GmnStatus::MaxIterations);
    EXPECT_EQ(e.best_iterate().iterations, 2);
  }
  EXPECT_EQ(solve_gmn(dm(w_state()), s).status, GmnStatus::MaxIterations);
}

TEST(BipartiteNegativity, KnownValues) {
  for (Bipartition m : kBipartitions) {
    // oracle: Jacobi spectrum of the bitwise partial transpose
    const auto ev = oracle::hermitian_eigenvalues(
        oracle::partial_transpose_bits(dm(ghz1()).matrix(), static_cast<int>(m)));
    double neg = 0.0;
    for (double v : ev) if (v < 0) neg -= v;
    EXPECT_NEAR(neg, 0.5, 1e-12);
    EXPECT_NEAR(bipartite_negativity(dm(ghz1()), m), neg, 1e-12);
    EXPECT_NEAR(bipartite_negativity(dm(basis_state(0)), m), 0.0, 1e-15);
  }
  // pure-state oracle: N = ((Σ √λ_k)² - 1)/2 over Schmidt coefficients (2/3, 1/3)
  const double schmidt = std::sqrt(2.0 / 3.0) + std::sqrt(1.0 / 3.0);
  const double expected = (schmidt * schmidt - 1.0) / 2.0;
  EXPECT_NEAR(expected, std::sqrt(2.0) / 3.0, 1e-15);
  EXPECT_NEAR(bipartite_negativity(dm(w_state()), Bipartition::A_BC), expected, 1e-12);
}

TEST(VerifyCertificate, DetectsConstructedViolations) {
  const DensityMatrix rho = dm(ghz1());
  const GmnResult good = genuine_negativity(rho);
  EXPECT_TRUE(verify_certificate(good, rho).passed());

  GmnResult bad_witness = good;
  bad_witness.witness(2, 2) += 0.01;
  const auto rep = verify_certificate(bad_witness, rho);
  EXPECT_FALSE(rep.passed());
  bool flagged = false;
  for (const auto& c : rep.checks) {
    if (c.name.rfind("decomposition", 0) == 0 && !c.passed()) {
      flagged = true;
      EXPECT_NEAR(c.violation, 0.01, 1e-9);
    }
  }
  EXPECT_TRUE(flagged);

  GmnResult bad_bound = good;
  auto& cert = bad_bound.certificates[0];
  const auto eig = eig_hermitian(cert.q);
  RealVector vals = eig.values;
  vals(vals.size() - 1) = 1.05;
  cert.q = eig.vectors * vals.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  bool bound_flagged = false;
  for (const auto& c : verify_certificate(bad_bound, rho).checks) {
    if (c.name == "0 <= Q <= I [A|BC]") {
      bound_flagged = !c.passed();
      EXPECT_NEAR(c.violation, 0.05, 1e-9);
    }
  }
  EXPECT_TRUE(bound_flagged);
}

// ---------------------------------------------------------------------------
// properties

TEST(GmnProperties, SandwichedByBipartiteNegativity) {
  std::mt19937_64 gen(61);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho = trial < 100
                                  ? dm(random_pure_at(RngSeed{61}, trial))
                                  : validate_density(oracle::random_density(gen, 1 + trial % 8));
    const double e = genuine_negativity(rho).value;
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, min_bipartite_negativity(rho) + 1e-6) << "trial " << trial;
  }
}

TEST(GmnProperties, LocalUnitaryInvariance) {
  std::mt19937_64 gen(62);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho = trial % 2 ? oracle::random_density(gen, 2)
                                        : dm(random_pure_at(RngSeed{62}, trial)).matrix();
    const ComplexMatrix u = kron(kron(oracle::random_unitary(gen, 2), oracle::random_unitary(gen, 2)),
                                 oracle::random_unitary(gen, 2));
    const double before = genuine_negativity(validate_density(rho)).value;
    const double after = genuine_negativity(validate_density(u * rho * u.adjoint())).value;
    EXPECT_NEAR(before, after, 1e-5);
  }
}

TEST(GmnProperties, Convexity) {
  std::mt19937_64 gen(63);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix r1 = dm(random_pure_at(RngSeed{63}, 2 * trial)).matrix();
    const ComplexMatrix r2 = trial % 2 ? oracle::random_density(gen, 2)
                                       : dm(random_pure_at(RngSeed{63}, 2 * trial + 1)).matrix();
    const double p = u(gen);
    const double mix = genuine_negativity(validate_density(p * r1 + (1 - p) * r2)).value;
    const double bound = p * genuine_negativity(validate_density(r1)).value +
                         (1 - p) * genuine_negativity(validate_density(r2)).value;
    EXPECT_LE(mix, bound + 1e-6);
  }
}

TEST(GmnProperties, PptMixturesEvaluateToZero) {
  std::mt19937_64 gen(64);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    ComplexMatrix mix = ComplexMatrix::Zero(8, 8);
    double total = 0.0;
    for (int party = 0; party < 3; ++party) {
      const double w = u(gen);
      // product across party|rest is PPT for that bipartition
      mix += w * product_across(party, random_qubit_state(gen), random_two_qubit_state(gen));
      total += w;
    }
    const DensityMatrix rho = validate_density(mix / total);
    EXPECT_LE(genuine_negativity(rho).value, 1e-6);
  }
}

TEST(GmnProperties, MonotoneUnderDephasing) {
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho = dm(k % 2 ? random_weighted_graph_at(RngSeed{65}, k)
                                       : random_pure_at(RngSeed{65}, k));
    double prev = genuine_negativity(rho).value;
    for (double gt : {0.1, 0.3, 0.8, 2.0, 5.0}) {
      const double e = genuine_negativity(evolve(rho, gt)).value;
      EXPECT_LE(e, prev + 1e-6);
      prev = e;
    }
    EXPECT_LE(genuine_negativity(asymptotic_map(rho)).value, prev + 1e-6);
  }
}

TEST(GmnProperties, Deterministic) {
  const DensityMatrix rho = dm(random_pure_at(RngSeed{66}, 0));
  const GmnResult a = genuine_negativity(rho);
  const GmnResult b = genuine_negativity(rho);
  EXPECT_LE(std::abs(a.value - b.value), 10 * a.settings.gap_tol);
  EXPECT_EQ(a.witness, b.witness);
}

}  // namespace
}  // namespace gmnlab
