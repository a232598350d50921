// Copyright 2026 The qknit Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qknit/gates.hpp"
#include "qknit/tensor.hpp"
#include "test_util.hpp"

namespace qknit {
namespace {

DenseOperator bell_projector() { return projector(states::max_entangled(2)); }

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
}

TEST(Kron, XXMapsZeroZeroToOneOne) {
  const StateVector out = kron(gates::X(), gates::X()) * basis_ket(4, 0);
  EXPECT_EQ(out, basis_ket(4, 3));
}

TEST(Kron, ZZSpectrum) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(kron(gates::Z(), gates::Z()));
  // diag(1,-1,-1,1) sorted ascending
  EXPECT_NEAR(ev(0), -1.0, 1e-12);
  EXPECT_NEAR(ev(1), -1.0, 1e-12);
  EXPECT_NEAR(ev(2), 1.0, 1e-12);
  EXPECT_NEAR(ev(3), 1.0, 1e-12);
}

TEST(Kron, FirstFactorMostSignificant) {
  DenseOperator a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const DenseOperator k = kron(a, b);
  EXPECT_EQ(k(0, 3), Complex(2.0));  // a(0,1) * b(0,1)
  EXPECT_EQ(k(2, 1), Complex(3.0));  // a(1,0) * b(0,1)
}

TEST(Kron, SizeCapRejectsHugeProducts) {
  const DenseOperator big = DenseOperator::Identity(512, 1);
  EXPECT_THROW(kron(big, DenseOperator::Identity(256, 1)), SizeCap);
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(1);
  const DenseOperator rho = testing::random_density(2, rng);
  const DenseOperator sigma = 3.0 * testing::random_density(3, rng);
  const DenseOperator out = partial_trace(kron(rho, sigma), SubsystemDims{2, 3}, {0});
  EXPECT_LT(testing::max_abs(out - 3.0 * rho), 1e-12);
}

TEST(PartialTrace, BellIsMaximallyMixed) {
  const DenseOperator out = partial_trace(bell_projector(), SubsystemDims{2, 2}, {0});
  EXPECT_LT(testing::max_abs(out - identity(2) / 2.0), 1e-15);
}

TEST(PartialTrace, ZeroOneKeepsFirst) {
  const DenseOperator out = partial_trace(projector(basis_ket(4, 1)), SubsystemDims{2, 2}, {0});
  EXPECT_LT(testing::max_abs(out - projector(basis_ket(2, 0))), 1e-15);
}

TEST(PartialTrace, KeepsMiddleFactorAndPreservesTrace) {
  std::mt19937_64 rng(2);
  const DenseOperator a = testing::random_density(2, rng);
  const DenseOperator b = testing::random_density(3, rng);
  const DenseOperator c = testing::random_density(2, rng);
  const DenseOperator out = partial_trace(kron({a, b, c}), SubsystemDims{2, 3, 2}, {1});
  EXPECT_LT(testing::max_abs(out - b), 1e-12);
  const DenseOperator rho = testing::random_density(12, rng);
  EXPECT_NEAR(partial_trace(rho, SubsystemDims{2, 3, 2}, {0, 2}).trace().real(), 1.0, 1e-12);
}

TEST(PartialTrace, DimMismatch) {
  EXPECT_THROW(partial_trace(identity(4), SubsystemDims{2, 3}, {0}), DimMismatch);
}

TEST(PartialTranspose, ProductOperator) {
  std::mt19937_64 rng(3);
  const DenseOperator a = testing::random_gaussian(2, 2, rng);
  const DenseOperator b = testing::random_gaussian(3, 3, rng);
  const DenseOperator out = partial_transpose(kron(a, b), SubsystemDims{2, 3}, 1);
  EXPECT_LT(testing::max_abs(out - kron(a, DenseOperator(b.transpose()))), 1e-14);
}

TEST(PartialTranspose, BellMinimumEigenvalue) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(partial_transpose(bell_projector(), SubsystemDims{2, 2}, 1));
  // PT of the Bell projector is SWAP/2 with spectrum {1/2,1/2,1/2,-1/2}
  EXPECT_NEAR(ev.minCoeff(), -0.5, 1e-14);
}

TEST(PartialTranspose, InvolutionOnRandomHermitian) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseOperator h = testing::random_hermitian(4, rng);
    for (std::size_t s = 0; s < 2; ++s) {
      const DenseOperator twice = partial_transpose(partial_transpose(h, SubsystemDims{2, 2}, s), SubsystemDims{2, 2}, s);
      EXPECT_EQ(twice, h);
    }
  }
}

TEST(Schmidt, BellState) {
  const auto s = schmidt(states::max_entangled(2), SubsystemDims{2, 2});
  ASSERT_EQ(s.coefficients.size(), 2U);
  EXPECT_NEAR(s.coefficients[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.coefficients[1], 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Schmidt, ProductState) {
  const StateVector v = kron(states::plus(), states::minus_i());
  const auto s = schmidt(v, SubsystemDims{2, 2});
  EXPECT_NEAR(s.coefficients[0], 1.0, 1e-12);
  EXPECT_NEAR(s.coefficients[1], 0.0, 1e-12);
}

TEST(Schmidt, UnequalCoefficients) {
  StateVector v = StateVector::Zero(4);
  v(0) = 1.0 / 3.0;
  v(3) = 2.0 * std::sqrt(2.0) / 3.0;
  const auto s = schmidt(v, SubsystemDims{2, 2});
  EXPECT_NEAR(s.coefficients[0], 2.0 * std::sqrt(2.0) / 3.0, 1e-12);
  EXPECT_NEAR(s.coefficients[1], 1.0 / 3.0, 1e-12);
}

TEST(Schmidt, RejectsNonBipartite) {
  EXPECT_THROW(schmidt(basis_ket(8, 0), SubsystemDims{2, 2, 2}), DimMismatch);
}

TEST(Schmidt, RandomStatesReconstruct) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t da = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t db = 2 + static_cast<std::size_t>((trial / 3) % 3);
    const StateVector v = testing::random_state(da * db, rng);
    const auto s = schmidt(v, SubsystemDims{da, db});
    double sq = 0.0;
    StateVector rec = StateVector::Zero(v.size());
    for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
      sq += s.coefficients[k] * s.coefficients[k];
      rec += s.coefficients[k] * kron(s.left.col(static_cast<Eigen::Index>(k)), s.right.col(static_cast<Eigen::Index>(k)));
      if (k > 0) {
        EXPECT_GE(s.coefficients[k - 1], s.coefficients[k]);
      }
    }
    EXPECT_NEAR(sq, 1.0, 1e-9);
    EXPECT_LT((rec - v).norm(), 1e-8);
  }
}

double reconstruction_error(const DenseOperator& u, const OperatorSchmidtDecomposition& s) {
  DenseOperator rec = DenseOperator::Zero(u.rows(), u.cols());
  for (std::size_t k = 0; k < s.coefficients.size(); ++k) rec += s.coefficients[k] * kron(s.left[k], s.right[k]);
  return (rec - u).norm();
}

TEST(OperatorSchmidt, Cnot) {
  const auto s = operator_schmidt(gates::CNOT(), SubsystemDims{2, 2});
  ASSERT_EQ(s.coefficients.size(), 2U);
  EXPECT_NEAR(s.coefficients[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.coefficients[1], 1.0 / std::sqrt(2.0), 1e-12);
  // Left factors span {I, Z}: diagonal. Right factors span {I, X}: symmetric with equal diagonal.
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_LT(std::abs(s.left[k](0, 1)) + std::abs(s.left[k](1, 0)), 1e-12);
    EXPECT_LT(std::abs(s.right[k](0, 0) - s.right[k](1, 1)) + std::abs(s.right[k](0, 1) - s.right[k](1, 0)), 1e-12);
  }
  EXPECT_LT(reconstruction_error(gates::CNOT(), s), 1e-12);
}

TEST(OperatorSchmidt, SwapHasFourEqualCoefficients) {
  const auto s = operator_schmidt(gates::SWAP(), SubsystemDims{2, 2});
  ASSERT_EQ(s.coefficients.size(), 4U);
  for (double c : s.coefficients) EXPECT_NEAR(c, 0.5, 1e-12);
}

TEST(OperatorSchmidt, IdentityHasSingleCoefficient) {
  const auto s = operator_schmidt(identity(4), SubsystemDims{2, 2});
  ASSERT_EQ(s.coefficients.size(), 1U);
  EXPECT_NEAR(s.coefficients[0], 1.0, 1e-12);
}

TEST(OperatorSchmidt, FactorsOrthonormalAndRandomUnitariesReconstruct) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const DenseOperator u = testing::random_unitary(4, rng);
    const auto s = operator_schmidt(u, SubsystemDims{2, 2});
    EXPECT_LT(reconstruction_error(u, s), 1e-8);
    double sq = 0.0;
    for (double c : s.coefficients) sq += c * c;
    EXPECT_NEAR(sq, 1.0, 1e-9);
    for (std::size_t j = 0; j < s.left.size(); ++j) {
      for (std::size_t k = 0; k < s.left.size(); ++k) {
        const Complex ip = (s.left[j].adjoint() * s.left[k]).trace() / 2.0;
        EXPECT_NEAR(std::abs(ip - Complex(j == k ? 1.0 : 0.0)), 0.0, 1e-9);
      }
    }
  }
}

TEST(TraceNorm, DensityMatrixHasUnitTraceNorm) {
  std::mt19937_64 rng(7);
  EXPECT_NEAR(trace_norm(testing::random_density(5, rng)), 1.0, 1e-12);
}

TEST(TraceNorm, PauliZ) { EXPECT_NEAR(trace_norm(gates::Z()), 2.0, 1e-14); }

TEST(TraceNorm, BellMinusMaximallyMixed) {
  // eigenvalues 3/4 and -1/4 (three times)
  EXPECT_NEAR(trace_norm(bell_projector() - identity(4) / 4.0), 1.5, 1e-12);
}

TEST(Predicates, HermitianPsdUnitary) {
  EXPECT_TRUE(is_unitary(gates::H()));
  EXPECT_FALSE(is_unitary(2.0 * gates::H()));
  EXPECT_TRUE(is_hermitian(gates::Y()));
  EXPECT_FALSE(is_hermitian(gates::S()));
  EXPECT_TRUE(is_psd(bell_projector()));
  EXPECT_FALSE(is_psd(gates::Z()));
}

TEST(Permute, SwapFactorsOfProduct) {
  std::mt19937_64 rng(8);
  const DenseOperator a = testing::random_gaussian(2, 2, rng);
  const DenseOperator b = testing::random_gaussian(3, 3, rng);
  EXPECT_LT(testing::max_abs(permute_subsystems(kron(a, b), SubsystemDims{2, 3}, {1, 0}) - kron(b, a)), 1e-14);
}

}  // namespace
}  // namespace qknit
