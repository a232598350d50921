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

#include <random>

#include "qknit/channels.hpp"
#include "test_util.hpp"

namespace qknit {
namespace {

using testing::max_abs;

TEST(ChoiOf, IdentityIsBellProjector) {
  const ChoiOperator c = choi_of(KrausChannel::unitary(identity(2)));
  EXPECT_LT(max_abs(c.matrix - projector(states::max_entangled(2))), 1e-15);
  EXPECT_NEAR(c.matrix.trace().real(), 1.0, 1e-15);
}

TEST(ChoiOf, FullyDepolarizingIsMaximallyMixed) {
  EXPECT_LT(max_abs(choi_of(depolarizing(1.0)).matrix - identity(4) / 4.0), 1e-15);
}

TEST(ChoiOf, TGateChoiIsPureAndMaximallyEntangled) {
  const ChoiOperator c = choi_of(KrausChannel::unitary(gates::T()));
  // (id (x) T)|Psi> = (|00> + e^{i pi/4}|11>)/sqrt2
  StateVector v = StateVector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = std::exp(kI * (std::numbers::pi / 4)) / std::sqrt(2.0);
  EXPECT_LT(max_abs(c.matrix - projector(v)), 1e-15);
  const auto s = schmidt(v, SubsystemDims{2, 2});
  EXPECT_NEAR(s.coefficients[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.coefficients[1], 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(ChoiOf, TGatePauliExpansionMagnitudes) {
  // T = e^{i pi/8}(cos(pi/8) I - i sin(pi/8) Z)
  const DenseOperator t = gates::T();
  EXPECT_NEAR(std::abs((t * gates::I()).trace() / 2.0), std::cos(std::numbers::pi / 8), 1e-14);
  EXPECT_NEAR(std::abs((t * gates::Z()).trace() / 2.0), std::sin(std::numbers::pi / 8), 1e-14);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(11);
  const DenseOperator rho = testing::random_density(2, rng);
  EXPECT_LT(max_abs(qknit::apply(KrausChannel::unitary(identity(2)), rho) - rho), 1e-15);
}

TEST(Apply, XFlipsZero) {
  EXPECT_LT(max_abs(qknit::apply(KrausChannel::unitary(gates::X()), projector(states::zero())) - projector(states::one())), 1e-15);
}

TEST(Apply, FullDepolarizingGivesMaximallyMixed) {
  std::mt19937_64 rng(12);
  EXPECT_LT(max_abs(qknit::apply(depolarizing(1.0), testing::random_density(2, rng)) - identity(2) / 2.0), 1e-15);
}

TEST(Apply, ChoiFormAgreesWithKrausForm) {
  std::mt19937_64 rng(13);
  const KrausChannel c = testing::random_cptp(2, 4, 3, rng);
  const DenseOperator rho = testing::random_density(2, rng);
  EXPECT_LT(max_abs(qknit::apply(choi_of(c), rho) - qknit::apply(c, rho)), 1e-12);
}

TEST(Apply, DimMismatch) {
  EXPECT_THROW(qknit::apply(depolarizing(0.1), identity(4)), DimMismatch);
}

TEST(Ptm, DepolarizingIsDiagonal) {
  const double p = 0.3;
  const auto m = ptm_of(depolarizing(p));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(4, 4) * (1 - p);
  expected(0, 0) = 1.0;
  EXPECT_LT((m.matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ptm, UnotMapIsMinusIdentityOnBloch) {
  // rho -> tr[rho] I - rho has Choi I/2 - Phi_id
  const ChoiOperator unot{identity(4) / 2.0 - projector(states::max_entangled(2)), SubsystemDims{2}, SubsystemDims{2}};
  const auto m = ptm_of(unot);
  Eigen::MatrixXd expected = -Eigen::MatrixXd::Identity(4, 4);
  expected(0, 0) = 1.0;
  EXPECT_LT((m.matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ptm, IdentityChannel) {
  const auto m = ptm_of(KrausChannel::unitary(identity(4)));
  EXPECT_LT((m.matrix - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ptm, RejectsQutrits) {
  EXPECT_THROW(ptm_of(KrausChannel::unitary(identity(3))), DimMismatch);
}

TEST(Ptm, CompositionIsMatrixProduct) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausChannel a = testing::random_cptp(4, 4, 2, rng);
    const KrausChannel b = testing::random_cptp(4, 4, 3, rng);
    const Eigen::MatrixXd lhs = ptm_of(compose(a, b)).matrix;
    const Eigen::MatrixXd rhs = ptm_of(a).matrix * ptm_of(b).matrix;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Ptm, PhysicalEntriesBounded) {
  std::mt19937_64 rng(15);
  const auto m = ptm_of(testing::random_cptp(2, 2, 4, rng));
  EXPECT_LE(m.matrix.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
}

TEST(WalshHadamard, IdentityColumn) {
  EXPECT_EQ(walsh_hadamard({1, 0, 0, 0}), (std::vector<double>{1, 1, 1, 1}));
}

TEST(WalshHadamard, AllOnes) {
  EXPECT_EQ(walsh_hadamard({1, 1, 1, 1}), (std::vector<double>{4, 0, 0, 0}));
}

TEST(WalshHadamard, MatchesSymplecticDefinition) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> nd;
  std::vector<double> x(16);
  for (double& v : x) v = nd(rng);
  const auto w = walsh_hadamard(x);
  for (std::size_t i = 0; i < 16; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 16; ++j) {
      // commutation sign from the matrices themselves
      const DenseOperator qi = pauli_string(i, 2), qj = pauli_string(j, 2);
      const bool commute = max_abs(qi * qj - qj * qi) < 1e-12;
      acc += commute ? x[j] : -x[j];
    }
    EXPECT_NEAR(w[i], acc, 1e-12);
  }
}

TEST(WalshHadamard, SquaredIsScaledIdentity) {
  const std::vector<double> x{0.5, -1.25, 3.0, 0.75};
  const auto ww = walsh_hadamard(walsh_hadamard(x));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(ww[i], 4 * x[i]);
  std::vector<double> y(16);
  for (std::size_t i = 0; i < 16; ++i) y[i] = static_cast<double>(i) - 7.5;
  const auto yy = walsh_hadamard(walsh_hadamard(y));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(yy[i], 16 * y[i]);
}

TEST(WalshHadamard, BadLength) {
  EXPECT_THROW(walsh_hadamard({1, 2, 3}), DimMismatch);
}

TEST(PauliDiagonalInverse, Depolarizing) {
  for (double p : {0.1, 0.5, 0.9}) {
    const auto d = pauli_diagonal_inverse({1, 1 - p, 1 - p, 1 - p});
    EXPECT_NEAR(d.gamma, (1 + p / 2) / (1 - p), 1e-12);
    // the Pauli channel sum r_i Q_i.Q_i composed with depolarizing is the identity
    std::vector<DenseOperator> ops;
    DenseOperator choi = DenseOperator::Zero(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      choi += d.coefficients[i] * choi_of(compose(KrausChannel::unitary(pauli(i)), depolarizing(p))).matrix;
    }
    EXPECT_LT(max_abs(choi - projector(states::max_entangled(2))), 1e-12);
  }
  EXPECT_NEAR(pauli_diagonal_inverse({1, 0.5, 0.5, 0.5}).gamma, 2.5, 1e-12);
}

TEST(PauliDiagonalInverse, Identity) {
  const auto d = pauli_diagonal_inverse({1, 1, 1, 1});
  EXPECT_EQ(d.coefficients, (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(d.gamma, 1.0);
}

TEST(PauliDiagonalInverse, Unot) {
  const auto d = pauli_diagonal_inverse({1, -1, -1, -1});
  EXPECT_EQ(d.coefficients, (std::vector<double>{-0.5, 0.5, 0.5, 0.5}));
  EXPECT_EQ(d.gamma, 2.0);
}

TEST(PauliDiagonalInverse, ZeroEntryNotInvertible) {
  EXPECT_THROW(pauli_diagonal_inverse({1, 0, 1, 1}), NotInvertible);
}

TEST(ReconstructSuperop, ComputationalBasisSignedMap) {
  const WeightedInstrument w({{KrausChannel({projector(states::zero())}), 1.0},
                              {KrausChannel({projector(states::one())}), -1.0}});
  // Choi = (1/2)(|00><00| - |11><11|)
  DenseOperator expected = DenseOperator::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = -0.5;
  EXPECT_LT(max_abs(reconstruct_superop(w).matrix - expected), 1e-15);
  EXPECT_TRUE(w.is_valid());
}

TEST(ReconstructSuperop, UnitWeightsGiveMarginal) {
  std::mt19937_64 rng(17);
  const KrausChannel c = testing::random_cptp(2, 2, 3, rng);
  std::vector<WeightedInstrument::Branch> bs;
  for (const auto& k : c.kraus_ops) bs.push_back({KrausChannel({k}), 1.0});
  const ChoiOperator r = reconstruct_superop(WeightedInstrument(bs));
  EXPECT_LT(max_abs(r.matrix - choi_of(c).matrix), 1e-14);
  EXPECT_NEAR(r.matrix.trace().real(), 1.0, 1e-12);
}

TEST(ReconstructSuperop, ZeroWeightsGiveZero) {
  const WeightedInstrument w({{KrausChannel({projector(states::zero())}), 0.0},
                              {KrausChannel({projector(states::one())}), 0.0}});
  EXPECT_EQ(max_abs(reconstruct_superop(w).matrix), 0.0);
}

TEST(IsPpt, Examples) {
  const ChoiOperator product = choi_of(KrausChannel({kron(states::zero(), states::plus().adjoint())}));
  EXPECT_TRUE(is_ppt(product, {1}));
  EXPECT_FALSE(is_ppt(choi_of(KrausChannel::unitary(identity(2))), {1}));
  EXPECT_TRUE(is_ppt(choi_of(depolarizing(1.0)), {1}));
}

TEST(IsPpt, TwoPartyGrouping) {
  // CNOT Choi on (A_in, B_in, A_out, B_out); B side is factors 1 and 3
  const ChoiOperator c = choi_of(KrausChannel::unitary(gates::CNOT()));
  EXPECT_FALSE(is_ppt(c, {1, 3}));
  const ChoiOperator local = choi_of(KrausChannel::unitary(kron(gates::H(), gates::S())));
  EXPECT_TRUE(is_ppt(local, {1, 3}));
}

TEST(KrausOf, RoundTripOnRandomChannels) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t din = 2 + static_cast<std::size_t>(trial % 2) * 2;
    const KrausChannel c = testing::random_cptp(din, 2, 1 + static_cast<std::size_t>(trial % 4), rng);
    const ChoiOperator choi = choi_of(c);
    const KrausChannel back = kraus_of(choi);
    EXPECT_LT(max_abs(choi_of(back).matrix - choi.matrix), 1e-8);
    EXPECT_TRUE(back.is_tp(1e-8));
  }
}

TEST(KrausChannel, TraceConditions) {
  EXPECT_TRUE(depolarizing(0.2).is_tp());
  const KrausChannel half({projector(states::zero())});
  EXPECT_FALSE(half.is_tp());
  EXPECT_TRUE(half.is_trace_nonincreasing());
  EXPECT_FALSE(KrausChannel({2.0 * identity(2)}).is_trace_nonincreasing());
}

}  // namespace
}  // namespace qknit
