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

#include <cmath>
#include <numbers>
#include <random>

#include "qknit/cutting.hpp"
#include "qknit/engine.hpp"
#include "qknit/extent.hpp"
#include "test_util.hpp"

namespace qknit {
namespace {

const double kRt2 = std::numbers::sqrt2;

EstimateOptions options(std::size_t shots, std::uint64_t seed, EstimatorMode mode = EstimatorMode::Analytic) {
  EstimateOptions o;
  o.shots = shots;
  o.seed = seed;
  o.mode = mode;
  o.threads = 1;
  return o;
}

Circuit t_on_plus() {
  Circuit c(1);
  c.prep(states::plus(), {0}).gate(gates::T(), {0}, "T");
  return c;
}

Circuit t_qpd_on_plus() {
  Circuit c(1);
  c.prep(states::plus(), {0}).qpd(t_gate_qpd(), {0});
  return c;
}

Circuit bell_circuit() {
  Circuit c(2);
  c.gate(gates::H(), {0}, "H").gate(gates::CNOT(), {0, 1}, "CNOT");
  return c;
}

/// Bell pair whose first qubit crosses a measure-and-prepare wire cut before the CNOT.
Circuit bell_wire_cut() {
  Circuit c(2);
  c.gate(gates::H(), {0}, "H").qpd(wirecut_mpc_qpd(1), {0}).gate(gates::CNOT(), {0, 1}, "CNOT");
  return c;
}

DenseOperator random_two_qubit_channel_op(std::mt19937_64& rng) { return testing::random_unitary(4, rng); }

TEST(Exact, BasicExamples) {
  EXPECT_NEAR(exact_expectation(Circuit(1), pauli_observable("Z")), 1.0, 1e-15);
  EXPECT_NEAR(exact_expectation(bell_circuit(), pauli_observable("ZZ")), 1.0, 1e-14);
  EXPECT_NEAR(exact_expectation(t_on_plus(), pauli_observable("X")), 1 / kRt2, 1e-14);
}

TEST(Exact, ObservableChecks) {
  EXPECT_THROW(exact_expectation(Circuit(1), Observable{2.0 * gates::Z(), {0}}), DomainError);
  EXPECT_THROW(exact_expectation(Circuit(1), Observable{gates::S(), {0}}), DomainError);
  EXPECT_THROW(exact_expectation(Circuit(1), pauli_observable("Z", {1})), DomainError);
  EXPECT_THROW(exact_expectation(Circuit(11), pauli_observable("Z")), SizeCap);
}

TEST(Exact, SiteValidation) {
  Circuit c(2);
  c.gate(gates::CNOT(), {0}, "bad");
  EXPECT_THROW(exact_expectation(c, pauli_observable("Z")), DimMismatch);
  Circuit d(2);
  d.gate(gates::CNOT(), {0, 0}, "bad");
  EXPECT_THROW(exact_expectation(d, pauli_observable("Z")), DomainError);
}

TEST(ExactQpd, MatchesOracleForCatalogQpds) {
  EXPECT_NEAR(exact_qpd_expectation(t_qpd_on_plus(), pauli_observable("X")), 1 / kRt2, 1e-12);
  EXPECT_NEAR(exact_qpd_expectation(bell_wire_cut(), pauli_observable("ZZ")), 1.0, 1e-12);
  EXPECT_NEAR(exact_qpd_expectation(Circuit(2), pauli_observable("ZZ")), 1.0, 1e-15);

  std::mt19937_64 rng(5);
  const std::vector<std::pair<QuasiDecomposition, std::size_t>> qpds = {
      {t_gate_qpd(), 1}, {unot_qpd(), 1}, {transpose_qpd(2), 1}, {wirecut_mpc_qpd(2), 2}, {wirecut_ebc_qpd(4), 2},
      {two_qubit_gate_qpd(gates::CNOT()), 2}, {two_qubit_gate_qpd(gates::CR(0.7)), 2}, {magic_state_qpd(), 1},
      {pec_basis_and_inverse(0.1).inverse, 1}};
  for (const auto& [q, arity] : qpds) {
    Circuit c(4);
    c.prep(testing::random_state(16, rng), {0, 1, 2, 3});
    Targets t = arity == 1 ? Targets{2} : Targets{3, 1};
    c.qpd(q, t).gate(testing::random_unitary(4, rng), {1, 2});
    const Observable obs{testing::random_hermitian(4, rng), {1, 2}};
    const Observable scaled{obs.op / operator_norm(obs.op), obs.targets};
    EXPECT_NEAR(exact_qpd_expectation(c, scaled), exact_expectation(c, scaled), 1e-8) << q.target_label;
  }
}

TEST(ExactQpd, TermCountCap) {
  Circuit c(2);
  for (int i = 0; i < 5; ++i) c.qpd(wirecut_mpc_qpd(2), {0, 1});
  EXPECT_THROW(exact_qpd_expectation(c, pauli_observable("Z")), SizeCap);
}

TEST(Estimate, TQpdAnalyticWithinFourSigma) {
  const auto r = qps_estimate(t_qpd_on_plus(), pauli_observable("X"), options(100000, 42));
  EXPECT_NEAR(r.one_norm, kRt2, 1e-15);
  EXPECT_LT(std::abs(r.mean - 1 / kRt2), 4 * r.std_error);
  EXPECT_EQ(r.shots, 100000u);
  EXPECT_EQ(r.seed, 42u);
}

TEST(Estimate, UncutSampledValuesAreRawEigenvalues) {
  auto o = options(2000, 3, EstimatorMode::Sampled);
  o.keep_values = true;
  const auto r = qps_estimate(t_on_plus(), pauli_observable("X"), o);
  for (double v : r.values) EXPECT_NEAR(std::abs(v), 1.0, 1e-12) << v;
}

TEST(Estimate, SampledValuesBoundedByOneNorm) {
  auto o = options(5000, 8, EstimatorMode::Sampled);
  o.keep_values = true;
  const auto r = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), o);
  EXPECT_EQ(r.one_norm, 4.0);
  for (double v : r.values) EXPECT_LE(std::abs(v), r.one_norm * (1 + 1e-12));
}

TEST(Estimate, WireCutVarianceExceedsUncut) {
  auto o = options(20000, 11, EstimatorMode::Sampled);
  const auto cut = qps_estimate(bell_wire_cut(), pauli_observable("ZX"), o);
  const auto plain = qps_estimate(bell_circuit(), pauli_observable("ZX"), o);
  EXPECT_GT(cut.std_error, plain.std_error);
}

TEST(Estimate, StderrShrinksWithShots) {
  const auto a = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), options(5000, 1, EstimatorMode::Sampled));
  const auto b = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), options(20000, 1, EstimatorMode::Sampled));
  EXPECT_LE(b.std_error, 0.6 * a.std_error);
}

TEST(Estimate, DeterministicAcrossRunsAndThreads) {
  auto o = options(30000, 77, EstimatorMode::Sampled);
  o.keep_values = true;
  const auto a = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), o);
  o.threads = 4;
  const auto b = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), o);
  o.cache_bytes = 0;
  o.threads = 3;
  const auto c = qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), o);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  o.seed = 78;
  EXPECT_NE(qps_estimate(bell_wire_cut(), pauli_observable("ZZ"), o).mean, a.mean);
}

TEST(Estimate, Errors) {
  EXPECT_THROW(qps_estimate(t_on_plus(), pauli_observable("X"), options(0, 1)), DomainError);
  QuasiDecomposition zero;
  zero.terms.push_back({0.0, WeightedInstrument::single(KrausChannel::unitary(identity(2)))});
  Circuit c(1);
  c.qpd(zero, {0});
  EXPECT_THROW(qps_estimate(c, pauli_observable("Z"), options(10, 1)), DegenerateQpd);
}

TEST(Estimate, HoeffdingConsistency) {
  // gamma = 3 single-CNOT cut; 100 repetitions of 10^3 sampled shots.
  Circuit c(2);
  c.prep(states::plus(), {0}).qpd(two_qubit_gate_qpd(gates::CNOT()), {0, 1});
  const Observable obs = pauli_observable("XX");
  const double truth = exact_expectation(c, obs);
  const double delta = 0.05;
  const std::size_t shots = 1000;
  const double eps = 3.0 * std::sqrt(2.0 * std::log(2.0 / delta) / shots);
  ASSERT_LE(hoeffding_shots(3.0, eps, delta), shots + 1);  // ceil of an exact integer may round up
  int failures = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto r = qps_estimate(c, obs, options(shots, 1000 + rep, EstimatorMode::Sampled));
    if (std::abs(r.mean - truth) > eps) ++failures;
  }
  EXPECT_LE(failures, 11);  // 99% one-sided binomial bound for Bin(100, 0.05)
}

TEST(MagicInjection, MatchesTGateCircuit) {
  std::mt19937_64 rng(21);
  Circuit base(2);
  base.prep(testing::random_state(4, rng), {0, 1}).gate(gates::T(), {1}, "T").gate(gates::CNOT(), {1, 0}, "CNOT")
      .gate(gates::T(), {0}, "T");
  const Observable obs{gates::X(), {0}};
  const Circuit injected = magic_injection_circuit(base, {1, 3});
  EXPECT_EQ(injected.qubits, 3u);
  EXPECT_NEAR(exact_expectation(injected, obs), exact_expectation(base, obs), 1e-8);
  const Circuit with_qpd = magic_injection_circuit(base, {1, 3}, true);
  EXPECT_NEAR(exact_qpd_expectation(with_qpd, obs), exact_expectation(base, obs), 1e-8);
  EXPECT_NEAR(one_norm(with_qpd), 2.0, 1e-12);
  const auto r = qps_estimate(with_qpd, obs, options(100000, 5));
  EXPECT_LT(std::abs(r.mean - exact_expectation(base, obs)), 4 * r.std_error);
}

TEST(MagicInjection, NoSitesLeavesCircuitUnchanged) {
  const Circuit base = t_on_plus();
  const Circuit same = magic_injection_circuit(base, {});
  EXPECT_EQ(same.qubits, base.qubits);
  EXPECT_EQ(same.sites.size(), base.sites.size());
  EXPECT_THROW(magic_injection_circuit(base, {0}), DomainError);
}

Circuit cnot_chain(std::size_t k, std::mt19937_64& rng, bool black_boxes) {
  Circuit c(2);
  c.prep(testing::random_state(4, rng), {0, 1});
  for (std::size_t i = 0; i < k; ++i) {
    c.blackbox_cut(gates::CNOT(), {0, 1}, "cnot");
    if (black_boxes && i + 1 < k) c.channel(testing::random_cptp(4, 4, 2, rng), {0, 1});
  }
  return c;
}

TEST(BlackBoxClifford, OneNormsAndOracle) {
  std::mt19937_64 rng(12);
  const Circuit c2 = cnot_chain(2, rng, true);
  const Observable obs{testing::random_hermitian(4, rng) / 8.0, {0, 1}};
  const double truth = exact_expectation(c2, obs);
  const Circuit k2 = blackbox_clifford_cut(c2, 2), k1 = blackbox_clifford_cut(c2, 1);
  EXPECT_NEAR(one_norm(k2), 7.0, 1e-12);
  EXPECT_NEAR(one_norm(k1), 9.0, 1e-12);
  EXPECT_NEAR(exact_expectation(k2, obs), truth, 1e-8);
  EXPECT_NEAR(exact_qpd_expectation(k2, obs), truth, 1e-8);
  EXPECT_NEAR(exact_qpd_expectation(k1, obs), truth, 1e-8);

  const Circuit c3 = cnot_chain(3, rng, true);
  EXPECT_NEAR(one_norm(blackbox_clifford_cut(c3, 3)), 15.0, 1e-12);
  EXPECT_NEAR(one_norm(blackbox_clifford_cut(c3, 1)), 27.0, 1e-12);
  EXPECT_NEAR(exact_qpd_expectation(blackbox_clifford_cut(c3, 3), obs), exact_expectation(c3, obs), 1e-7);
}

TEST(BlackBoxClifford, SingleCutEstimateMatchesOracle) {
  std::mt19937_64 rng(13);
  const Circuit c = cnot_chain(1, rng, false);
  const Circuit cut = blackbox_clifford_cut(c, 1);
  EXPECT_NEAR(one_norm(cut), 3.0, 1e-12);
  const Observable obs = pauli_observable("ZX");
  const auto r = qps_estimate(cut, obs, options(100000, 9));
  EXPECT_LT(std::abs(r.mean - exact_expectation(c, obs)), 4 * r.std_error);
}

TEST(TeleportSign, ExamplesAndSymmetries) {
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(teleport_sign(0, 0, a, b), 1);
  }
  EXPECT_EQ(teleport_sign(1, 0, 3, 3), 1);
  EXPECT_EQ(teleport_sign(1, 0, 3, 0), -1);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
          EXPECT_EQ(teleport_sign(i, j, a, b), teleport_sign(i, j, b, a));
          EXPECT_EQ(teleport_sign(i, j, a, b), teleport_sign(j, i, a, b));
        }
      }
    }
  }
  EXPECT_THROW(teleport_sign(4, 0, 0, 0), DomainError);
}

TEST(BlackBoxTwoQubit, SingleGateReducesToGateQpd) {
  std::mt19937_64 rng(14);
  for (const DenseOperator& u : {gates::CNOT(), gates::CR(0.9), testing::random_unitary(4, rng)}) {
    Circuit c(2);
    c.prep(testing::random_state(4, rng), {0, 1}).blackbox_cut(u, {0, 1}, "twoqubit");
    const Circuit cut = blackbox_twoqubit_cut(c);
    EXPECT_NEAR(one_norm(cut), one_norm(two_qubit_gate_qpd(u)), 1e-8);
    const Observable obs{testing::random_hermitian(4, rng) / 8.0, {0, 1}};
    EXPECT_NEAR(exact_qpd_expectation(cut, obs), exact_expectation(c, obs), 1e-8);
  }
}

TEST(BlackBoxTwoQubit, TwoCnotsAroundBlackBox) {
  std::mt19937_64 rng(15);
  Circuit c(2);
  c.prep(testing::random_state(4, rng), {0, 1})
      .blackbox_cut(gates::CNOT(), {0, 1}, "twoqubit")
      .channel(testing::random_cptp(4, 4, 2, rng), {0, 1})
      .blackbox_cut(gates::CNOT(), {0, 1}, "twoqubit");
  const Circuit cut = blackbox_twoqubit_cut(c);
  EXPECT_EQ(cut.qubits, 10u);
  EXPECT_NEAR(one_norm(cut), 7.0, 1e-10);
  const Observable obs{testing::random_hermitian(4, rng) / 8.0, {0, 1}};
  EXPECT_NEAR(exact_qpd_expectation(cut, obs), exact_expectation(c, obs), 1e-7);
}

TEST(BlackBoxTwoQubit, TwoControlledRotationsMatchParallelFormula) {
  Circuit c(2);
  const double theta = std::numbers::pi / 2;
  c.blackbox_cut(gates::CR(theta), {0, 1}, "twoqubit").blackbox_cut(gates::CR(theta), {1, 0}, "twoqubit");
  const double s = 1 + std::sin(theta / 2);  // (sum u)^2 for one gate
  EXPECT_NEAR(one_norm(blackbox_twoqubit_cut(c)), 2 * s * s - 1, 1e-10);
}

TEST(BlackBoxTwoQubit, TooManyGates) {
  Circuit c(2);
  for (int i = 0; i < 3; ++i) c.blackbox_cut(gates::CNOT(), {0, 1}, "twoqubit");
  EXPECT_THROW(blackbox_twoqubit_cut(c), SizeCap);
}

}  // namespace
}  // namespace qknit
