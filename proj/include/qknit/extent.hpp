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

#ifndef QKNIT_EXTENT_HPP
#define QKNIT_EXTENT_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "qknit/channels.hpp"
#include "qknit/lp.hpp"

namespace qknit {

struct DecompositionSet {
  std::vector<WeightedInstrument> elements;
  std::string label;
};

enum class LpStatus { Optimal, Infeasible };

struct LPResult {
  double gamma = 0.0;
  std::vector<double> coefficients;
  LpStatus status = LpStatus::Infeasible;
};

/// min ||a||_1 subject to target = sum_i a_i F_i, with a = a+ - a-.
/// Equality rows are the real and imaginary parts of every Choi entry.
inline LPResult lp_extent(const ChoiOperator& target, const DecompositionSet& set, double feasibility = 1e-9) {
  if (set.elements.empty()) throw DomainError("decomposition set is empty");
  const auto entries = target.matrix.size();
  const auto m = static_cast<Eigen::Index>(set.elements.size());
  Eigen::MatrixXd a(2 * entries, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const ChoiOperator c = reconstruct_superop(set.elements[static_cast<std::size_t>(i)]);
    if (c.matrix.rows() != target.matrix.rows() || !(c.dims_in == target.dims_in) || !(c.dims_out == target.dims_out)) {
      throw DimMismatch("set element " + std::to_string(i) + " does not match the target dims");
    }
    const Eigen::Map<const Eigen::VectorXcd> v(c.matrix.data(), entries);
    a.col(i) << v.real(), v.imag();
  }
  a.rightCols(m) = -a.leftCols(m);
  const Eigen::Map<const Eigen::VectorXcd> tv(target.matrix.data(), entries);
  Eigen::VectorXd b(2 * entries);
  b << tv.real(), tv.imag();

  // drop rows that vanish for every column and the target
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    if (a.row(r).norm() >= 1e-12 || std::abs(b(r)) >= 1e-12) keep.push_back(r);
  }
  Eigen::MatrixXd ak(static_cast<Eigen::Index>(keep.size()), a.cols());
  Eigen::VectorXd bk(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    ak.row(static_cast<Eigen::Index>(k)) = a.row(keep[k]);
    bk(static_cast<Eigen::Index>(k)) = b(keep[k]);
  }
  lp::Options opt;
  opt.feasibility = feasibility;
  const lp::Solution s = lp::minimize(Eigen::VectorXd::Ones(2 * m), ak, bk, opt);
  LPResult out;
  if (s.status != lp::Status::Optimal) return out;
  out.status = LpStatus::Optimal;
  out.coefficients.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    out.coefficients[static_cast<std::size_t>(i)] = s.x(i) - s.x(m + i);
    out.gamma += std::abs(out.coefficients[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace detail {

/// Entries rounded to 1e-9 after making the first non-negligible entry real positive.
inline std::vector<std::int64_t> phase_fingerprint(const DenseOperator& m) {
  Complex phase(1.0);
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (std::abs(z) > 1e-6) {
      phase = std::conj(z) / std::abs(z);
      break;
    }
  }
  std::vector<std::int64_t> key;
  key.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j) * phase;
      key.push_back(std::llround(z.real() * 1e9));
      key.push_back(std::llround(z.imag() * 1e9));
    }
  }
  return key;
}

/// Breadth-first closure of `seed` under left multiplication by `gens`, modulo global phase.
inline std::vector<DenseOperator> orbit(const DenseOperator& seed, const std::vector<DenseOperator>& gens) {
  std::map<std::vector<std::int64_t>, bool> seen;
  std::vector<DenseOperator> out;
  std::deque<DenseOperator> queue{seed};
  seen[phase_fingerprint(seed)] = true;
  while (!queue.empty()) {
    const DenseOperator x = queue.front();
    queue.pop_front();
    out.push_back(x);
    for (const auto& g : gens) {
      DenseOperator y = g * x;
      auto key = phase_fingerprint(y);
      if (seen.emplace(std::move(key), true).second) queue.push_back(std::move(y));
    }
  }
  return out;
}

}  // namespace detail

/// The 24 single-qubit Clifford unitaries as channels, identity first.
inline DecompositionSet clifford_channels_1q() {
  DecompositionSet s;
  s.label = "clifford_1q";
  for (const auto& u : detail::orbit(identity(2), {gates::H(), gates::S()})) {
    s.elements.push_back(WeightedInstrument::single(KrausChannel::unitary(u)));
  }
  return s;
}

/// Preparations of every n-qubit stabilizer state, n in {1, 2}.
inline DecompositionSet stabilizer_states(std::size_t n) {
  if (n == 0) throw DomainError("stabilizer_states needs n >= 1");
  if (n > 2) throw SizeCap("stabilizer_states supports n <= 2");
  std::vector<DenseOperator> gens;
  if (n == 1) {
    gens = {gates::H(), gates::S()};
  } else {
    const DenseOperator i2 = identity(2);
    gens = {kron(gates::H(), i2), kron(i2, gates::H()), kron(gates::S(), i2), kron(i2, gates::S()), gates::CNOT()};
  }
  const StateVector zero = basis_ket(std::size_t{1} << n, 0);
  DecompositionSet s;
  s.label = "stabilizer_states_" + std::to_string(n);
  for (const auto& psi : detail::orbit(DenseOperator(zero), gens)) {
    s.elements.push_back(WeightedInstrument::single(KrausChannel({psi}, SubsystemDims(), SubsystemDims::qubits(n))));
  }
  return s;
}

inline LPResult stab_extent(const DenseOperator& rho, std::size_t n) {
  if (!is_hermitian(rho, 1e-9)) throw DomainError("stab_extent needs a Hermitian operator");
  const DecompositionSet s = stabilizer_states(n);
  if (rho.rows() != static_cast<Eigen::Index>(std::size_t{1} << n)) throw DimMismatch("operator size does not match n");
  return lp_extent(ChoiOperator{rho, SubsystemDims(), SubsystemDims::qubits(n)}, s);
}

/// ||W(m)||_1 / 4^n for a map with diagonal PTM m.
inline double pauli_diagonal_extent(const std::vector<double>& m) { return pauli_diagonal_decomposition(m).gamma; }

/// Smallest shot count with 2 (gamma/eps)^2 ln(2/delta) <= N.
inline std::uint64_t hoeffding_shots(double gamma, double eps, double delta) {
  if (!(gamma >= 1.0)) throw DomainError("hoeffding_shots needs gamma >= 1");
  if (!(eps > 0.0)) throw DomainError("hoeffding_shots needs eps > 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("hoeffding_shots needs 0 < delta <= 1");
  const double ratio = gamma / eps;
  return static_cast<std::uint64_t>(std::ceil(2.0 * ratio * ratio * std::log(2.0 / delta)));
}

}  // namespace qknit

#endif  // QKNIT_EXTENT_HPP
