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

#ifndef QKNIT_CHANNELS_HPP
#define QKNIT_CHANNELS_HPP

#include <bit>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qknit/gates.hpp"
#include "qknit/tensor.hpp"

namespace qknit {

/// Qubit factorization when d is a power of two, else a single factor.
inline SubsystemDims dims_for(std::size_t d) {
  if (d == 1) return SubsystemDims();
  if (std::has_single_bit(d)) return SubsystemDims::qubits(static_cast<std::size_t>(std::countr_zero(d)));
  return SubsystemDims{d};
}

/// Completely positive map in operator-sum form. Every Kraus operator is dout x din.
struct KrausChannel {
  std::vector<DenseOperator> kraus_ops;
  SubsystemDims dims_in;
  SubsystemDims dims_out;

  KrausChannel() = default;
  KrausChannel(std::vector<DenseOperator> ops, SubsystemDims in, SubsystemDims out)
      : kraus_ops(std::move(ops)), dims_in(std::move(in)), dims_out(std::move(out)) {
    for (const auto& k : kraus_ops) {
      if (static_cast<std::size_t>(k.rows()) != dims_out.total() ||
          static_cast<std::size_t>(k.cols()) != dims_in.total()) {
        throw DimMismatch("Kraus operator shape does not match channel dims");
      }
    }
  }
  /// Dims inferred from the first operator's shape.
  explicit KrausChannel(std::vector<DenseOperator> ops)
      : KrausChannel(ops, dims_for(static_cast<std::size_t>(ops.at(0).cols())),
                     dims_for(static_cast<std::size_t>(ops.at(0).rows()))) {}

  static KrausChannel unitary(const DenseOperator& u) { return KrausChannel({u}); }

  std::size_t din() const { return dims_in.total(); }
  std::size_t dout() const { return dims_out.total(); }

  DenseOperator kraus_sum() const {
    DenseOperator s = DenseOperator::Zero(static_cast<Eigen::Index>(din()), static_cast<Eigen::Index>(din()));
    for (const auto& k : kraus_ops) s += k.adjoint() * k;
    return s;
  }
  bool is_tp(double tolerance = tol::kEqual) const {
    return (kraus_sum() - identity(din())).cwiseAbs().maxCoeff() <= tolerance;
  }
  bool is_trace_nonincreasing(double tolerance = tol::kEqual) const {
    const DenseOperator gap = identity(din()) - kraus_sum();
    return hermitian_eigenvalues(gap).minCoeff() >= -tolerance;
  }
};

/// Trace-normalized Choi operator on input (x) output.
struct ChoiOperator {
  DenseOperator matrix;
  SubsystemDims dims_in;
  SubsystemDims dims_out;

  std::size_t din() const { return dims_in.total(); }
  std::size_t dout() const { return dims_out.total(); }
  SubsystemDims joint_dims() const { return dims_in.concat(dims_out); }
};

struct PauliTransferMatrix {
  Eigen::MatrixXd matrix;
  std::size_t n = 0;
};

/// Family of CP maps with real branch weights in [-1, 1] realizing sum_j beta_j E_j.
struct WeightedInstrument {
  struct Branch {
    KrausChannel map;
    double weight = 1.0;
  };
  std::vector<Branch> branches;

  WeightedInstrument() = default;
  explicit WeightedInstrument(std::vector<Branch> b) : branches(std::move(b)) {
    if (branches.empty()) throw DomainError("weighted instrument needs at least one branch");
    for (const auto& br : branches) {
      if (!(br.map.dims_in == branches[0].map.dims_in) || !(br.map.dims_out == branches[0].map.dims_out)) {
        throw DimMismatch("instrument branches must share dims");
      }
    }
  }
  static WeightedInstrument single(KrausChannel c, double weight = 1.0) {
    return WeightedInstrument({Branch{std::move(c), weight}});
  }

  const SubsystemDims& dims_in() const { return branches.at(0).map.dims_in; }
  const SubsystemDims& dims_out() const { return branches.at(0).map.dims_out; }

  KrausChannel marginal() const {
    std::vector<DenseOperator> ops;
    for (const auto& b : branches) ops.insert(ops.end(), b.map.kraus_ops.begin(), b.map.kraus_ops.end());
    return KrausChannel(std::move(ops), dims_in(), dims_out());
  }
  bool is_valid(double tolerance = tol::kEqual) const {
    for (const auto& b : branches) {
      if (std::abs(b.weight) > 1.0 + tolerance) return false;
    }
    return marginal().is_tp(tolerance);
  }
};

inline ChoiOperator choi_of(const KrausChannel& c) {
  const auto din = static_cast<Eigen::Index>(c.din());
  const auto dout = static_cast<Eigen::Index>(c.dout());
  DenseOperator m = DenseOperator::Zero(din * dout, din * dout);
  const double norm = 1.0 / std::sqrt(static_cast<double>(din));
  for (const auto& k : c.kraus_ops) {
    StateVector v(din * dout);
    for (Eigen::Index i = 0; i < din; ++i) {
      for (Eigen::Index o = 0; o < dout; ++o) v(i * dout + o) = k(o, i) * norm;
    }
    m += v * v.adjoint();
  }
  return ChoiOperator{m, c.dims_in, c.dims_out};
}

inline DenseOperator apply(const KrausChannel& c, const DenseOperator& rho) {
  if (static_cast<std::size_t>(rho.rows()) != c.din() || rho.rows() != rho.cols()) {
    throw DimMismatch("apply: state dimension does not match channel input");
  }
  DenseOperator out = DenseOperator::Zero(static_cast<Eigen::Index>(c.dout()), static_cast<Eigen::Index>(c.dout()));
  for (const auto& k : c.kraus_ops) out += k * rho * k.adjoint();
  return out;
}

/// E(sigma) = d_in tr_in[Phi (sigma^T (x) I)].
inline DenseOperator apply(const ChoiOperator& c, const DenseOperator& sigma) {
  const auto din = static_cast<Eigen::Index>(c.din());
  const auto dout = static_cast<Eigen::Index>(c.dout());
  if (sigma.rows() != din || sigma.cols() != din) throw DimMismatch("apply: state dimension does not match Choi input");
  DenseOperator out = DenseOperator::Zero(dout, dout);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index i2 = 0; i2 < din; ++i2) {
      if (sigma(i, i2) == Complex(0.0)) continue;
      out += sigma(i, i2) * c.matrix.block(i * dout, i2 * dout, dout, dout);
    }
  }
  return out * static_cast<double>(din);
}

/// Eigendecomposition of a CP Choi operator; eigenvalues below `cutoff` are discarded.
inline KrausChannel kraus_of(const ChoiOperator& c, double cutoff = 1e-10) {
  const auto din = static_cast<Eigen::Index>(c.din());
  const auto dout = static_cast<Eigen::Index>(c.dout());
  const DenseOperator h = 0.5 * (c.matrix + c.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
  std::vector<DenseOperator> ops;
  for (Eigen::Index k = es.eigenvalues().size(); k-- > 0;) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -1e-8) throw DomainError("kraus_of: Choi operator is not positive semidefinite");
    if (lambda < cutoff) continue;
    DenseOperator kr(dout, din);
    const double scale = std::sqrt(lambda * static_cast<double>(din));
    for (Eigen::Index i = 0; i < din; ++i) {
      for (Eigen::Index o = 0; o < dout; ++o) kr(o, i) = es.eigenvectors()(i * dout + o, k) * scale;
    }
    ops.push_back(std::move(kr));
  }
  if (ops.empty()) ops.push_back(DenseOperator::Zero(dout, din));
  return KrausChannel(std::move(ops), c.dims_in, c.dims_out);
}

/// later o earlier.
inline KrausChannel compose(const KrausChannel& later, const KrausChannel& earlier) {
  if (!(later.dims_in == earlier.dims_out)) throw DimMismatch("compose: output of earlier does not feed later");
  std::vector<DenseOperator> ops;
  for (const auto& a : later.kraus_ops) {
    for (const auto& b : earlier.kraus_ops) ops.push_back(a * b);
  }
  return KrausChannel(std::move(ops), earlier.dims_in, later.dims_out);
}

inline KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<DenseOperator> ops;
  for (const auto& x : a.kraus_ops) {
    for (const auto& y : b.kraus_ops) ops.push_back(kron(x, y));
  }
  return KrausChannel(std::move(ops), a.dims_in.concat(b.dims_in), a.dims_out.concat(b.dims_out));
}

namespace detail {

inline std::size_t qubit_count_of(const SubsystemDims& d) {
  if (!d.is_qubits()) throw DimMismatch("Pauli transfer matrix requires qubit systems");
  return d.count();
}

template <typename Map>
PauliTransferMatrix ptm_from(const Map& map, std::size_t n_in, std::size_t n_out) {
  const std::size_t rows = std::size_t{1} << (2 * n_out);
  const std::size_t cols = std::size_t{1} << (2 * n_in);
  const double norm = 1.0 / std::sqrt(static_cast<double>((std::size_t{1} << n_in) * (std::size_t{1} << n_out)));
  PauliTransferMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)), n_in};
  std::vector<DenseOperator> out_paulis;
  for (std::size_t i = 0; i < rows; ++i) out_paulis.push_back(pauli_string(i, n_out));
  for (std::size_t j = 0; j < cols; ++j) {
    const DenseOperator image = map(pauli_string(j, n_in));
    for (std::size_t i = 0; i < rows; ++i) {
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (out_paulis[i] * image).trace().real() * norm;
    }
  }
  return out;
}

}  // namespace detail

/// M_ij = (1/2^n) tr[Q_i E(Q_j)], Pauli order I, X, Y, Z with qubit 0 most significant.
inline PauliTransferMatrix ptm_of(const KrausChannel& c) {
  return detail::ptm_from([&](const DenseOperator& q) { return apply(c, q); }, detail::qubit_count_of(c.dims_in),
                          detail::qubit_count_of(c.dims_out));
}

inline PauliTransferMatrix ptm_of(const ChoiOperator& c) {
  return detail::ptm_from([&](const DenseOperator& q) { return apply(c, q); }, detail::qubit_count_of(c.dims_in),
                          detail::qubit_count_of(c.dims_out));
}

namespace detail {

inline std::size_t pauli_qubits_for_length(std::size_t len) {
  std::size_t n = 0;
  std::size_t l = 1;
  while (l < len) {
    l *= 4;
    ++n;
  }
  if (l != len || len == 0) throw DimMismatch("length " + std::to_string(len) + " is not a power of 4");
  return n;
}

}  // namespace detail

/// (W x)_i = sum_j (-1)^{<Q_i, Q_j>} x_j, applied one qubit digit at a time.
inline std::vector<double> walsh_hadamard(std::vector<double> v) {
  const std::size_t n = detail::pauli_qubits_for_length(v.size());
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t stride = std::size_t{1} << (2 * (n - 1 - q));
    for (std::size_t base = 0; base < v.size(); ++base) {
      if (((base / stride) & 3U) != 0) continue;
      double x[4];
      for (std::size_t a = 0; a < 4; ++a) x[a] = v[base + a * stride];
      for (std::size_t a = 0; a < 4; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < 4; ++b) acc += anticommutes_1q(a, b) ? -x[b] : x[b];
        v[base + a * stride] = acc;
      }
    }
  }
  return v;
}

struct PauliDiagonalDecomposition {
  std::vector<double> coefficients;  // r_i multiplying Q_i . Q_i
  double gamma = 0.0;                // ||r||_1
};

/// Pauli-channel coefficients r = W(m)/4^n of the map with PTM diagonal m.
inline PauliDiagonalDecomposition pauli_diagonal_decomposition(const std::vector<double>& m) {
  auto r = walsh_hadamard(m);
  const double scale = 1.0 / static_cast<double>(m.size());
  PauliDiagonalDecomposition out;
  for (double& x : r) {
    x *= scale;
    out.gamma += std::abs(x);
  }
  out.coefficients = std::move(r);
  return out;
}

/// Decomposition of the inverse of a Pauli-diagonal map.
inline PauliDiagonalDecomposition pauli_diagonal_inverse(const std::vector<double>& m) {
  detail::pauli_qubits_for_length(m.size());
  std::vector<double> inv(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0.0) throw NotInvertible("PTM diagonal entry " + std::to_string(i) + " is zero");
    inv[i] = 1.0 / m[i];
  }
  return pauli_diagonal_decomposition(inv);
}

/// Choi of sum_j beta_j E_j.
inline ChoiOperator reconstruct_superop(const WeightedInstrument& w) {
  const auto d = static_cast<Eigen::Index>(w.dims_in().total() * w.dims_out().total());
  ChoiOperator out{DenseOperator::Zero(d, d), w.dims_in(), w.dims_out()};
  for (const auto& b : w.branches) {
    if (b.weight == 0.0) continue;
    out.matrix += b.weight * choi_of(b.map).matrix;
  }
  return out;
}

/// PPT test across a caller-supplied cut: `side_b` indexes factors of dims_in ++ dims_out.
inline bool is_ppt(const ChoiOperator& choi, const std::vector<std::size_t>& side_b, double tolerance = tol::kEqual) {
  const SubsystemDims dims = choi.joint_dims();
  DenseOperator m = choi.matrix;
  for (std::size_t s : side_b) m = partial_transpose(m, dims, s);
  return hermitian_eigenvalues(m).minCoeff() >= -tolerance;
}

inline KrausChannel depolarizing(double p, std::size_t n = 1) {
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<DenseOperator> ops;
  for (std::size_t i = 0; i < count; ++i) {
    const double w = (i == 0) ? 1.0 - p + p / static_cast<double>(count) : p / static_cast<double>(count);
    if (w > 0.0) ops.push_back(std::sqrt(w) * pauli_string(i, n));
  }
  return KrausChannel(std::move(ops), SubsystemDims::qubits(n), SubsystemDims::qubits(n));
}

inline KrausChannel pauli_channel(const std::vector<double>& probs) {
  const std::size_t n = detail::pauli_qubits_for_length(probs.size());
  std::vector<DenseOperator> ops;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < 0.0) throw DomainError("pauli_channel: negative probability");
    if (probs[i] > 0.0) ops.push_back(std::sqrt(probs[i]) * pauli_string(i, n));
  }
  return KrausChannel(std::move(ops), SubsystemDims::qubits(n), SubsystemDims::qubits(n));
}

}  // namespace qknit

#endif  // QKNIT_CHANNELS_HPP
