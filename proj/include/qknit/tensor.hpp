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

#ifndef QKNIT_TENSOR_HPP
#define QKNIT_TENSOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qknit/errors.hpp"

namespace qknit {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kEqual = 1e-9;
inline constexpr double kReconstruct = 1e-8;
}  // namespace tol

/// Largest matrix dimension any kron product may produce.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 16;

/// Local dimensions of a composite space, most significant factor first.
/// An empty list denotes the trivial one-dimensional space.
struct SubsystemDims {
  std::vector<std::size_t> dims;

  SubsystemDims() = default;
  SubsystemDims(std::initializer_list<std::size_t> d) : dims(d) { check(); }
  explicit SubsystemDims(std::vector<std::size_t> d) : dims(std::move(d)) { check(); }

  static SubsystemDims qubits(std::size_t n) { return SubsystemDims(std::vector<std::size_t>(n, 2)); }

  std::size_t total() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  }
  std::size_t count() const { return dims.size(); }
  bool is_qubits() const {
    return std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 2; });
  }

  SubsystemDims concat(const SubsystemDims& other) const {
    std::vector<std::size_t> d = dims;
    d.insert(d.end(), other.dims.begin(), other.dims.end());
    return SubsystemDims(std::move(d));
  }

  friend bool operator==(const SubsystemDims& a, const SubsystemDims& b) { return a.dims == b.dims; }

 private:
  void check() const {
    for (std::size_t d : dims) {
      if (d < 2) throw DimMismatch("subsystem dimension must be at least 2");
    }
  }
};

inline DenseOperator dagger(const DenseOperator& m) { return m.adjoint(); }

inline DenseOperator identity(std::size_t d) { return DenseOperator::Identity(d, d); }

inline StateVector basis_ket(std::size_t d, std::size_t i) {
  StateVector v = StateVector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline DenseOperator projector(const StateVector& v) { return v * v.adjoint(); }

/// Kronecker product with a's indices most significant.
inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const std::size_t rows = static_cast<std::size_t>(a.rows() * b.rows());
  const std::size_t cols = static_cast<std::size_t>(a.cols() * b.cols());
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw SizeCap("kron result of " + std::to_string(rows) + "x" + std::to_string(cols) +
                  " exceeds the dimension cap");
  }
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline DenseOperator kron(std::initializer_list<DenseOperator> ops) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (const auto& op : ops) out = kron(out, op);
  return out;
}

inline DenseOperator kron_all(const std::vector<DenseOperator>& ops) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (const auto& op : ops) out = kron(out, op);
  return out;
}

namespace detail {

inline std::vector<std::size_t> strides_of(const SubsystemDims& dims) {
  std::vector<std::size_t> s(dims.count(), 1);
  for (std::size_t i = dims.count(); i-- > 1;) s[i - 1] = s[i] * dims.dims[i];
  return s;
}

/// Flat offsets of every multi-index over the listed subsystems, first listed most significant.
inline std::vector<std::size_t> offsets_over(const SubsystemDims& dims,
                                             const std::vector<std::size_t>& which) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> out{0};
  for (std::size_t k : which) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims.dims[k]);
    for (std::size_t base : out) {
      for (std::size_t x = 0; x < dims.dims[k]; ++x) next.push_back(base + x * strides[k]);
    }
    out = std::move(next);
  }
  return out;
}

inline void require_square(const DenseOperator& m, const SubsystemDims& dims) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != dims.total()) {
    throw DimMismatch("operator of size " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      " does not match subsystem dimension " + std::to_string(dims.total()));
  }
}

inline bool lex_less(const DenseOperator& a, const DenseOperator& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const Complex x = a.data()[k];
    const Complex y = b.data()[k];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

/// Descending by value; near-equal values ordered by lexicographic key.
inline std::vector<std::size_t> schmidt_order(const Eigen::VectorXd& s, const std::vector<DenseOperator>& keys) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(s.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double sa = s(static_cast<Eigen::Index>(a));
    const double sb = s(static_cast<Eigen::Index>(b));
    if (std::abs(sa - sb) > 1e-12) return sa > sb;
    return lex_less(keys[a], keys[b]);
  });
  return idx;
}

}  // namespace detail

/// Trace over every subsystem not listed in `keep`; kept factors retain their relative order.
inline DenseOperator partial_trace(const DenseOperator& m, const SubsystemDims& dims,
                                   std::vector<std::size_t> keep) {
  detail::require_square(m, dims);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);
  }
  if (!keep.empty() && keep.back() >= dims.count()) throw DimMismatch("partial_trace: keep index out of range");
  const auto ko = detail::offsets_over(dims, keep);
  const auto to = detail::offsets_over(dims, traced);
  const auto n = static_cast<Eigen::Index>(ko.size());
  DenseOperator out = DenseOperator::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      Complex acc = 0.0;
      for (std::size_t t : to) acc += m(static_cast<Eigen::Index>(ko[r] + t), static_cast<Eigen::Index>(ko[c] + t));
      out(r, c) = acc;
    }
  }
  return out;
}

/// Transpose on one factor only.
inline DenseOperator partial_transpose(const DenseOperator& m, const SubsystemDims& dims, std::size_t subsystem) {
  detail::require_square(m, dims);
  if (subsystem >= dims.count()) throw DimMismatch("partial_transpose: subsystem out of range");
  const auto stride = detail::strides_of(dims)[subsystem];
  const auto d = dims.dims[subsystem];
  DenseOperator out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const std::size_t bj = (static_cast<std::size_t>(j) / stride) % d;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::size_t bi = (static_cast<std::size_t>(i) / stride) % d;
      const auto ni = static_cast<Eigen::Index>(static_cast<std::size_t>(i) - bi * stride + bj * stride);
      const auto nj = static_cast<Eigen::Index>(static_cast<std::size_t>(j) - bj * stride + bi * stride);
      out(ni, nj) = m(i, j);
    }
  }
  return out;
}

/// Index map taking the flat index of `dims` to the flat index after reordering factors so
/// that new factor k is old factor perm[k].
inline std::vector<std::size_t> permutation_map(const SubsystemDims& dims, const std::vector<std::size_t>& perm) {
  if (perm.size() != dims.count()) throw DimMismatch("permutation length differs from subsystem count");
  std::vector<std::size_t> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims.dims.at(perm[k]);
  const auto old_strides = detail::strides_of(dims);
  const auto new_strides = detail::strides_of(SubsystemDims(new_dims));
  std::vector<std::size_t> map(dims.total());
  for (std::size_t idx = 0; idx < map.size(); ++idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const std::size_t digit = (idx / old_strides[perm[k]]) % dims.dims[perm[k]];
      out += digit * new_strides[k];
    }
    map[idx] = out;
  }
  return map;
}

inline DenseOperator permute_subsystems(const DenseOperator& m, const SubsystemDims& dims,
                                        const std::vector<std::size_t>& perm) {
  const auto map = permutation_map(dims, perm);
  if (static_cast<std::size_t>(m.rows()) != map.size()) throw DimMismatch("permute_subsystems: size mismatch");
  if (m.cols() == 1) {
    DenseOperator out(m.rows(), 1);
    for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(map[i]), 0) = m(static_cast<Eigen::Index>(i), 0);
    return out;
  }
  detail::require_square(m, dims);
  DenseOperator out(m.rows(), m.cols());
  for (std::size_t j = 0; j < map.size(); ++j) {
    for (std::size_t i = 0; i < map.size(); ++i) {
      out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // descending
  DenseOperator left;                // column k is |f_k>
  DenseOperator right;               // column k is |g_k>
};

/// |v> = sum_k u_k |f_k> (x) |g_k>.
inline SchmidtDecomposition schmidt(const DenseOperator& vec, const SubsystemDims& dims, double tolerance = tol::kEqual) {
  if (dims.count() != 2) throw DimMismatch("schmidt requires exactly two factors");
  if (vec.cols() != 1 || static_cast<std::size_t>(vec.rows()) != dims.total()) {
    throw DimMismatch("schmidt: vector length does not match dims");
  }
  if (std::abs(vec.norm() - 1.0) > tolerance) throw DomainError("schmidt: vector is not normalized");
  const auto da = static_cast<Eigen::Index>(dims.dims[0]);
  const auto db = static_cast<Eigen::Index>(dims.dims[1]);
  DenseOperator mat(da, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < db; ++b) mat(a, b) = vec(a * db + b, 0);
  }
  Eigen::JacobiSVD<DenseOperator> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const DenseOperator u = svd.matrixU();
  const DenseOperator v = svd.matrixV().conjugate();
  std::vector<DenseOperator> keys;
  for (Eigen::Index k = 0; k < s.size(); ++k) keys.emplace_back(u.col(k));
  const auto order = detail::schmidt_order(s, keys);
  SchmidtDecomposition out;
  out.left.resize(da, s.size());
  out.right.resize(db, s.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    out.coefficients.push_back(s(src));
    out.left.col(static_cast<Eigen::Index>(k)) = u.col(src);
    out.right.col(static_cast<Eigen::Index>(k)) = v.col(src);
  }
  return out;
}

struct OperatorSchmidtDecomposition {
  std::vector<double> coefficients;  // descending, strictly positive
  std::vector<DenseOperator> left;   // <L_j, L_k> = tr[L_j^dag L_k]/d_A = delta_jk
  std::vector<DenseOperator> right;
};

/// u = sum_j u_j L_j (x) R_j via SVD of the realigned d_A^2 x d_B^2 matrix.
inline OperatorSchmidtDecomposition operator_schmidt(const DenseOperator& u, const SubsystemDims& dims,
                                                     double cutoff = 1e-10) {
  if (dims.count() != 2) throw DimMismatch("operator_schmidt requires exactly two factors");
  detail::require_square(u, dims);
  const auto da = static_cast<Eigen::Index>(dims.dims[0]);
  const auto db = static_cast<Eigen::Index>(dims.dims[1]);
  DenseOperator realigned(da * da, db * db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index a2 = 0; a2 < da; ++a2) {
      for (Eigen::Index b = 0; b < db; ++b) {
        for (Eigen::Index b2 = 0; b2 < db; ++b2) {
          realigned(a * da + a2, b * db + b2) = u(a * db + b, a2 * db + b2);
        }
      }
    }
  }
  Eigen::JacobiSVD<DenseOperator> svd(realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double scale = std::sqrt(static_cast<double>(da * db));
  std::vector<DenseOperator> lefts, rights;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    DenseOperator l(da, da), r(db, db);
    for (Eigen::Index a = 0; a < da; ++a) {
      for (Eigen::Index a2 = 0; a2 < da; ++a2) l(a, a2) = svd.matrixU()(a * da + a2, k);
    }
    for (Eigen::Index b = 0; b < db; ++b) {
      for (Eigen::Index b2 = 0; b2 < db; ++b2) r(b, b2) = std::conj(svd.matrixV()(b * db + b2, k));
    }
    lefts.push_back(l * std::sqrt(static_cast<double>(da)));
    rights.push_back(r * std::sqrt(static_cast<double>(db)));
  }
  const auto order = detail::schmidt_order(s, lefts);
  OperatorSchmidtDecomposition out;
  for (std::size_t idx : order) {
    const double c = s(static_cast<Eigen::Index>(idx)) / scale;
    if (c <= cutoff) continue;
    out.coefficients.push_back(c);
    out.left.push_back(lefts[idx]);
    out.right.push_back(rights[idx]);
  }
  return out;
}

inline double trace_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<DenseOperator>(m).singularValues().sum();
}

inline double operator_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<DenseOperator>(m).singularValues()(0);
}

inline bool is_hermitian(const DenseOperator& m, double tolerance = tol::kEqual) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

inline Eigen::VectorXd hermitian_eigenvalues(const DenseOperator& m) {
  const DenseOperator h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<DenseOperator>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline bool is_psd(const DenseOperator& m, double tolerance = tol::kEqual) {
  if (!is_hermitian(m, tolerance)) return false;
  return hermitian_eigenvalues(m).minCoeff() >= -tolerance;
}

inline bool is_unitary(const DenseOperator& m, double tolerance = tol::kEqual) {
  if (m.rows() != m.cols()) return false;
  const DenseOperator g = m.adjoint() * m - DenseOperator::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff() <= tolerance;
}

}  // namespace qknit

#endif  // QKNIT_TENSOR_HPP
