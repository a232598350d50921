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

#ifndef QKNIT_KAK_HPP
#define QKNIT_KAK_HPP

#include <array>
#include <cmath>
#include <vector>

#include "qknit/gates.hpp"

namespace qknit {

/// U = g (k1 (x) k2) (sum_k c_k Q_k (x) Q_k) (k3 (x) k4) with k1..k4 in SU(2).
struct KakDecomposition {
  Complex global_phase{1.0, 0.0};
  DenseOperator k1, k2, k3, k4;
  std::array<Complex, 4> c{};

  DenseOperator core() const {
    DenseOperator m = DenseOperator::Zero(4, 4);
    for (std::size_t k = 0; k < 4; ++k) m += c[k] * kron(pauli(k), pauli(k));
    return m;
  }
  DenseOperator reconstruct() const { return global_phase * kron(k1, k2) * core() * kron(k3, k4); }
};

/// Unitary operator Schmidt form U = sum_j u_j L_j (x) R_j with unitary factors.
struct UnitarySchmidtForm {
  std::vector<double> coefficients;
  std::vector<DenseOperator> left;
  std::vector<DenseOperator> right;
};

namespace detail {

inline DenseOperator magic_basis() {
  DenseOperator m(4, 4);
  m << 1, 0, 0, kI, 0, kI, 1, 0, 0, kI, -1, 0, 1, 0, 0, -kI;
  return m / std::sqrt(2.0);
}

/// Splits a product operator a (x) b (2x2 each) with a unitary up to phase.
inline std::pair<DenseOperator, DenseOperator> split_local(const DenseOperator& ab) {
  DenseOperator realigned(4, 4);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index a2 = 0; a2 < 2; ++a2)
      for (Eigen::Index b = 0; b < 2; ++b)
        for (Eigen::Index b2 = 0; b2 < 2; ++b2) realigned(a * 2 + a2, b * 2 + b2) = ab(a * 2 + b, a2 * 2 + b2);
  Eigen::JacobiSVD<DenseOperator> svd(realigned, Eigen::ComputeFullU);
  DenseOperator k1(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index a2 = 0; a2 < 2; ++a2) k1(a, a2) = svd.matrixU()(a * 2 + a2, 0) * std::sqrt(2.0);
  // k2 = tr_1[(k1^dag (x) I) ab] / 2
  const DenseOperator t = kron(k1.adjoint(), identity(2)) * ab;
  DenseOperator k2 = DenseOperator::Zero(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a) k2 += t.block(a * 2, a * 2, 2, 2);
  return {k1, k2 / 2.0};
}

}  // namespace detail

/// Magic-basis KAK decomposition of a two-qubit unitary.
inline KakDecomposition kak_decompose(const DenseOperator& u, double tolerance = 1e-9) {
  if (u.rows() != 4 || u.cols() != 4 || !is_unitary(u, 1e-8)) throw DomainError("kak_decompose needs a 4x4 unitary");
  const DenseOperator m = detail::magic_basis();
  const Complex det = u.determinant();
  const Complex g = std::polar(1.0, std::arg(det) / 4.0);
  const DenseOperator up = m.adjoint() * (u / g) * m;
  const DenseOperator p = up.transpose() * up;
  const std::array<double, 4> mixes{0.6180339887498949, 1.4142135623730951, 0.2718281828459045, 3.1415926535897931};
  for (double r : mixes) {
    const Eigen::MatrixXd a = p.real() + r * p.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
    Eigen::MatrixXd v = es.eigenvectors();
    if (v.determinant() < 0) v.col(0) *= -1.0;
    const DenseOperator vc = v.cast<Complex>();
    const DenseOperator d2 = vc.transpose() * p * vc;
    Eigen::VectorXcd d(4);
    for (Eigen::Index k = 0; k < 4; ++k) d(k) = std::sqrt(d2(k, k));
    DenseOperator o1c = up * vc * d.cwiseInverse().asDiagonal();
    if (o1c.imag().cwiseAbs().maxCoeff() > 1e-6) continue;
    Eigen::MatrixXd o1 = o1c.real();
    if (o1.determinant() < 0) {
      o1.col(0) *= -1.0;
      d(0) = -d(0);
    }
    const DenseOperator o1z = o1.cast<Complex>();
    if ((o1z * d.asDiagonal() * vc.transpose() - up).cwiseAbs().maxCoeff() > 1e-7) continue;
    KakDecomposition out;
    out.global_phase = g;
    const auto [k1, k2] = detail::split_local(m * o1z * m.adjoint());
    const auto [k3, k4] = detail::split_local(m * vc.transpose() * m.adjoint());
    out.k1 = k1;
    out.k2 = k2;
    out.k3 = k3;
    out.k4 = k4;
    const DenseOperator core = m * d.asDiagonal() * m.adjoint();
    for (std::size_t k = 0; k < 4; ++k) out.c[k] = (kron(pauli(k), pauli(k)) * core).trace() / 4.0;
    if ((out.reconstruct() - u).cwiseAbs().maxCoeff() <= tolerance) return out;
  }
  throw NonUnitarySchmidtForm("KAK decomposition failed to reconstruct the input unitary");
}

/// Unitary Schmidt form of a KAK decomposition; coefficients below `cutoff` are dropped.
inline UnitarySchmidtForm unitary_schmidt_form(const KakDecomposition& kak, double cutoff = 1e-12) {
  UnitarySchmidtForm out;
  for (std::size_t k = 0; k < 4; ++k) {
    const double mag = std::abs(kak.c[k]);
    if (mag <= cutoff) continue;
    out.coefficients.push_back(mag);
    out.left.push_back(kak.global_phase * std::polar(1.0, std::arg(kak.c[k])) * kak.k1 * pauli(k) * kak.k3);
    out.right.push_back(kak.k2 * pauli(k) * kak.k4);
  }
  return out;
}

}  // namespace qknit

#endif  // QKNIT_KAK_HPP
