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

#ifndef QKNIT_TESTS_TEST_UTIL_HPP
#define QKNIT_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "qknit/channels.hpp"

namespace qknit::testing {

inline DenseOperator random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  DenseOperator m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

/// Haar-distributed unitary via QR with phase fix.
inline DenseOperator random_unitary(std::size_t d, std::mt19937_64& rng) {
  const DenseOperator g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<DenseOperator> qr(g);
  DenseOperator q = qr.householderQ();
  const DenseOperator r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

inline StateVector random_state(std::size_t d, std::mt19937_64& rng) {
  DenseOperator v = random_gaussian(d, 1, rng);
  return v.col(0) / v.norm();
}

inline DenseOperator random_density(std::size_t d, std::mt19937_64& rng) {
  const DenseOperator g = random_gaussian(d, d, rng);
  DenseOperator rho = g * g.adjoint();
  return rho / rho.trace();
}

inline DenseOperator random_hermitian(std::size_t d, std::mt19937_64& rng) {
  const DenseOperator g = random_gaussian(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

/// CPTP map from `k` Kraus operators cut out of a random isometry.
inline KrausChannel random_cptp(std::size_t din, std::size_t dout, std::size_t k, std::mt19937_64& rng) {
  const DenseOperator u = random_unitary(dout * k, rng);
  std::vector<DenseOperator> ops;
  for (std::size_t j = 0; j < k; ++j) {
    ops.push_back(u.block(static_cast<Eigen::Index>(j * dout), 0, static_cast<Eigen::Index>(dout),
                          static_cast<Eigen::Index>(din)));
  }
  return KrausChannel(std::move(ops), dims_for(din), dims_for(dout));
}

inline double max_abs(const DenseOperator& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace qknit::testing

#endif  // QKNIT_TESTS_TEST_UTIL_HPP
