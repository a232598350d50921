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

#ifndef QKNIT_GATES_HPP
#define QKNIT_GATES_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qknit/tensor.hpp"

namespace qknit {

inline constexpr Complex kI{0.0, 1.0};

/// Single-qubit Pauli by index 0..3 = I, X, Y, Z.
inline DenseOperator pauli(std::size_t k) {
  DenseOperator p = DenseOperator::Zero(2, 2);
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -kI, kI, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw DomainError("pauli index must be in 0..3");
  }
  return p;
}

/// Base-4 digit of `index` for qubit q, qubit 0 most significant.
inline std::size_t pauli_digit(std::size_t index, std::size_t q, std::size_t n) {
  return (index >> (2 * (n - 1 - q))) & 3U;
}

inline DenseOperator pauli_string(std::size_t index, std::size_t n) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) out = kron(out, pauli(pauli_digit(index, q, n)));
  return out;
}

/// 1 iff the single-qubit Paulis anticommute.
inline int anticommutes_1q(std::size_t a, std::size_t b) { return (a != 0 && b != 0 && a != b) ? 1 : 0; }

/// Symplectic product: parity of anticommuting positions of two n-qubit Pauli strings.
inline int symplectic(std::size_t i, std::size_t j, std::size_t n) {
  int parity = 0;
  for (std::size_t q = 0; q < n; ++q) parity ^= anticommutes_1q(pauli_digit(i, q, n), pauli_digit(j, q, n));
  return parity;
}

namespace gates {

inline DenseOperator I() { return pauli(0); }
inline DenseOperator X() { return pauli(1); }
inline DenseOperator Y() { return pauli(2); }
inline DenseOperator Z() { return pauli(3); }

inline DenseOperator H() {
  DenseOperator h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

inline DenseOperator phase(double phi) {
  DenseOperator p = DenseOperator::Identity(2, 2);
  p(1, 1) = std::exp(kI * phi);
  return p;
}

inline DenseOperator S() { return phase(std::numbers::pi / 2); }
inline DenseOperator Sdg() { return phase(-std::numbers::pi / 2); }
inline DenseOperator T() { return phase(std::numbers::pi / 4); }
inline DenseOperator Tdg() { return phase(-std::numbers::pi / 4); }

inline DenseOperator CNOT() {
  DenseOperator u = DenseOperator::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

inline DenseOperator CZ() {
  DenseOperator u = DenseOperator::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

inline DenseOperator SWAP() {
  DenseOperator u = DenseOperator::Zero(4, 4);
  u(0, 0) = u(1, 2) = u(2, 1) = u(3, 3) = 1.0;
  return u;
}

inline DenseOperator iSWAP() {
  DenseOperator u = DenseOperator::Zero(4, 4);
  u(0, 0) = u(3, 3) = 1.0;
  u(1, 2) = u(2, 1) = kI;
  return u;
}

/// exp(-i theta/2 |1><1| (x) Z).
inline DenseOperator CR(double theta) {
  DenseOperator u = DenseOperator::Identity(4, 4);
  u(2, 2) = std::exp(-kI * (theta / 2));
  u(3, 3) = std::exp(kI * (theta / 2));
  return u;
}

/// exp(-i theta/2 P (x) P) for P = pauli(p).
inline DenseOperator RPP(std::size_t p, double theta) {
  const DenseOperator pp = kron(pauli(p), pauli(p));
  return std::cos(theta / 2) * DenseOperator::Identity(4, 4) - kI * std::sin(theta / 2) * pp;
}

inline DenseOperator RZZ(double theta) { return RPP(3, theta); }
inline DenseOperator RXX(double theta) { return RPP(1, theta); }
inline DenseOperator RYY(double theta) { return RPP(2, theta); }

inline DenseOperator Toffoli() {
  DenseOperator u = DenseOperator::Identity(8, 8);
  u(6, 6) = u(7, 7) = 0.0;
  u(6, 7) = u(7, 6) = 1.0;
  return u;
}

/// Gate from the fixed name table; parametrized names require `theta`.
inline std::optional<DenseOperator> by_name(const std::string& name, std::optional<double> theta = std::nullopt) {
  if (name == "I") return I();
  if (name == "X") return X();
  if (name == "Y") return Y();
  if (name == "Z") return Z();
  if (name == "H") return H();
  if (name == "S") return S();
  if (name == "Sdg") return Sdg();
  if (name == "T") return T();
  if (name == "Tdg") return Tdg();
  if (name == "CNOT") return CNOT();
  if (name == "SWAP") return SWAP();
  if (name == "iSWAP") return iSWAP();
  if (!theta) return std::nullopt;
  if (name == "CR") return CR(*theta);
  if (name == "RZZ") return RZZ(*theta);
  if (name == "RXX") return RXX(*theta);
  if (name == "RYY") return RYY(*theta);
  return std::nullopt;
}

}  // namespace gates

namespace states {

inline StateVector ket(std::initializer_list<Complex> amps) {
  StateVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v(i++) = a;
  return v;
}

inline StateVector zero() { return ket({1.0, 0.0}); }
inline StateVector one() { return ket({0.0, 1.0}); }
inline StateVector plus() { return ket({1.0, 1.0}) / std::sqrt(2.0); }
inline StateVector minus() { return ket({1.0, -1.0}) / std::sqrt(2.0); }
inline StateVector plus_i() { return ket({1.0, kI}) / std::sqrt(2.0); }
inline StateVector minus_i() { return ket({1.0, -kI}) / std::sqrt(2.0); }
/// (|0> + e^{i pi/4}|1>)/sqrt2.
inline StateVector magic_h() { return ket({1.0, std::exp(kI * (std::numbers::pi / 4))}) / std::sqrt(2.0); }

/// (|00> + |11>)/sqrt2 on d (x) d generalized to sum_k |kk>/sqrt d.
inline StateVector max_entangled(std::size_t d) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k * d + k)) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline std::optional<StateVector> by_name(const std::string& name) {
  if (name == "0") return zero();
  if (name == "1") return one();
  if (name == "+") return plus();
  if (name == "-") return minus();
  if (name == "i+" || name == "+i") return plus_i();
  if (name == "i-" || name == "-i") return minus_i();
  if (name == "H") return magic_h();
  return std::nullopt;
}

}  // namespace states

}  // namespace qknit

#endif  // QKNIT_GATES_HPP
