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

#ifndef QKNIT_CATALOG_HPP
#define QKNIT_CATALOG_HPP

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qknit/kak.hpp"
#include "qknit/qpd.hpp"

namespace qknit {

struct ExtentTriple {
  double gamma = 1.0;
  double gamma_reg = 1.0;
  double gamma_sreg = 1.0;
};

inline constexpr std::size_t kMaxPureStateRank = 8;

namespace detail {

inline WeightedInstrument unitary_element(const DenseOperator& u) {
  return WeightedInstrument::single(KrausChannel::unitary(u));
}

/// Preparation of |psi> from the trivial input space.
inline WeightedInstrument prep_element(const StateVector& psi, const SubsystemDims& dims) {
  return WeightedInstrument::single(KrausChannel({DenseOperator(psi)}, SubsystemDims(), dims));
}

inline double sum_of(const std::vector<double>& u) {
  double s = 0.0;
  for (double x : u) s += x;
  return s;
}

inline void require_normalized(const std::vector<double>& u, double tolerance) {
  double sq = 0.0;
  for (double x : u) {
    if (!(x >= 0.0)) throw DomainError("Schmidt coefficients must be nonnegative");
    sq += x * x;
  }
  if (std::abs(sq - 1.0) > tolerance) throw DomainError("squared Schmidt coefficients must sum to 1");
}

}  // namespace detail

/// T = 1/2 id + 1/sqrt2 S - (sqrt2-1)/2 Z.
inline QuasiDecomposition t_gate_qpd() {
  QuasiDecomposition q;
  q.target_label = "T";
  q.terms.push_back({0.5, detail::unitary_element(identity(2))});
  q.terms.push_back({1.0 / std::numbers::sqrt2, detail::unitary_element(gates::S())});
  q.terms.push_back({-(std::numbers::sqrt2 - 1.0) / 2.0, detail::unitary_element(gates::Z())});
  q.claimed_gamma = std::numbers::sqrt2;
  return q;
}

/// |H><H| = 1/2 |+><+| + 1/sqrt2 |i+><i+| - (sqrt2-1)/2 |-><-|.
inline QuasiDecomposition magic_state_qpd() {
  QuasiDecomposition q;
  q.target_label = "H_state";
  const SubsystemDims d = SubsystemDims::qubits(1);
  q.terms.push_back({0.5, detail::prep_element(states::plus(), d)});
  q.terms.push_back({1.0 / std::numbers::sqrt2, detail::prep_element(states::plus_i(), d)});
  q.terms.push_back({-(std::numbers::sqrt2 - 1.0) / 2.0, detail::prep_element(states::minus(), d)});
  q.claimed_gamma = std::numbers::sqrt2;
  return q;
}

/// Optimal separable QPD of sum_k u_k |f_k>|g_k>; columns of f and g are the Schmidt vectors.
/// sigma+ mixes 2^r - 1 explicit product states; sigma- mixes |f_k g_l>, k != l.
inline QuasiDecomposition pure_state_sep_qpd(const std::vector<double>& u, const DenseOperator& f,
                                             const DenseOperator& g, const SubsystemDims& dims_a,
                                             const SubsystemDims& dims_b) {
  const std::size_t r = u.size();
  if (r == 0) throw DomainError("pure_state_sep_qpd needs at least one coefficient");
  if (r > kMaxPureStateRank) throw SizeCap("Schmidt rank " + std::to_string(r) + " exceeds the cap of 8");
  detail::require_normalized(u, tol::kEqual);
  for (double x : u) {
    if (!(x > 0.0)) throw DomainError("Schmidt coefficients must be positive");
  }
  if (static_cast<std::size_t>(f.rows()) != dims_a.total() || static_cast<std::size_t>(g.rows()) != dims_b.total() ||
      static_cast<std::size_t>(f.cols()) < r || static_cast<std::size_t>(g.cols()) < r) {
    throw DimMismatch("Schmidt bases do not match the given dims");
  }
  const SubsystemDims dims = dims_a.concat(dims_b);
  const double s = detail::sum_of(u);
  const double a_plus = s * s;
  const double a_minus = s * s - 1.0;
  const std::size_t n_plus = (std::size_t{1} << r) - 1;

  std::vector<WeightedInstrument::Branch> plus;
  for (std::size_t j = 1; j <= n_plus; ++j) {
    StateVector phi = StateVector::Zero(f.rows());
    StateVector tau = StateVector::Zero(g.rows());
    for (std::size_t k = 1; k <= r; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>((std::size_t{1} << (k - 1)) - 1) / static_cast<double>(n_plus);
      const double amp = std::sqrt(u[k - 1] / s);
      phi += amp * std::polar(1.0, theta) * f.col(static_cast<Eigen::Index>(k - 1));
      tau += amp * std::polar(1.0, -theta) * g.col(static_cast<Eigen::Index>(k - 1));
    }
    const DenseOperator col = kron(phi, tau) / std::sqrt(static_cast<double>(n_plus));
    plus.push_back({KrausChannel({col}, SubsystemDims(), dims), 1.0});
  }
  QuasiDecomposition q;
  q.terms.push_back({a_plus, WeightedInstrument(std::move(plus))});
  if (r > 1) {
    std::vector<WeightedInstrument::Branch> minus;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t l = 0; l < r; ++l) {
        if (k == l) continue;
        const DenseOperator col = kron(f.col(static_cast<Eigen::Index>(k)), g.col(static_cast<Eigen::Index>(l))) *
                                  std::sqrt(u[k] * u[l] / a_minus);
        minus.push_back({KrausChannel({col}, SubsystemDims(), dims), 1.0});
      }
    }
    q.terms.push_back({-a_minus, WeightedInstrument(std::move(minus))});
  }
  q.claimed_gamma = 2.0 * s * s - 1.0;
  q.target_label = "pure_state";
  return q;
}

/// Computational Schmidt bases with the smallest power-of-two local dimension >= max(2, rank).
inline QuasiDecomposition pure_state_sep_qpd(const std::vector<double>& u) {
  const std::size_t d = std::bit_ceil(std::max<std::size_t>(2, u.size()));
  if (u.size() > kMaxPureStateRank) throw SizeCap("Schmidt rank " + std::to_string(u.size()) + " exceeds the cap of 8");
  const DenseOperator basis = identity(d);
  return pure_state_sep_qpd(u, basis, basis, dims_for(d), dims_for(d));
}

/// QPD of a bipartite pure state given on dims_a (x) dims_b.
inline QuasiDecomposition pure_state_sep_qpd(const StateVector& psi, const SubsystemDims& dims_a,
                                             const SubsystemDims& dims_b, double cutoff = 1e-12) {
  const auto sd = schmidt(psi, SubsystemDims{dims_a.total(), dims_b.total()});
  std::vector<double> u;
  for (double c : sd.coefficients) {
    if (c > cutoff) u.push_back(c);
  }
  return pure_state_sep_qpd(u, sd.left, sd.right, dims_a, dims_b);
}

/// (2(sum u)^2 - 1, (sum u)^2, 2^{H(u^2)}).
inline ExtentTriple pure_state_extents(const std::vector<double>& u) {
  detail::require_normalized(u, tol::kEqual);
  const double s = detail::sum_of(u);
  double entropy = 0.0;
  for (double x : u) {
    const double p = x * x;
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  return ExtentTriple{2.0 * s * s - 1.0, s * s, std::exp2(entropy)};
}

/// Branch Kraus operators (L_j + e^{-i phi} L_k)/2 and (L_j - e^{-i phi} L_k)/2 read off the
/// one-ancilla circuit: ancilla (|0> + e^{-i phi}|1>)/sqrt2, controlled L_j / L_k, H, Z measurement.
inline std::pair<DenseOperator, DenseOperator> one_ancilla_branches(const DenseOperator& lj, const DenseOperator& lk,
                                                                    double phi) {
  const auto d = lj.rows();
  StateVector anc(2);
  anc << 1.0, std::exp(-kI * phi);
  anc /= std::sqrt(2.0);
  const DenseOperator controlled = kron(projector(states::zero()), lj) + kron(projector(states::one()), lk);
  const DenseOperator circuit = kron(gates::H(), identity(static_cast<std::size_t>(d))) * controlled *
                                kron(DenseOperator(anc), identity(static_cast<std::size_t>(d)));
  return {circuit.topRows(d), circuit.bottomRows(d)};
}

namespace detail {

inline WeightedInstrument lo_cross_element(const DenseOperator& lj, const DenseOperator& lk, const DenseOperator& rj,
                                           const DenseOperator& rk, double phi, const SubsystemDims& da,
                                           const SubsystemDims& db) {
  const auto [ap, am] = one_ancilla_branches(lj, lk, phi);
  const auto [bp, bm] = one_ancilla_branches(rj, rk, phi);
  const SubsystemDims dims = da.concat(db);
  std::vector<WeightedInstrument::Branch> out;
  out.push_back({KrausChannel({kron(ap, bp)}, dims, dims), 1.0});
  out.push_back({KrausChannel({kron(ap, bm)}, dims, dims), -1.0});
  out.push_back({KrausChannel({kron(am, bp)}, dims, dims), -1.0});
  out.push_back({KrausChannel({kron(am, bm)}, dims, dims), 1.0});
  return WeightedInstrument(std::move(out));
}

}  // namespace detail

/// LO QPD of U = sum_j u_j L_j (x) R_j: terms u_j^2 L_j (x) R_j and
/// 2 u_j u_k (A^0 (x) B^0 - A^{pi/2} (x) B^{pi/2}) for j < k.
inline QuasiDecomposition kak_lo_qpd(const std::vector<double>& u, const std::vector<DenseOperator>& l,
                                     const std::vector<DenseOperator>& r) {
  if (u.empty() || l.size() != u.size() || r.size() != u.size()) throw DimMismatch("kak_lo_qpd: list lengths differ");
  double sq = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(u[j] > 0.0)) throw NonUnitarySchmidtForm("coefficients must be positive");
    if (!is_unitary(l[j], 1e-8) || !is_unitary(r[j], 1e-8)) {
      throw NonUnitarySchmidtForm("factor " + std::to_string(j) + " is not unitary");
    }
    sq += u[j] * u[j];
  }
  if (std::abs(sq - 1.0) > 1e-8) throw NonUnitarySchmidtForm("squared coefficients do not sum to 1");
  const SubsystemDims da = dims_for(static_cast<std::size_t>(l[0].rows()));
  const SubsystemDims db = dims_for(static_cast<std::size_t>(r[0].rows()));
  const SubsystemDims dims = da.concat(db);
  QuasiDecomposition q;
  for (std::size_t j = 0; j < u.size(); ++j) {
    q.terms.push_back({u[j] * u[j], WeightedInstrument::single(KrausChannel({kron(l[j], r[j])}, dims, dims))});
  }
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (std::size_t k = j + 1; k < u.size(); ++k) {
      const double c = 2.0 * u[j] * u[k];
      q.terms.push_back({c, detail::lo_cross_element(l[j], l[k], r[j], r[k], 0.0, da, db)});
      q.terms.push_back({-c, detail::lo_cross_element(l[j], l[k], r[j], r[k], std::numbers::pi / 2, da, db)});
    }
  }
  const double s = detail::sum_of(u);
  q.claimed_gamma = 2.0 * s * s - 1.0;
  q.target_label = "bipartite_unitary";
  return q;
}

/// Unitary Schmidt form of a two-qubit gate: SVD factors when they are unitary, else KAK.
inline UnitarySchmidtForm two_qubit_schmidt_form(const DenseOperator& u) {
  if (u.rows() != 4 || !is_unitary(u, 1e-8)) throw DomainError("two_qubit_gate_qpd needs a 4x4 unitary");
  const auto os = operator_schmidt(u, SubsystemDims{2, 2});
  bool unitary = true;
  for (std::size_t j = 0; j < os.coefficients.size(); ++j) {
    unitary = unitary && is_unitary(os.left[j], 1e-8) && is_unitary(os.right[j], 1e-8);
  }
  if (unitary) return UnitarySchmidtForm{os.coefficients, os.left, os.right};
  return unitary_schmidt_form(kak_decompose(u));
}

inline QuasiDecomposition two_qubit_gate_qpd(const DenseOperator& u) {
  const UnitarySchmidtForm f = two_qubit_schmidt_form(u);
  QuasiDecomposition q = kak_lo_qpd(f.coefficients, f.left, f.right);
  q.target_label = "two_qubit_gate";
  return q;
}

namespace detail {

/// Measure `obs` (eigenvalues +-1, or the identity) and prepare the mixed state uniform on `prep`'s columns.
inline WeightedInstrument measure_prepare_element(const DenseOperator& obs, const DenseOperator& prep,
                                                  const SubsystemDims& dims) {
  const double norm = 1.0 / std::sqrt(static_cast<double>(prep.cols()));
  auto branch = [&](const DenseOperator& support, double weight) {
    std::vector<DenseOperator> ops;
    for (Eigen::Index e = 0; e < support.cols(); ++e) {
      for (Eigen::Index p = 0; p < prep.cols(); ++p) ops.push_back(norm * prep.col(p) * support.col(e).adjoint());
    }
    return WeightedInstrument::Branch{KrausChannel(std::move(ops), dims, dims), weight};
  };
  const auto d = obs.rows();
  if ((obs - DenseOperator::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12) {
    return WeightedInstrument({branch(DenseOperator::Identity(d, d), 1.0)});
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(obs);
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index k = 0; k < d; ++k) (es.eigenvalues()(k) > 0 ? pos : neg).push_back(k);
  DenseOperator vp(d, static_cast<Eigen::Index>(pos.size())), vn(d, static_cast<Eigen::Index>(neg.size()));
  for (std::size_t k = 0; k < pos.size(); ++k) vp.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(pos[k]);
  for (std::size_t k = 0; k < neg.size(); ++k) vn.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(neg[k]);
  return WeightedInstrument({branch(vp, 1.0), branch(vn, -1.0)});
}

inline DenseOperator eigenspace(const DenseOperator& obs, double sign) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(obs);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < obs.rows(); ++k) {
    if (es.eigenvalues()(k) * sign > 0) idx.push_back(k);
  }
  DenseOperator v(obs.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(idx[k]);
  return v;
}

}  // namespace detail

/// Measure-and-prepare wire cut: rho = sum_Q tr[Q rho] Q / 2^n with Q/2^n = (tau+ - tau-)/2.
/// For n = 1 the terms are, in order, (I,|0>), (I,|1>), (X,|+>), (X,|->), (Y,|i>), (Y,|-i>), (Z,|0>), (Z,|1>).
inline QuasiDecomposition wirecut_mpc_qpd(std::size_t n) {
  if (n == 0 || n > 3) throw SizeCap("wirecut_mpc_qpd supports 1 to 3 qubits");
  const SubsystemDims dims = SubsystemDims::qubits(n);
  const std::size_t d = std::size_t{1} << n;
  QuasiDecomposition q;
  q.target_label = "identity";
  for (std::size_t i = 0; i < (std::size_t{1} << (2 * n)); ++i) {
    const DenseOperator p = pauli_string(i, n);
    DenseOperator up, down;
    if (i == 0) {
      const DenseOperator z0 = kron(projector(states::zero()), identity(d / 2));
      up = detail::eigenspace(z0 * 2.0 - identity(d), 1.0);
      down = detail::eigenspace(z0 * 2.0 - identity(d), -1.0);
    } else {
      up = detail::eigenspace(p, 1.0);
      down = detail::eigenspace(p, -1.0);
    }
    q.terms.push_back({0.5, detail::measure_prepare_element(p, up, dims)});
    q.terms.push_back({i == 0 ? 0.5 : -0.5, detail::measure_prepare_element(p, down, dims)});
  }
  q.claimed_gamma = static_cast<double>(std::size_t{1} << (2 * n));
  return q;
}

namespace detail {

/// rho -> sum_i d p_i <conj f_i|rho|conj f_i> |g_i><g_i|, one branch per outcome.
inline WeightedInstrument entanglement_breaking_element(const std::vector<StateVector>& f,
                                                        const std::vector<StateVector>& g,
                                                        const std::vector<double>& p, const SubsystemDims& dims) {
  const double d = static_cast<double>(dims.total());
  std::vector<WeightedInstrument::Branch> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const DenseOperator k = std::sqrt(d * p[i]) * g[i] * f[i].conjugate().adjoint();
    out.push_back({KrausChannel({k}, dims, dims), 1.0});
  }
  return WeightedInstrument(std::move(out));
}

}  // namespace detail

/// Entanglement-breaking wire cut of a d-dimensional identity: d E+ - (d-1) E-.
inline QuasiDecomposition wirecut_ebc_qpd(std::size_t d) {
  if (d != 2 && d != 4 && d != 8) throw SizeCap("wirecut_ebc_qpd supports d in {2, 4, 8}");
  const SubsystemDims dims = dims_for(d);
  const std::size_t n_plus = (std::size_t{1} << d) - 1;
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<StateVector> f, g;
  std::vector<double> p;
  for (std::size_t j = 1; j <= n_plus; ++j) {
    StateVector phi = StateVector::Zero(static_cast<Eigen::Index>(d));
    StateVector tau = StateVector::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t k = 1; k <= d; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>((std::size_t{1} << (k - 1)) - 1) / static_cast<double>(n_plus);
      phi(static_cast<Eigen::Index>(k - 1)) = amp * std::polar(1.0, theta);
      tau(static_cast<Eigen::Index>(k - 1)) = amp * std::polar(1.0, -theta);
    }
    f.push_back(phi);
    g.push_back(tau);
    p.push_back(1.0 / static_cast<double>(n_plus));
  }
  QuasiDecomposition q;
  q.target_label = "identity";
  q.terms.push_back({static_cast<double>(d), detail::entanglement_breaking_element(f, g, p, dims)});
  f.clear();
  g.clear();
  p.clear();
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = 0; l < d; ++l) {
      if (k == l) continue;
      f.push_back(basis_ket(d, k));
      g.push_back(basis_ket(d, l));
      p.push_back(1.0 / static_cast<double>(d * (d - 1)));
    }
  }
  q.terms.push_back({-static_cast<double>(d - 1), detail::entanglement_breaking_element(f, g, p, dims)});
  q.claimed_gamma = static_cast<double>(2 * d - 1);
  return q;
}

/// Transpose map as ((d+1)/2) Lambda+/tr - ((d-1)/2) Lambda-/tr, both CPTP.
inline QuasiDecomposition transpose_qpd(std::size_t d) {
  if (d < 2) throw DomainError("transpose_qpd needs d >= 2");
  const SubsystemDims dims = dims_for(d);
  DenseOperator swap = DenseOperator::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) swap(static_cast<Eigen::Index>(a * d + b), static_cast<Eigen::Index>(b * d + a)) = 1.0;
  }
  const DenseOperator id = identity(d * d);
  const double dd = static_cast<double>(d);
  const ChoiOperator sym{(id + swap) / (dd * (dd + 1.0)), dims, dims};
  const ChoiOperator anti{(id - swap) / (dd * (dd - 1.0)), dims, dims};
  QuasiDecomposition q;
  q.target_label = "transpose";
  q.terms.push_back({(dd + 1.0) / 2.0, WeightedInstrument::single(kraus_of(sym))});
  q.terms.push_back({-(dd - 1.0) / 2.0, WeightedInstrument::single(kraus_of(anti))});
  q.claimed_gamma = dd;
  return q;
}

/// UNOT = -1/2 id + 1/2 X. + 1/2 Y. + 1/2 Z.
inline QuasiDecomposition unot_qpd() {
  QuasiDecomposition q;
  q.target_label = "UNOT";
  q.terms.push_back({-0.5, detail::unitary_element(identity(2))});
  for (std::size_t k = 1; k < 4; ++k) q.terms.push_back({0.5, detail::unitary_element(pauli(k))});
  q.claimed_gamma = 2.0;
  return q;
}

struct PecToyModel {
  KrausChannel noise;               // N_eps
  std::vector<KrausChannel> basis;  // N_eps o Q for Q = I, X, Y, Z
  QuasiDecomposition inverse;       // N_eps^{-1} over `basis`
};

/// gamma of the inverse over the noisy Pauli basis: (1 + eps - eps^2/2)/(1 - eps)^2.
inline double pec_inverse_gamma(double eps) { return (1.0 + eps - eps * eps / 2.0) / ((1.0 - eps) * (1.0 - eps)); }

/// The closed form quoted for the same toy model, (1 + eps - eps^2)/(1 - 2 eps + 2 eps^2).
inline double pec_quoted_gamma(double eps) { return (1.0 + eps - eps * eps) / (1.0 - 2.0 * eps + 2.0 * eps * eps); }

inline PecToyModel pec_basis_and_inverse(double eps) {
  if (eps < 0.0) throw DomainError("noise rate must be nonnegative");
  if (eps >= 0.5) throw NotInvertible("noise rate must be below 1/2");
  PecToyModel m;
  m.noise = depolarizing(eps);
  for (std::size_t k = 0; k < 4; ++k) m.basis.push_back(compose(m.noise, KrausChannel::unitary(pauli(k))));
  const double f = (1.0 - eps) * (1.0 - eps);
  const auto dec = pauli_diagonal_inverse({1.0, f, f, f});
  m.inverse.target_label = "depolarizing_inverse";
  for (std::size_t k = 0; k < 4; ++k) {
    if (dec.coefficients[k] == 0.0) continue;
    m.inverse.terms.push_back({dec.coefficients[k], WeightedInstrument::single(m.basis[k])});
  }
  m.inverse.claimed_gamma = pec_inverse_gamma(eps);
  return m;
}

struct CliffordCut {
  double extent = 1.0;
  QuasiDecomposition qpd;  // QPD of the Choi state on (A_in A_out ; B_in B_out)
};

/// Separable-QPD extent of the Choi state of U across (A A' ; B B'), A = first n qubits.
inline CliffordCut clifford_gate_cut(const DenseOperator& u, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DomainError("both parties need at least one qubit");
  if (n + m > 3) throw SizeCap("clifford_gate_cut supports at most 3 qubits");
  const std::size_t q = n + m;
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << q);
  if (u.rows() != d || !is_unitary(u, 1e-8)) throw DomainError("clifford_gate_cut needs a unitary on n+m qubits");
  StateVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index o = 0; o < d; ++o) v(i * d + o) = u(o, i) / std::sqrt(static_cast<double>(d));
  }
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < n; ++k) perm.push_back(k);
  for (std::size_t k = 0; k < n; ++k) perm.push_back(q + k);
  for (std::size_t k = 0; k < m; ++k) perm.push_back(n + k);
  for (std::size_t k = 0; k < m; ++k) perm.push_back(q + n + k);
  const StateVector regrouped = permute_subsystems(v, SubsystemDims::qubits(2 * q), perm).col(0);
  CliffordCut out;
  out.qpd = pure_state_sep_qpd(regrouped, SubsystemDims::qubits(2 * n), SubsystemDims::qubits(2 * m));
  out.qpd.target_label = "choi_state";
  out.extent = *out.qpd.claimed_gamma;
  return out;
}

/// Extent of the controlled-R_k rotation (angle 2 pi / 2^k): 1 + 2 sin(pi / 2^k).
inline double controlled_rk_extent(std::size_t k) { return 1.0 + 2.0 * std::sin(std::numbers::pi / std::exp2(static_cast<double>(k))); }

/// Upper bound on the cut extent of an n-qubit QFT split after `partition` qubits: the product of
/// the extents of every controlled rotation crossing the cut.
inline double qft_cut_bound(std::size_t n, std::size_t partition) {
  if (partition < 1 || partition >= n || n > 64) throw DomainError("qft_cut_bound needs 1 <= partition < n <= 64");
  double bound = 1.0;
  for (std::size_t target = 0; target < n; ++target) {
    for (std::size_t control = target + 1; control < n; ++control) {
      const bool crosses = (target < partition) != (control < partition);
      if (crosses) bound *= controlled_rk_extent(control - target + 1);
    }
  }
  return bound;
}

/// prod_{k=1}^{kmax} (1 + 2 sin(2 pi / 2^{k+1}))^k, the quoted large-n product.
inline double qft_product_formula(std::size_t kmax = 256) {
  double p = 1.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    p *= std::pow(1.0 + 2.0 * std::sin(2.0 * std::numbers::pi / std::exp2(static_cast<double>(k + 1))), static_cast<double>(k));
  }
  return p;
}

/// Sixteen single-qubit Clifford-type weighted instruments with linearly independent Choi operators.
inline std::vector<WeightedInstrument> modified_endo_basis() {
  const DenseOperator i2 = identity(2);
  auto r1 = [&](const DenseOperator& q) -> DenseOperator { return (i2 + kI * q) / std::sqrt(2.0); };
  auto r2 = [&](const DenseOperator& q1, const DenseOperator& q2) -> DenseOperator { return (q1 + q2) / std::sqrt(2.0); };
  auto pi1 = [&](const DenseOperator& q) -> DenseOperator { return (i2 + q) / 2.0; };
  auto pi2 = [&](const DenseOperator& q1, const DenseOperator& q2) -> DenseOperator { return (q1 + kI * q2) / 2.0; };
  auto signed_pair = [](const DenseOperator& a, const DenseOperator& b, double scale) {
    return WeightedInstrument({{KrausChannel({scale * a}), 1.0}, {KrausChannel({scale * b}), -1.0}});
  };
  const DenseOperator x = gates::X(), y = gates::Y(), z = gates::Z();
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<WeightedInstrument> out;
  out.push_back(detail::unitary_element(i2));
  out.push_back(detail::unitary_element(x));
  out.push_back(detail::unitary_element(y));
  out.push_back(detail::unitary_element(z));
  out.push_back(signed_pair(r1(x), r1(-x), h));
  out.push_back(signed_pair(r1(y), r1(-y), h));
  out.push_back(signed_pair(r1(z), r1(-z), h));
  out.push_back(signed_pair(r2(y, z), r2(y, -z), h));
  out.push_back(signed_pair(r2(z, x), r2(z, -x), h));
  out.push_back(signed_pair(r2(x, y), r2(x, -y), h));
  out.push_back(signed_pair(pi1(x), pi1(-x), 1.0));
  out.push_back(signed_pair(pi1(y), pi1(-y), 1.0));
  out.push_back(signed_pair(pi1(z), pi1(-z), 1.0));
  out.push_back(signed_pair(pi2(y, z), pi2(z, y), 1.0));
  out.push_back(signed_pair(pi2(z, x), pi2(x, z), 1.0));
  out.push_back(signed_pair(pi2(x, y), pi2(y, x), 1.0));
  return out;
}

}  // namespace qknit

#endif  // QKNIT_CATALOG_HPP
