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

#ifndef QKNIT_CUTTING_HPP
#define QKNIT_CUTTING_HPP

#include <map>
#include <set>

#include "qknit/catalog.hpp"
#include "qknit/circuit.hpp"

namespace qknit {

/// (-1)^{<Q_i,Q_a> + <Q_j,Q_a> + <Q_i,Q_b> + <Q_j,Q_b>} with <.,.> the anticommutation indicator.
inline int teleport_sign(std::size_t i, std::size_t j, std::size_t alpha, std::size_t beta) {
  if (i > 3 || j > 3 || alpha > 3 || beta > 3) throw DomainError("teleport_sign indices must lie in {0,1,2,3}");
  const int parity = anticommutes_1q(i, alpha) + anticommutes_1q(j, alpha) + anticommutes_1q(i, beta) +
                     anticommutes_1q(j, beta);
  return parity % 2 == 0 ? 1 : -1;
}

namespace detail {

inline void require_qubit_budget(std::size_t n) {
  if (n > kMaxEngineQubits) {
    throw SizeCap("cut circuit needs " + std::to_string(n) + " qubits; the engine cap is " + std::to_string(kMaxEngineQubits));
  }
}

inline DenseOperator ket_bra(const StateVector& a, const StateVector& b) { return a * b.adjoint(); }

/// Z measurement of q with outcome m, reset of q, and (S X)^m on the ancilla.
inline WeightedInstrument injection_correction() {
  std::vector<WeightedInstrument::Branch> br;
  const DenseOperator sx = gates::S() * gates::X();
  br.push_back({KrausChannel({kron(ket_bra(states::zero(), states::zero()), identity(2))}), 1.0});
  br.push_back({KrausChannel({kron(ket_bra(states::zero(), states::one()), sx)}), 1.0});
  return WeightedInstrument(std::move(br));
}

}  // namespace detail

/// Replaces each listed T gate by injection of |H> = T|+> on one reusable ancilla (the last qubit):
/// CNOT(ancilla -> q), Z measurement of q with S X correction on the ancilla, then SWAP.
/// With `qpd_prep` the |H> preparation is the magic-state QPD.
inline Circuit magic_injection_circuit(const Circuit& base, const std::vector<std::size_t>& t_sites, bool qpd_prep = false) {
  if (t_sites.empty()) return base;
  const std::set<std::size_t> wanted(t_sites.begin(), t_sites.end());
  for (std::size_t i : wanted) {
    const auto* g = i < base.sites.size() ? std::get_if<GateSite>(&base.sites[i]) : nullptr;
    if (!g || g->targets.size() != 1 || (g->unitary - gates::T()).cwiseAbs().maxCoeff() > 1e-12) {
      throw DomainError("site " + std::to_string(i) + " is not a T gate");
    }
  }
  Circuit out(base.qubits + 1);
  detail::require_qubit_budget(out.qubits);
  out.groups = base.groups;
  const std::size_t a = base.qubits;
  const WeightedInstrument correction = detail::injection_correction();
  for (std::size_t i = 0; i < base.sites.size(); ++i) {
    if (!wanted.count(i)) {
      out.sites.push_back(base.sites[i]);
      continue;
    }
    const std::size_t q = std::get<GateSite>(base.sites[i]).targets[0];
    if (qpd_prep) {
      out.qpd(magic_state_qpd(), {a}, KrausChannel({DenseOperator(states::magic_h())}, SubsystemDims(), SubsystemDims::qubits(1)));
    } else {
      out.prep(states::magic_h(), {a});
    }
    out.gate(gates::CNOT(), {a, q}, "CNOT");
    out.instrument(correction, {q, a});
    out.gate(gates::SWAP(), {q, a}, "SWAP");
  }
  return out;
}

namespace detail {

/// Z measurement of a with outcome m, reset of a, X^m on b.
inline WeightedInstrument cnot_forward() {
  return WeightedInstrument({{KrausChannel({kron(ket_bra(states::zero(), states::zero()), identity(2))}), 1.0},
                             {KrausChannel({kron(ket_bra(states::zero(), states::one()), gates::X())}), 1.0}});
}

/// X measurement of b with outcome m, reset of b, Z^m on the control.
inline WeightedInstrument cnot_backward() {
  return WeightedInstrument({{KrausChannel({kron(ket_bra(states::zero(), states::plus()), identity(2))}), 1.0},
                             {KrausChannel({kron(ket_bra(states::zero(), states::minus()), gates::Z())}), 1.0}});
}

inline std::size_t count_markers(const Circuit& c, const std::string& kind) {
  std::size_t k = 0;
  for (const auto& s : c.sites) {
    if (const auto* b = std::get_if<BlackBoxCutSite>(&s); b && b->kind == kind) ++k;
  }
  return k;
}

}  // namespace detail

/// Replaces every "cnot" cut marker by gate teleportation through Bell pairs. Markers are batched in
/// circuit order into groups of K; each group prepares its g Bell pairs with one separable QPD of the
/// rank-2^g maximally entangled state (1-norm 2^{g+1} - 1). Ancillas a_1..a_K, b_1..b_K follow the data.
inline Circuit blackbox_clifford_cut(const Circuit& c, std::size_t factory_size) {
  if (factory_size < 1 || factory_size > 3) throw SizeCap("factory size must be 1, 2 or 3");
  const std::size_t total = detail::count_markers(c, "cnot");
  if (total == 0) return c;
  const std::size_t k = factory_size;
  Circuit out(c.qubits + 2 * k);
  detail::require_qubit_budget(out.qubits);
  out.groups = c.groups;
  const WeightedInstrument forward = detail::cnot_forward(), backward = detail::cnot_backward();
  std::size_t seen = 0;
  for (const auto& s : c.sites) {
    const auto* b = std::get_if<BlackBoxCutSite>(&s);
    if (!b || b->kind != "cnot") {
      out.sites.push_back(s);
      continue;
    }
    if ((b->unitary - gates::CNOT()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("cnot cut marker must carry a CNOT");
    const std::size_t pair = seen % k;
    if (pair == 0) {
      const std::size_t g = std::min(k, total - seen);
      const std::size_t d = std::size_t{1} << g;
      Targets t;
      for (std::size_t i = 0; i < g; ++i) t.push_back(c.qubits + i);
      for (std::size_t i = 0; i < g; ++i) t.push_back(c.qubits + k + i);
      QuasiDecomposition q = pure_state_sep_qpd(std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))));
      q.target_label = "bell_pairs";
      KrausChannel ideal({DenseOperator(states::max_entangled(d))}, SubsystemDims(), SubsystemDims::qubits(2 * g));
      out.qpd(q, t, ideal);
    }
    const std::size_t ctrl = b->targets[0], tgt = b->targets[1];
    const std::size_t a = c.qubits + pair, bq = c.qubits + k + pair;
    out.gate(gates::CNOT(), {ctrl, a}, "CNOT");
    out.instrument(forward, {a, bq});
    out.gate(gates::CNOT(), {bq, tgt}, "CNOT");
    out.instrument(backward, {bq, ctrl});
    ++seen;
  }
  return out;
}

namespace detail {

struct CoreTerm {
  double u = 0.0;
  DenseOperator left, right;     // on all k gate slots
  std::vector<std::size_t> paulis;  // per-slot Pauli index
};

/// Joint unitary Schmidt form of the tensor product of KAK cores.
inline std::vector<CoreTerm> joint_core(const std::vector<KakDecomposition>& kaks) {
  std::vector<CoreTerm> terms{CoreTerm{1.0, identity(1), identity(1), {}}};
  for (const auto& kak : kaks) {
    std::vector<CoreTerm> next;
    for (const auto& t : terms) {
      for (std::size_t p = 0; p < 4; ++p) {
        const double mag = std::abs(kak.c[p]);
        if (mag < 1e-12) continue;
        CoreTerm n = t;
        n.u *= mag;
        n.left = kron(t.left, (kak.c[p] / mag) * pauli(p));
        n.right = kron(t.right, pauli(p));
        n.paulis.push_back(p);
        next.push_back(std::move(n));
      }
    }
    terms = std::move(next);
  }
  return terms;
}

/// Column (1/sqrt d) sum_x |x> (x) K|x>.
inline StateVector choi_column(const DenseOperator& k) {
  const auto d = k.rows();
  StateVector v = StateVector::Zero(d * d);
  for (Eigen::Index x = 0; x < d; ++x) v.segment(x * d, d) = k.col(x);
  return v / std::sqrt(static_cast<double>(d));
}

/// Bell measurement of (data, A') with outcome i, both reset to |0>, then Q_i on A with weight sign(i).
inline WeightedInstrument bell_slot(const std::array<int, 4>& sign) {
  const StateVector phi = states::max_entangled(2);
  const StateVector zz = basis_ket(4, 0);
  std::vector<WeightedInstrument::Branch> br;
  for (std::size_t i = 0; i < 4; ++i) {
    const StateVector psi = kron(pauli(i), identity(2)) * phi;
    br.push_back({KrausChannel({kron(DenseOperator(zz * psi.adjoint()), pauli(i))}), static_cast<double>(sign[i])});
  }
  return WeightedInstrument(std::move(br));
}

inline std::array<int, 4> slot_signs(std::size_t j, std::size_t k) {
  std::array<int, 4> s{};
  for (std::size_t i = 0; i < 4; ++i) s[i] = (anticommutes_1q(i, j) + anticommutes_1q(i, k)) % 2 == 0 ? 1 : -1;
  return s;
}

}  // namespace detail

/// Replaces the (at most two) "twoqubit" cut markers by one joint LO QPD over the parallel KAK cores,
/// realized by preparing each term's branch Choi states on ancillas and teleporting every gate's data
/// through them. Local KAK factors stay on the data qubits. Ancillas per gate: A', A, B', B.
inline Circuit blackbox_twoqubit_cut(const Circuit& c) {
  std::vector<std::size_t> where;
  std::vector<KakDecomposition> kaks;
  for (std::size_t i = 0; i < c.sites.size(); ++i) {
    const auto* b = std::get_if<BlackBoxCutSite>(&c.sites[i]);
    if (!b || b->kind != "twoqubit") continue;
    if (b->targets.size() != 2) throw DomainError("two-qubit cut marker needs two targets");
    where.push_back(i);
    kaks.push_back(kak_decompose(b->unitary));
  }
  const std::size_t k = where.size();
  if (k == 0) return c;
  if (k > 2) throw SizeCap("black-box two-qubit cutting supports at most two gates");
  Circuit out(c.qubits + 4 * k);
  detail::require_qubit_budget(out.qubits);
  out.groups = c.groups;

  const auto core = detail::joint_core(kaks);
  auto lp = std::make_shared<LinkedQpd>();
  lp->label = "blackbox_twoqubit";
  const SubsystemDims prep_dims = SubsystemDims::qubits(4 * k);
  auto add_term = [&](double coeff, const std::vector<std::pair<std::pair<DenseOperator, DenseOperator>, double>>& branches,
                      const std::vector<std::size_t>& pj, const std::vector<std::size_t>& pk) {
    std::vector<WeightedInstrument::Branch> prep;
    for (const auto& [ab, w] : branches) {
      const StateVector col = kron(detail::choi_column(ab.first), detail::choi_column(ab.second));
      prep.push_back({KrausChannel({DenseOperator(col)}, SubsystemDims(), prep_dims), w});
    }
    std::vector<WeightedInstrument> row{WeightedInstrument(std::move(prep))};
    for (std::size_t m = 0; m < k; ++m) {
      const auto s = detail::slot_signs(pj[m], pk[m]);
      row.push_back(detail::bell_slot(s));
      row.push_back(detail::bell_slot(s));
    }
    lp->coeffs.push_back(coeff);
    lp->elements.push_back(std::move(row));
  };
  for (const auto& t : core) add_term(t.u * t.u, {{{t.left, t.right}, 1.0}}, t.paulis, t.paulis);
  for (std::size_t j = 0; j < core.size(); ++j) {
    for (std::size_t l = j + 1; l < core.size(); ++l) {
      const double c2 = 2.0 * core[j].u * core[l].u;
      for (double phi : {0.0, std::numbers::pi / 2}) {
        const auto [ap, am] = one_ancilla_branches(core[j].left, core[l].left, phi);
        const auto [bp, bm] = one_ancilla_branches(core[j].right, core[l].right, phi);
        add_term(phi == 0.0 ? c2 : -c2, {{{ap, bp}, 1.0}, {{ap, bm}, -1.0}, {{am, bp}, -1.0}, {{am, bm}, 1.0}},
                 core[j].paulis, core[l].paulis);
      }
    }
  }
  const std::size_t group = out.groups.size();
  out.groups.push_back(lp);

  const std::size_t n = c.qubits;
  auto a_ref = [&](std::size_t m) { return n + m; };
  auto a_out = [&](std::size_t m) { return n + k + m; };
  auto b_ref = [&](std::size_t m) { return n + 2 * k + m; };
  auto b_out = [&](std::size_t m) { return n + 3 * k + m; };
  std::size_t m = 0;
  for (std::size_t i = 0; i < c.sites.size(); ++i) {
    if (m >= k || i != where[m]) {
      out.sites.push_back(c.sites[i]);
      continue;
    }
    const auto& b = std::get<BlackBoxCutSite>(c.sites[i]);
    const std::size_t qa = b.targets[0], qb = b.targets[1];
    if (m == 0) {
      Targets all(4 * k);
      for (std::size_t x = 0; x < 4 * k; ++x) all[x] = n + x;
      out.sites.emplace_back(LinkedQpdSite{group, 0, all});
    }
    const KakDecomposition& kak = kaks[m];
    out.gate(kak.k3, {qa}, "K3").gate(kak.k4, {qb}, "K4");
    out.sites.emplace_back(LinkedQpdSite{group, 1 + 2 * m, {qa, a_ref(m), a_out(m)}});
    out.sites.emplace_back(LinkedQpdSite{group, 2 + 2 * m, {qb, b_ref(m), b_out(m)}});
    out.gate(gates::SWAP(), {qa, a_out(m)}, "SWAP").gate(gates::SWAP(), {qb, b_out(m)}, "SWAP");
    out.gate(kak.k1, {qa}, "K1").gate(kak.k2, {qb}, "K2");
    ++m;
  }
  return out;
}

}  // namespace qknit

#endif  // QKNIT_CUTTING_HPP
