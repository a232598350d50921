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

#ifndef QKNIT_ENGINE_HPP
#define QKNIT_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "qknit/circuit.hpp"

namespace qknit {

/// Hermitian observable on a subset of qubits, operator norm at most 1.
struct Observable {
  DenseOperator op;
  Targets targets;
};

inline Observable full_observable(const DenseOperator& op, std::size_t n) {
  Targets t(n);
  for (std::size_t q = 0; q < n; ++q) t[q] = q;
  return Observable{op, t};
}

/// Pauli string such as "ZZ" on the given qubits, or on 0..len-1 when `targets` is empty.
inline Observable pauli_observable(const std::string& paulis, Targets targets = {}) {
  if (targets.empty()) {
    for (std::size_t q = 0; q < paulis.size(); ++q) targets.push_back(q);
  }
  if (targets.size() != paulis.size() || paulis.empty()) throw DomainError("Pauli string length must match its targets");
  DenseOperator op = identity(1);
  for (char ch : paulis) {
    const std::string letters = "IXYZ";
    const auto k = letters.find(ch);
    if (k == std::string::npos) throw DomainError(std::string("unknown Pauli letter '") + ch + "'");
    op = kron(op, pauli(k));
  }
  return Observable{op, targets};
}

namespace detail {

inline void check_observable(const Observable& o, std::size_t n) {
  if (o.targets.empty()) throw DomainError("observable needs targets");
  for (std::size_t k = 0; k < o.targets.size(); ++k) {
    if (o.targets[k] >= n) throw DomainError("observable targets a qubit out of range");
    for (std::size_t l = 0; l < k; ++l) {
      if (o.targets[l] == o.targets[k]) throw DomainError("observable repeats a target");
    }
  }
  if (o.op.rows() != (Eigen::Index{1} << o.targets.size()) || o.op.rows() != o.op.cols()) {
    throw DimMismatch("observable size does not match its targets");
  }
  if (!is_hermitian(o.op, 1e-9)) throw DomainError("observable must be Hermitian");
  if (operator_norm(o.op) > 1.0 + 1e-9) throw DomainError("observable operator norm exceeds 1");
}

/// Linear map on the targets: either sum_j w_j K_j . K_j^dagger, or reset-and-prepare `state`.
struct SignedMap {
  std::vector<DenseOperator> ops;
  std::vector<double> weights;
  bool prepares = false;
  DenseOperator state;
};

inline DenseOperator apply_map(const DenseOperator& rho, const SignedMap& m, const LocalOps& local) {
  if (m.prepares) return local.reset_prepare(rho, m.state);
  return local.apply_kraus(rho, m.ops, &m.weights);
}

inline DenseOperator prepared_state(const KrausChannel& c) {
  DenseOperator s = DenseOperator::Zero(static_cast<Eigen::Index>(c.dout()), static_cast<Eigen::Index>(c.dout()));
  for (const auto& k : c.kraus_ops) s += k * k.adjoint();
  return s;
}

/// sum_b beta_b E_b as one linear map.
inline SignedMap weighted_sum(const WeightedInstrument& w) {
  SignedMap m;
  if (w.dims_in().total() == 1) {
    m.prepares = true;
    m.state = DenseOperator::Zero(static_cast<Eigen::Index>(w.dims_out().total()), static_cast<Eigen::Index>(w.dims_out().total()));
    for (const auto& b : w.branches) m.state += b.weight * prepared_state(b.map);
    return m;
  }
  for (const auto& b : w.branches) {
    for (const auto& k : b.map.kraus_ops) {
      m.ops.push_back(k);
      m.weights.push_back(b.weight);
    }
  }
  return m;
}

/// Hermiticity-preserving map from its Choi operator, via the eigendecomposition.
inline SignedMap map_from_choi(const ChoiOperator& c) {
  SignedMap m;
  const std::size_t din = c.dims_in.total(), dout = c.dims_out.total();
  if (din == 1) {
    m.prepares = true;
    m.state = c.matrix;
    return m;
  }
  Eigen::SelfAdjointEigenSolver<DenseOperator> es((c.matrix + c.matrix.adjoint()) / 2.0);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (std::abs(lambda) < 1e-14 * scale) continue;
    DenseOperator op(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din));
    for (std::size_t i = 0; i < din; ++i) {
      for (std::size_t o = 0; o < dout; ++o) {
        op(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
            std::sqrt(static_cast<double>(din)) * es.eigenvectors()(static_cast<Eigen::Index>(i * dout + o), k);
      }
    }
    m.ops.push_back(op);
    m.weights.push_back(lambda);
  }
  return m;
}

inline SignedMap map_from_channel(const KrausChannel& c) {
  SignedMap m;
  if (c.din() == 1) {
    m.prepares = true;
    m.state = prepared_state(c);
    return m;
  }
  m.ops = c.kraus_ops;
  m.weights.assign(m.ops.size(), 1.0);
  return m;
}

inline DenseOperator initial_state(std::size_t n) {
  const auto d = Eigen::Index{1} << n;
  DenseOperator rho = DenseOperator::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

inline double expectation_of(const DenseOperator& rho, const Observable& obs, const LocalOps& local) {
  return (obs.op * local.reduced(rho)).trace().real();
}

inline std::vector<LocalOps> local_ops_for(const Circuit& c) {
  std::vector<LocalOps> out;
  out.reserve(c.sites.size());
  for (const auto& s : c.sites) out.emplace_back(c.qubits, targets_of(s));
  return out;
}

/// Exact evolution; QPD terms (all of them, or only linked groups) are enumerated by recursion.
class ExactRunner {
 public:
  ExactRunner(const Circuit& c, const Observable& obs, bool expand_qpd)
      : c_(c), obs_(obs), expand_(expand_qpd), local_(local_ops_for(c)), obs_local_(c.qubits, obs.targets) {
    double combos = 1.0;
    maps_.resize(c.sites.size());
    for (std::size_t i = 0; i < c.sites.size(); ++i) {
      const Site& s = c.sites[i];
      if (const auto* q = std::get_if<QpdSite>(&s)) {
        if (expand_) {
          for (const auto& t : q->qpd->terms) maps_[i].push_back(weighted_sum(t.element));
          combos *= static_cast<double>(q->qpd->terms.size());
        } else {
          maps_[i].push_back(q->ideal ? map_from_channel(*q->ideal) : map_from_choi(reconstruct(*q->qpd)));
        }
      } else if (const auto* w = std::get_if<InstrumentSite>(&s)) {
        maps_[i].push_back(weighted_sum(w->instrument));
      } else if (const auto* ch = std::get_if<ChannelSite>(&s)) {
        maps_[i].push_back(map_from_channel(ch->channel));
      } else if (const auto* l = std::get_if<LinkedQpdSite>(&s)) {
        for (const auto& row : c.groups[l->group]->elements) maps_[i].push_back(weighted_sum(row[l->slot]));
      }
    }
    for (const auto& g : c.groups) combos *= static_cast<double>(g->coeffs.size());
    if (combos > static_cast<double>(kMaxTerms)) throw SizeCap("exact evaluation would enumerate more than 1e6 term products");
  }

  double run() {
    std::vector<int> chosen(c_.groups.size(), -1);
    return run_from(0, initial_state(c_.qubits), chosen);
  }

 private:
  double run_from(std::size_t pos, DenseOperator rho, std::vector<int>& chosen) {
    for (; pos < c_.sites.size(); ++pos) {
      const Site& s = c_.sites[pos];
      const LocalOps& local = local_[pos];
      if (const auto* p = std::get_if<PrepSite>(&s)) {
        rho = local.reset_prepare(rho, p->state);
      } else if (const auto* g = std::get_if<GateSite>(&s)) {
        rho = local.conjugate(rho, g->unitary);
      } else if (const auto* b = std::get_if<BlackBoxCutSite>(&s)) {
        rho = local.conjugate(rho, b->unitary);
      } else if (const auto* q = std::get_if<QpdSite>(&s)) {
        if (!expand_) {
          rho = apply_map(rho, maps_[pos][0], local);
          continue;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < q->qpd->terms.size(); ++i) {
          total += q->qpd->terms[i].coeff * run_from(pos + 1, apply_map(rho, maps_[pos][i], local), chosen);
        }
        return total;
      } else if (const auto* l = std::get_if<LinkedQpdSite>(&s)) {
        int& pick = chosen[l->group];
        if (pick >= 0) {
          rho = apply_map(rho, maps_[pos][static_cast<std::size_t>(pick)], local);
          continue;
        }
        const auto& coeffs = c_.groups[l->group]->coeffs;
        double total = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
          pick = static_cast<int>(i);
          total += coeffs[i] * run_from(pos + 1, apply_map(rho, maps_[pos][i], local), chosen);
        }
        pick = -1;
        return total;
      } else {
        rho = apply_map(rho, maps_[pos][0], local);
      }
    }
    return expectation_of(rho, obs_, obs_local_);
  }

  const Circuit& c_;
  const Observable& obs_;
  bool expand_;
  std::vector<LocalOps> local_;
  LocalOps obs_local_;
  std::vector<std::vector<SignedMap>> maps_;
};

}  // namespace detail

/// tr[O rho_final] with every QPD replaced by its ideal map (or reconstruction) and cut markers run as gates.
/// Linked groups have no single-site reconstruction and are summed term by term.
inline double exact_expectation(const Circuit& c, const Observable& obs) {
  validate_circuit(c);
  detail::check_observable(obs, c.qubits);
  return detail::ExactRunner(c, obs, false).run();
}

/// sum over every QPD term of a_i times the evolution through that term's weighted branches.
inline double exact_qpd_expectation(const Circuit& c, const Observable& obs) {
  validate_circuit(c);
  detail::check_observable(obs, c.qubits);
  return detail::ExactRunner(c, obs, true).run();
}

enum class EstimatorMode { Sampled, Analytic };

struct EstimateOptions {
  std::size_t shots = 10000;
  std::uint64_t seed = 0;
  EstimatorMode mode = EstimatorMode::Analytic;
  std::size_t threads = 0;  // 0: hardware concurrency
  double delta = 0.05;
  std::size_t cache_bytes = std::size_t{512} << 20;
  bool keep_values = false;
};

struct EstimateReport {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t shots = 0;
  double one_norm = 1.0;
  double hoeffding_eps_at_delta = 0.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
  EstimatorMode mode = EstimatorMode::Analytic;
  std::vector<double> values;  // per shot, when requested
};

/// Counter-based uniform draw in [0, 1) keyed by (seed, shot, site, draw).
inline double counter_uniform(std::uint64_t seed, std::uint64_t shot, std::uint64_t site, std::uint64_t draw) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ shot);
  h = mix(h ^ site);
  h = mix(h ^ draw);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Order-stable pairwise sum.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

namespace detail {

/// Evolution state between random choices.
struct Cursor {
  DenseOperator rho;
  std::size_t site = 0;
  int pending_term = -1;
  std::vector<int> chosen;
};

struct ChoicePoint {
  enum class Kind { Term, Branch, Leaf, Dead };
  Kind kind = Kind::Leaf;
  std::size_t site = 0;
  std::vector<double> cumulative;
  std::vector<double> mult;
  std::vector<std::size_t> option;
  std::vector<double> prob;
  const WeightedInstrument* instrument = nullptr;
  double analytic = 0.0;
  std::vector<double> eigenvalues;
};

/// Memoized tree of per-shot evolutions; each node is the cursor at a random choice.
class ShotTree {
 public:
  struct Node {
    double gain = 1.0;
    Cursor cursor;
    ChoicePoint choice;
    std::unique_ptr<std::unique_ptr<Node>[]> children;
    std::unique_ptr<std::once_flag[]> flags;
  };

  ShotTree(const Circuit& c, const Observable& obs, EstimatorMode mode, std::size_t budget)
      : c_(c), obs_(obs), mode_(mode), budget_(budget), local_(local_ops_for(c)), obs_local_(c.qubits, obs.targets) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(obs.op);
    obs_values_ = es.eigenvalues();
    obs_vectors_ = es.eigenvectors();
    Cursor start;
    start.rho = initial_state(c.qubits);
    start.chosen.assign(c.groups.size(), -1);
    root_ = build(std::move(start), 1.0, true);
  }

  double shot(std::uint64_t seed, std::uint64_t index) {
    const Node* node = root_.get();
    std::unique_ptr<Node> owned;
    double f = node->gain;
    while (node->choice.kind == ChoicePoint::Kind::Term || node->choice.kind == ChoicePoint::Kind::Branch) {
      const ChoicePoint& ch = node->choice;
      const std::uint64_t draw = ch.kind == ChoicePoint::Kind::Term ? 0 : 1;
      const std::size_t k = pick(ch.cumulative, counter_uniform(seed, index, ch.site, draw));
      const Node* next = child(*node, k, owned);
      f *= next->gain;
      node = next;
    }
    if (node->choice.kind == ChoicePoint::Kind::Dead) return 0.0;
    if (mode_ == EstimatorMode::Analytic) return f * node->choice.analytic;
    const std::size_t k = pick(node->choice.cumulative, counter_uniform(seed, index, c_.sites.size(), 0));
    return f * node->choice.eigenvalues[k];
  }

 private:
  static std::size_t pick(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
  }

  const Node* child(const Node& parent, std::size_t k, std::unique_ptr<Node>& owned) {
    if (parent.children) {
      std::call_once(parent.flags[k], [&] {
        const bool keep = bytes_.load() < budget_;
        auto n = make_child(parent, k, keep);
        if (keep) parent.children[k] = std::move(n);
      });
      if (parent.children[k]) return parent.children[k].get();
    }
    auto n = make_child(parent, k, false);
    owned = std::move(n);
    return owned.get();
  }

  std::unique_ptr<Node> make_child(const Node& parent, std::size_t k, bool cached) {
    Cursor cur = parent.cursor;
    const ChoicePoint& ch = parent.choice;
    const double mult = ch.mult[k];
    if (ch.kind == ChoicePoint::Kind::Term) {
      const Site& s = c_.sites[cur.site];
      if (const auto* l = std::get_if<LinkedQpdSite>(&s)) {
        cur.chosen[l->group] = static_cast<int>(ch.option[k]);
      } else {
        cur.pending_term = static_cast<int>(ch.option[k]);
      }
    } else {
      const auto& branch = ch.instrument->branches[ch.option[k]];
      cur.rho = apply_branch(cur.rho, branch.map, local_[cur.site]) / ch.prob[k];
      ++cur.site;
      cur.pending_term = -1;
    }
    return build(std::move(cur), mult, cached);
  }

  std::unique_ptr<Node> build(Cursor cur, double gain, bool cached) {
    auto node = std::make_unique<Node>();
    node->choice = settle(cur, gain);
    node->gain = gain;
    const bool open = node->choice.kind == ChoicePoint::Kind::Term || node->choice.kind == ChoicePoint::Kind::Branch;
    if (open) {
      node->cursor = std::move(cur);
      if (cached) {
        const std::size_t n = node->choice.cumulative.size();
        node->children = std::make_unique<std::unique_ptr<Node>[]>(n);
        node->flags = std::make_unique<std::once_flag[]>(n);
        bytes_ += static_cast<std::size_t>(node->cursor.rho.size()) * sizeof(Complex) + 256;
      }
    }
    return node;
  }

  static DenseOperator apply_branch(const DenseOperator& rho, const KrausChannel& map, const LocalOps& local) {
    if (map.din() == 1) return local.reset_prepare(rho, prepared_state(map));
    return local.apply_kraus(rho, map.kraus_ops);
  }

  ChoicePoint term_choice(const std::vector<double>& coeffs, std::size_t site) {
    ChoicePoint ch;
    ch.kind = ChoicePoint::Kind::Term;
    ch.site = site;
    double norm = 0.0;
    for (double a : coeffs) norm += std::abs(a);
    if (!(norm > 0.0)) throw DegenerateQpd("site " + std::to_string(site) + " has a QPD with zero 1-norm");
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0.0) continue;
      acc += std::abs(coeffs[i]);
      ch.cumulative.push_back(acc / norm);
      ch.mult.push_back(coeffs[i] < 0 ? -norm : norm);
      ch.option.push_back(i);
    }
    ch.cumulative.back() = 1.0;
    return ch;
  }

  /// Applies the element deterministically when it has one live branch; otherwise returns the branch choice.
  std::optional<ChoicePoint> element(Cursor& cur, const WeightedInstrument& w, double& gain) {
    const LocalOps& local = local_[cur.site];
    const bool prep = w.dims_in().total() == 1;
    const DenseOperator red = prep ? DenseOperator() : local.reduced(cur.rho);
    std::vector<double> p(w.branches.size(), 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < w.branches.size(); ++b) {
      double pb = 0.0;
      for (const auto& k : w.branches[b].map.kraus_ops) {
        pb += prep ? k.squaredNorm() : (k * red * k.adjoint()).trace().real();
      }
      p[b] = std::max(0.0, pb);
      total += p[b];
    }
    if (total < 1e-14) {
      ChoicePoint dead;
      dead.kind = ChoicePoint::Kind::Dead;
      return dead;
    }
    ChoicePoint ch;
    ch.kind = ChoicePoint::Kind::Branch;
    ch.site = cur.site;
    ch.instrument = &w;
    double acc = 0.0;
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (p[b] <= 0.0) continue;
      acc += p[b];
      ch.cumulative.push_back(acc / total);
      ch.mult.push_back(w.branches[b].weight * total);
      ch.option.push_back(b);
      ch.prob.push_back(p[b]);
    }
    ch.cumulative.back() = 1.0;
    if (ch.option.size() > 1) return ch;
    cur.rho = apply_branch(cur.rho, w.branches[ch.option[0]].map, local) / ch.prob[0];
    gain *= ch.mult[0];
    ++cur.site;
    cur.pending_term = -1;
    return std::nullopt;
  }

  ChoicePoint settle(Cursor& cur, double& gain) {
    while (cur.site < c_.sites.size()) {
      const Site& s = c_.sites[cur.site];
      const LocalOps& local = local_[cur.site];
      if (const auto* p = std::get_if<PrepSite>(&s)) {
        cur.rho = local.reset_prepare(cur.rho, p->state);
      } else if (const auto* g = std::get_if<GateSite>(&s)) {
        cur.rho = local.conjugate(cur.rho, g->unitary);
      } else if (const auto* b = std::get_if<BlackBoxCutSite>(&s)) {
        cur.rho = local.conjugate(cur.rho, b->unitary);
      } else if (const auto* ch = std::get_if<ChannelSite>(&s)) {
        cur.rho = local.apply_kraus(cur.rho, ch->channel.kraus_ops);
        const double tr = cur.rho.trace().real();
        if (tr < 1e-14) return ChoicePoint{ChoicePoint::Kind::Dead};
        cur.rho /= tr;
        gain *= tr;
      } else if (const auto* q = std::get_if<QpdSite>(&s)) {
        if (cur.pending_term < 0) {
          std::vector<double> coeffs;
          for (const auto& t : q->qpd->terms) coeffs.push_back(t.coeff);
          if (coeffs.size() > 1) return term_choice(coeffs, cur.site);
          if (coeffs[0] == 0.0) throw DegenerateQpd("site " + std::to_string(cur.site) + " has a QPD with zero 1-norm");
          cur.pending_term = 0;
          gain *= coeffs[0];
        }
        if (auto pending = element(cur, q->qpd->terms[static_cast<std::size_t>(cur.pending_term)].element, gain)) return *pending;
        continue;
      } else if (const auto* l = std::get_if<LinkedQpdSite>(&s)) {
        const LinkedQpd& grp = *c_.groups[l->group];
        if (cur.chosen[l->group] < 0) {
          if (grp.coeffs.size() > 1) return term_choice(grp.coeffs, cur.site);
          cur.chosen[l->group] = 0;
          gain *= grp.coeffs[0];
        }
        const auto& w = grp.elements[static_cast<std::size_t>(cur.chosen[l->group])][l->slot];
        if (auto pending = element(cur, w, gain)) return *pending;
        continue;
      } else if (const auto* w = std::get_if<InstrumentSite>(&s)) {
        if (auto pending = element(cur, w->instrument, gain)) return *pending;
        continue;
      }
      ++cur.site;
    }
    ChoicePoint leaf;
    leaf.kind = ChoicePoint::Kind::Leaf;
    const DenseOperator red = obs_local_.reduced(cur.rho);
    leaf.analytic = (obs_.op * red).trace().real();
    if (mode_ == EstimatorMode::Sampled) {
      const DenseOperator rot = obs_vectors_.adjoint() * red * obs_vectors_;
      double acc = 0.0;
      for (Eigen::Index k = 0; k < rot.rows(); ++k) {
        acc += std::max(0.0, rot(k, k).real());
        leaf.cumulative.push_back(acc);
        leaf.eigenvalues.push_back(obs_values_(k));
      }
      for (double& x : leaf.cumulative) x /= acc;
      leaf.cumulative.back() = 1.0;
    }
    return leaf;
  }

  const Circuit& c_;
  const Observable& obs_;
  EstimatorMode mode_;
  std::size_t budget_;
  std::vector<LocalOps> local_;
  LocalOps obs_local_;
  Eigen::VectorXd obs_values_;
  DenseOperator obs_vectors_;
  std::atomic<std::size_t> bytes_{0};
  std::unique_ptr<Node> root_;
};

}  // namespace detail

/// Monte Carlo quasiprobability simulation: one sampled term per QPD, Born-sampled instrument branches,
/// and either the exact final expectation (analytic) or a Born-sampled eigenvalue of O (sampled).
inline EstimateReport qps_estimate(const Circuit& c, const Observable& obs, const EstimateOptions& opt) {
  validate_circuit(c);
  detail::check_observable(obs, c.qubits);
  if (opt.shots == 0) throw DomainError("shots must be at least 1");
  if (!(opt.delta > 0.0 && opt.delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  for (const auto& s : c.sites) {
    if (const auto* q = std::get_if<QpdSite>(&s); q && !(one_norm(*q->qpd) > 0.0)) throw DegenerateQpd("QPD with zero 1-norm");
  }
  detail::ShotTree tree(c, obs, opt.mode, opt.cache_bytes);
  std::vector<double> values(opt.shots);
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, opt.shots);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      constexpr std::size_t kChunk = 256;
      for (std::size_t begin = next.fetch_add(kChunk); begin < opt.shots; begin = next.fetch_add(kChunk)) {
        const std::size_t end = std::min(opt.shots, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) values[i] = tree.shot(opt.seed, i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  EstimateReport r;
  const auto n = static_cast<double>(opt.shots);
  r.mean = pairwise_sum(values.data(), values.size()) / n;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - r.mean) * (values[i] - r.mean);
  const double var = opt.shots > 1 ? pairwise_sum(dev.data(), dev.size()) / (n - 1.0) : 0.0;
  r.std_error = std::sqrt(var / n);
  r.shots = opt.shots;
  r.one_norm = one_norm(c);
  r.delta = opt.delta;
  r.hoeffding_eps_at_delta = r.one_norm * std::sqrt(2.0 * std::log(2.0 / opt.delta) / n);
  r.seed = opt.seed;
  r.mode = opt.mode;
  if (opt.keep_values) r.values = std::move(values);
  return r;
}

}  // namespace qknit

#endif  // QKNIT_ENGINE_HPP
