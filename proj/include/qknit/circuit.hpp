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

#ifndef QKNIT_CIRCUIT_HPP
#define QKNIT_CIRCUIT_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qknit/qpd.hpp"

namespace qknit {

inline constexpr std::size_t kMaxEngineQubits = 10;

using Targets = std::vector<std::size_t>;

/// Resets the targets, then prepares `state` (a density matrix) on them.
struct PrepSite {
  DenseOperator state;
  Targets targets;
};

struct GateSite {
  DenseOperator unitary;
  Targets targets;
  std::string name;
};

struct ChannelSite {
  KrausChannel channel;
  Targets targets;
};

/// Sampled QPD; `ideal` replaces the reconstruction in the uncut oracle when present.
struct QpdSite {
  std::shared_ptr<const QuasiDecomposition> qpd;
  Targets targets;
  std::optional<KrausChannel> ideal;
};

struct InstrumentSite {
  WeightedInstrument instrument;
  Targets targets;
};

/// Cut marker; runs as the ideal gate until a cutting pass rewrites it.
struct BlackBoxCutSite {
  DenseOperator unitary;
  Targets targets;
  std::string kind;  // "cnot" or "twoqubit"
  std::size_t factory_size = 1;
};

/// One slot of a QPD whose sampled term selects the elements of several sites.
struct LinkedQpdSite {
  std::size_t group = 0;
  std::size_t slot = 0;
  Targets targets;
};

struct LinkedQpd {
  std::vector<double> coeffs;
  std::vector<std::vector<WeightedInstrument>> elements;  // [term][slot]
  std::string label;

  std::size_t slot_count() const { return elements.empty() ? 0 : elements[0].size(); }
  double one_norm() const {
    double s = 0.0;
    for (double c : coeffs) s += std::abs(c);
    return s;
  }
};

using Site = std::variant<PrepSite, GateSite, ChannelSite, QpdSite, InstrumentSite, BlackBoxCutSite, LinkedQpdSite>;

inline const Targets& targets_of(const Site& s) {
  return std::visit([](const auto& x) -> const Targets& { return x.targets; }, s);
}

struct Circuit {
  std::size_t qubits = 0;
  std::vector<Site> sites;
  std::vector<std::shared_ptr<const LinkedQpd>> groups;

  Circuit() = default;
  explicit Circuit(std::size_t n) : qubits(n) {}

  Circuit& prep(const StateVector& psi, Targets t) {
    sites.emplace_back(PrepSite{projector(psi), std::move(t)});
    return *this;
  }
  Circuit& prep_density(const DenseOperator& rho, Targets t) {
    sites.emplace_back(PrepSite{rho, std::move(t)});
    return *this;
  }
  Circuit& gate(const DenseOperator& u, Targets t, std::string name = "U") {
    sites.emplace_back(GateSite{u, std::move(t), std::move(name)});
    return *this;
  }
  Circuit& channel(const KrausChannel& c, Targets t) {
    sites.emplace_back(ChannelSite{c, std::move(t)});
    return *this;
  }
  Circuit& qpd(const QuasiDecomposition& q, Targets t, std::optional<KrausChannel> ideal = std::nullopt) {
    sites.emplace_back(QpdSite{std::make_shared<const QuasiDecomposition>(q), std::move(t), std::move(ideal)});
    return *this;
  }
  Circuit& instrument(const WeightedInstrument& w, Targets t) {
    sites.emplace_back(InstrumentSite{w, std::move(t)});
    return *this;
  }
  Circuit& blackbox_cut(const DenseOperator& u, Targets t, std::string kind, std::size_t factory_size = 1) {
    sites.emplace_back(BlackBoxCutSite{u, std::move(t), std::move(kind), factory_size});
    return *this;
  }
};

/// Total 1-norm: product over QPD sites and linked groups.
inline double one_norm(const Circuit& c) {
  double g = 1.0;
  for (const auto& s : c.sites) {
    if (const auto* q = std::get_if<QpdSite>(&s)) g *= one_norm(*q->qpd);
  }
  for (const auto& grp : c.groups) g *= grp->one_norm();
  return g;
}

namespace detail {

inline void require_map_shape(const SubsystemDims& in, const SubsystemDims& out, std::size_t dt, std::size_t site,
                              bool allow_prep) {
  const bool square = in.total() == dt && out.total() == dt;
  const bool prep = allow_prep && in.total() == 1 && out.total() == dt;
  if (!square && !prep) throw DimMismatch("site " + std::to_string(site) + ": map dims do not match target arity");
}

}  // namespace detail

/// Structural checks: target ranges, distinct targets, payload dims, qubit cap.
inline void validate_circuit(const Circuit& c) {
  if (c.qubits == 0) throw DomainError("circuit needs at least one qubit");
  if (c.qubits > kMaxEngineQubits) {
    throw SizeCap("circuit has " + std::to_string(c.qubits) + " qubits; the engine cap is " + std::to_string(kMaxEngineQubits));
  }
  std::vector<std::size_t> slot_seen(c.groups.size(), 0);
  for (std::size_t i = 0; i < c.sites.size(); ++i) {
    const Targets& t = targets_of(c.sites[i]);
    if (t.empty()) throw DomainError("site " + std::to_string(i) + " has no targets");
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] >= c.qubits) throw DomainError("site " + std::to_string(i) + " targets a qubit out of range");
      for (std::size_t l = 0; l < k; ++l) {
        if (t[l] == t[k]) throw DomainError("site " + std::to_string(i) + " repeats a target");
      }
    }
    const std::size_t dt = std::size_t{1} << t.size();
    auto square = [&](const DenseOperator& m) {
      if (static_cast<std::size_t>(m.rows()) != dt || m.rows() != m.cols()) {
        throw DimMismatch("site " + std::to_string(i) + ": operator size does not match target arity");
      }
    };
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PrepSite>) {
            square(s.state);
          } else if constexpr (std::is_same_v<T, GateSite> || std::is_same_v<T, BlackBoxCutSite>) {
            square(s.unitary);
          } else if constexpr (std::is_same_v<T, ChannelSite>) {
            detail::require_map_shape(s.channel.dims_in, s.channel.dims_out, dt, i, false);
          } else if constexpr (std::is_same_v<T, QpdSite>) {
            if (!s.qpd || s.qpd->terms.empty()) throw DegenerateQpd("site " + std::to_string(i) + " has an empty QPD");
            for (const auto& term : s.qpd->terms) {
              detail::require_map_shape(term.element.dims_in(), term.element.dims_out(), dt, i, true);
            }
          } else if constexpr (std::is_same_v<T, InstrumentSite>) {
            detail::require_map_shape(s.instrument.dims_in(), s.instrument.dims_out(), dt, i, true);
          } else {
            if (s.group >= c.groups.size()) throw DomainError("site " + std::to_string(i) + " names a missing linked group");
            const LinkedQpd& g = *c.groups[s.group];
            if (s.slot >= g.slot_count()) throw DomainError("site " + std::to_string(i) + " names a missing slot");
            for (const auto& row : g.elements) {
              detail::require_map_shape(row[s.slot].dims_in(), row[s.slot].dims_out(), dt, i, true);
            }
            ++slot_seen[s.group];
          }
        },
        c.sites[i]);
  }
  for (std::size_t g = 0; g < c.groups.size(); ++g) {
    if (c.groups[g]->coeffs.size() != c.groups[g]->elements.size() || c.groups[g]->coeffs.empty()) {
      throw DomainError("linked group " + std::to_string(g) + " is malformed");
    }
    if (slot_seen[g] != c.groups[g]->slot_count()) {
      throw DomainError("linked group " + std::to_string(g) + " must place every slot exactly once");
    }
  }
}

/// Density-matrix kernels acting on a subset of qubits; qubit 0 is the most significant bit.
class LocalOps {
 public:
  LocalOps(std::size_t n, const Targets& targets) : dim_(Eigen::Index{1} << n) {
    const std::size_t t = targets.size();
    offsets_.assign(std::size_t{1} << t, 0);
    Eigen::Index mask = 0;
    for (std::size_t k = 0; k < t; ++k) mask |= Eigen::Index{1} << (n - 1 - targets[k]);
    for (std::size_t x = 0; x < offsets_.size(); ++x) {
      Eigen::Index off = 0;
      for (std::size_t k = 0; k < t; ++k) {
        if ((x >> (t - 1 - k)) & 1U) off |= Eigen::Index{1} << (n - 1 - targets[k]);
      }
      offsets_[x] = off;
    }
    for (Eigen::Index b = 0; b < dim_; ++b) {
      if ((b & mask) == 0) bases_.push_back(b);
    }
  }

  Eigen::Index local_dim() const { return static_cast<Eigen::Index>(offsets_.size()); }

  /// rho -> K rho K^dagger.
  DenseOperator conjugate(const DenseOperator& rho, const DenseOperator& k) const {
    return right_adjoint(left(rho, k), k);
  }

  /// rho -> sum_j w_j K_j rho K_j^dagger.
  DenseOperator apply_kraus(const DenseOperator& rho, const std::vector<DenseOperator>& ops,
                            const std::vector<double>* weights = nullptr) const {
    DenseOperator out = DenseOperator::Zero(dim_, dim_);
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const double w = weights ? (*weights)[j] : 1.0;
      if (w == 0.0) continue;
      out += w * conjugate(rho, ops[j]);
    }
    return out;
  }

  /// Reduced density matrix on the targets.
  DenseOperator reduced(const DenseOperator& rho) const {
    const Eigen::Index dt = local_dim();
    DenseOperator r = DenseOperator::Zero(dt, dt);
    for (Eigen::Index b : bases_) {
      for (Eigen::Index y = 0; y < dt; ++y) {
        for (Eigen::Index x = 0; x < dt; ++x) r(x, y) += rho(b + offsets_[static_cast<std::size_t>(x)], b + offsets_[static_cast<std::size_t>(y)]);
      }
    }
    return r;
  }

  /// tr_T(rho) (x) sigma, with sigma placed on the targets.
  DenseOperator reset_prepare(const DenseOperator& rho, const DenseOperator& sigma) const {
    const auto nb = static_cast<Eigen::Index>(bases_.size());
    const Eigen::Index dt = local_dim();
    DenseOperator rest = DenseOperator::Zero(nb, nb);
    for (Eigen::Index c = 0; c < nb; ++c) {
      for (Eigen::Index r = 0; r < nb; ++r) {
        Complex s = 0.0;
        for (Eigen::Index x = 0; x < dt; ++x) {
          const Eigen::Index o = offsets_[static_cast<std::size_t>(x)];
          s += rho(bases_[static_cast<std::size_t>(r)] + o, bases_[static_cast<std::size_t>(c)] + o);
        }
        rest(r, c) = s;
      }
    }
    DenseOperator out(dim_, dim_);
    for (Eigen::Index c = 0; c < nb; ++c) {
      for (Eigen::Index y = 0; y < dt; ++y) {
        const Eigen::Index col = bases_[static_cast<std::size_t>(c)] + offsets_[static_cast<std::size_t>(y)];
        for (Eigen::Index r = 0; r < nb; ++r) {
          const Complex rv = rest(r, c);
          for (Eigen::Index x = 0; x < dt; ++x) {
            out(bases_[static_cast<std::size_t>(r)] + offsets_[static_cast<std::size_t>(x)], col) = rv * sigma(x, y);
          }
        }
      }
    }
    return out;
  }

 private:
  // Columns are contiguous, so gather every (base, column) slice into one wide block and apply K with a single product.
  DenseOperator left(const DenseOperator& rho, const DenseOperator& k) const {
    const Eigen::Index dt = local_dim();
    const auto nb = static_cast<Eigen::Index>(bases_.size());
    DenseOperator block(dt, nb * dim_);
    for (Eigen::Index c = 0; c < dim_; ++c) {
      const Complex* col = rho.col(c).data();
      for (Eigen::Index j = 0; j < nb; ++j) {
        Complex* dst = block.col(c * nb + j).data();
        const Eigen::Index b = bases_[static_cast<std::size_t>(j)];
        for (Eigen::Index x = 0; x < dt; ++x) dst[x] = col[b + offsets_[static_cast<std::size_t>(x)]];
      }
    }
    const DenseOperator moved = k * block;
    DenseOperator out(dim_, dim_);
    for (Eigen::Index c = 0; c < dim_; ++c) {
      Complex* col = out.col(c).data();
      for (Eigen::Index j = 0; j < nb; ++j) {
        const Complex* src = moved.col(c * nb + j).data();
        const Eigen::Index b = bases_[static_cast<std::size_t>(j)];
        for (Eigen::Index x = 0; x < dt; ++x) col[b + offsets_[static_cast<std::size_t>(x)]] = src[x];
      }
    }
    return out;
  }

  DenseOperator right_adjoint(const DenseOperator& m, const DenseOperator& k) const {
    const Eigen::Index dt = local_dim();
    DenseOperator out(dim_, dim_);
    DenseOperator block(dim_, dt);
    const DenseOperator kd = k.adjoint();
    for (Eigen::Index b : bases_) {
      for (Eigen::Index x = 0; x < dt; ++x) block.col(x) = m.col(b + offsets_[static_cast<std::size_t>(x)]);
      const DenseOperator moved = block * kd;
      for (Eigen::Index x = 0; x < dt; ++x) out.col(b + offsets_[static_cast<std::size_t>(x)]) = moved.col(x);
    }
    return out;
  }

  Eigen::Index dim_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::Index> bases_;
};

}  // namespace qknit

#endif  // QKNIT_CIRCUIT_HPP
