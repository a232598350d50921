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

#ifndef QKNIT_QPD_HPP
#define QKNIT_QPD_HPP

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qknit/channels.hpp"

namespace qknit {

inline constexpr double kDropCoefficient = 1e-14;
inline constexpr std::size_t kMaxTerms = 1000000;

/// Target map written as sum_i a_i F_i with each F_i a weighted instrument.
struct QuasiDecomposition {
  struct Term {
    double coeff = 0.0;
    WeightedInstrument element;
  };
  std::vector<Term> terms;
  std::optional<double> claimed_gamma;  // metadata only
  std::string target_label;

  const SubsystemDims& dims_in() const { return terms.at(0).element.dims_in(); }
  const SubsystemDims& dims_out() const { return terms.at(0).element.dims_out(); }
};

inline double one_norm(const QuasiDecomposition& q) {
  double s = 0.0;
  for (const auto& t : q.terms) s += std::abs(t.coeff);
  return s;
}

inline WeightedInstrument tensor(const WeightedInstrument& a, const WeightedInstrument& b) {
  std::vector<WeightedInstrument::Branch> out;
  out.reserve(a.branches.size() * b.branches.size());
  for (const auto& x : a.branches) {
    for (const auto& y : b.branches) out.push_back({tensor(x.map, y.map), x.weight * y.weight});
  }
  return WeightedInstrument(std::move(out));
}

/// later o P o earlier, where P routes earlier's outputs onto later's inputs.
inline WeightedInstrument compose(const WeightedInstrument& later, const WeightedInstrument& earlier,
                                  const DenseOperator& routing) {
  std::vector<WeightedInstrument::Branch> out;
  out.reserve(later.branches.size() * earlier.branches.size());
  for (const auto& x : later.branches) {
    for (const auto& y : earlier.branches) {
      std::vector<DenseOperator> ops;
      for (const auto& kx : x.map.kraus_ops) {
        for (const auto& ky : y.map.kraus_ops) ops.push_back(kx * routing * ky);
      }
      out.push_back({KrausChannel(std::move(ops), y.map.dims_in, x.map.dims_out), x.weight * y.weight});
    }
  }
  return WeightedInstrument(std::move(out));
}

namespace detail {

inline void check_term_count(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) throw SizeCap("QPD combination exceeds " + std::to_string(cap) + " terms");
}

}  // namespace detail

/// Pairwise products of terms; 1-norms multiply.
inline QuasiDecomposition tensor(const QuasiDecomposition& q1, const QuasiDecomposition& q2,
                                 std::size_t max_terms = kMaxTerms) {
  detail::check_term_count(q1.terms.size(), q2.terms.size(), max_terms);
  QuasiDecomposition out;
  out.target_label = q1.target_label + " (x) " + q2.target_label;
  if (q1.claimed_gamma && q2.claimed_gamma) out.claimed_gamma = *q1.claimed_gamma * *q2.claimed_gamma;
  for (const auto& a : q1.terms) {
    for (const auto& b : q2.terms) {
      const double c = a.coeff * b.coeff;
      if (std::abs(c) < kDropCoefficient) continue;
      out.terms.push_back({c, tensor(a.element, b.element)});
    }
  }
  return out;
}

/// Branch-wise composition. `wiring[k]` names the output factor of `q_earlier` that feeds input
/// factor k of `q_later`; an empty wiring is the identity.
inline QuasiDecomposition compose(const QuasiDecomposition& q_later, const QuasiDecomposition& q_earlier,
                                  const std::vector<std::size_t>& wiring = {}, std::size_t max_terms = kMaxTerms) {
  const SubsystemDims& mid = q_earlier.dims_out();
  DenseOperator routing = identity(mid.total());
  SubsystemDims routed = mid;
  if (!wiring.empty()) {
    const auto map = permutation_map(mid, wiring);
    routing = DenseOperator::Zero(static_cast<Eigen::Index>(mid.total()), static_cast<Eigen::Index>(mid.total()));
    for (std::size_t x = 0; x < map.size(); ++x) routing(static_cast<Eigen::Index>(map[x]), static_cast<Eigen::Index>(x)) = 1.0;
    std::vector<std::size_t> d(wiring.size());
    for (std::size_t k = 0; k < wiring.size(); ++k) d[k] = mid.dims[wiring[k]];
    routed = SubsystemDims(d);
  }
  if (!(routed == q_later.dims_in())) throw DimMismatch("compose: wired output dims do not match later input dims");
  detail::check_term_count(q_later.terms.size(), q_earlier.terms.size(), max_terms);
  QuasiDecomposition out;
  out.target_label = q_later.target_label + " o " + q_earlier.target_label;
  if (q_later.claimed_gamma && q_earlier.claimed_gamma) out.claimed_gamma = *q_later.claimed_gamma * *q_earlier.claimed_gamma;
  for (const auto& a : q_later.terms) {
    for (const auto& b : q_earlier.terms) {
      const double c = a.coeff * b.coeff;
      if (std::abs(c) < kDropCoefficient) continue;
      out.terms.push_back({c, compose(a.element, b.element, routing)});
    }
  }
  return out;
}

/// Choi of sum_i a_i sum_j beta_ij E_ij.
inline ChoiOperator reconstruct(const QuasiDecomposition& q) {
  const auto d = static_cast<Eigen::Index>(q.dims_in().total() * q.dims_out().total());
  ChoiOperator out{DenseOperator::Zero(d, d), q.dims_in(), q.dims_out()};
  for (const auto& t : q.terms) out.matrix += t.coeff * reconstruct_superop(t.element).matrix;
  return out;
}

struct ValidationReport {
  double residual = 0.0;
  double one_norm = 0.0;
  double signed_sum = 0.0;
};

inline ValidationReport validate(const QuasiDecomposition& q, const ChoiOperator& target) {
  ValidationReport r;
  const ChoiOperator rec = reconstruct(q);
  if (rec.matrix.rows() != target.matrix.rows()) throw DimMismatch("validate: target dims differ from QPD dims");
  r.residual = trace_norm(rec.matrix - target.matrix);
  r.one_norm = one_norm(q);
  for (const auto& t : q.terms) r.signed_sum += t.coeff * reconstruct_superop(t.element).matrix.trace().real();
  return r;
}

struct SampledTerm {
  std::size_t index = 0;
  int sign = 1;
  double one_norm = 0.0;
};

/// Term i with probability |a_i|/||a||_1 for a uniform draw u in [0, 1).
inline SampledTerm sample_term_at(const QuasiDecomposition& q, double u) {
  const double norm = one_norm(q);
  if (!(norm > 0.0)) throw DegenerateQpd("cannot sample a QPD with zero 1-norm");
  const double target = u * norm;
  double acc = 0.0;
  std::size_t pick = q.terms.size();
  for (std::size_t i = 0; i < q.terms.size(); ++i) {
    if (q.terms[i].coeff == 0.0) continue;
    acc += std::abs(q.terms[i].coeff);
    pick = i;
    if (target < acc) break;
  }
  return SampledTerm{pick, q.terms[pick].coeff < 0.0 ? -1 : 1, norm};
}

template <typename Rng>
SampledTerm sample_term(const QuasiDecomposition& q, Rng& rng) {
  return sample_term_at(q, std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

}  // namespace qknit

#endif  // QKNIT_QPD_HPP
