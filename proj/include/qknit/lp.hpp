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

#ifndef QKNIT_LP_HPP
#define QKNIT_LP_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qknit/errors.hpp"

namespace qknit::lp {

enum class Status { Optimal, Infeasible };

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

struct Options {
  double feasibility = 1e-9;
  double optimality = 1e-8;
  std::size_t max_iterations = 200000;
};

namespace detail {

/// Indices of a maximal linearly independent subset of the rows of a.
inline std::vector<Eigen::Index> independent_rows(const Eigen::MatrixXd& a, double tolerance) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(tolerance);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index k = 0; k < qr.rank(); ++k) rows.push_back(qr.colsPermutation().indices()(k));
  return rows;
}

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Options& opt)
      : m_(a.rows()), n_(a.cols()), opt_(opt), t_(Eigen::MatrixXd::Zero(a.rows() + 1, a.cols() + a.rows() + 1)),
        basis_(static_cast<std::size_t>(a.rows())) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double s = b(i) < 0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = s * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = s * b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  /// Phase 1 minimizes the artificial sum; returns its optimum.
  double phase_one() {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.tail(m_).setOnes();
    load_cost(cost);
    run(n_ + m_);
    return -t_(m_, rhs());
  }

  /// Phase 2 over the original columns; artificials never re-enter.
  void phase_two(const Eigen::VectorXd& c) {
    drive_out_artificials();
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_ + m_);
    cost.head(n_) = c;
    load_cost(cost);
    run(n_);
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) x(j) = std::max(0.0, t_(i, rhs()));
    }
    return x;
  }

 private:
  Eigen::Index rhs() const { return n_ + m_; }

  void load_cost(const Eigen::VectorXd& cost) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_ + m_) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Bland's rule: lowest-index improving column, lowest-index basic variable among ratio ties.
  void run(Eigen::Index allowed) {
    for (std::size_t it = 0; it < opt_.max_iterations; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(m_, j) < -opt_.optimality) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double p = t_(i, enter);
        if (p <= opt_.feasibility) continue;
        const double ratio = t_(i, rhs()) / p;
        if (leave < 0 || ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw SolverStall("linear program is unbounded");
      pivot(leave, enter);
    }
    throw SolverStall("simplex did not converge within the iteration budget");
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > opt_.feasibility && (best < 0 || std::abs(t_(i, j)) > std::abs(t_(i, best)))) best = j;
      }
      if (best >= 0) pivot(i, best);
    }
  }

  Eigen::Index m_, n_;
  Options opt_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// min c.x subject to a x = b, x >= 0, by the two-phase tableau simplex.
inline Solution minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                         const Options& opt = {}) {
  Solution out;
  out.x = Eigen::VectorXd::Zero(a.cols());
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  const auto rows = detail::independent_rows(a, 1e-11);
  Eigen::MatrixXd ar(static_cast<Eigen::Index>(rows.size()), a.cols());
  Eigen::VectorXd br(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ar.row(static_cast<Eigen::Index>(k)) = a.row(rows[k]);
    br(static_cast<Eigen::Index>(k)) = b(rows[k]);
  }
  detail::Tableau t(ar, br, opt);
  if (t.phase_one() > opt.feasibility * scale * static_cast<double>(std::max<Eigen::Index>(1, ar.rows()))) return out;
  t.phase_two(c);
  out.x = t.primal();
  if ((a * out.x - b).cwiseAbs().maxCoeff() > 1e-7 * scale) return out;
  out.status = Status::Optimal;
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace qknit::lp

#endif  // QKNIT_LP_HPP
