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

#ifndef QKNIT_QPD_JSON_HPP
#define QKNIT_QPD_JSON_HPP

#include <string>

#include "json.hpp"
#include "qknit/qpd.hpp"

namespace qknit {

using Json = nlohmann::json;

inline Json operator_to_json(const DenseOperator& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseOperator operator_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  DenseOperator m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix row");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ParseError("matrix entry must be a number or [re, im]");
      }
    }
  }
  return m;
}

inline Json instrument_to_json(const WeightedInstrument& w) {
  Json branches = Json::array();
  for (const auto& b : w.branches) {
    Json kraus = Json::array();
    for (const auto& k : b.map.kraus_ops) kraus.push_back(operator_to_json(k));
    branches.push_back({{"kraus", std::move(kraus)}, {"weight", b.weight}});
  }
  return branches;
}

inline WeightedInstrument instrument_from_json(const Json& branches, const SubsystemDims& in, const SubsystemDims& out) {
  if (!branches.is_array() || branches.empty()) throw ParseError("branches must be a nonempty array");
  std::vector<WeightedInstrument::Branch> bs;
  for (const auto& b : branches) {
    if (!b.contains("kraus") || !b.contains("weight")) throw ParseError("branch needs kraus and weight");
    std::vector<DenseOperator> ops;
    for (const auto& k : b.at("kraus")) ops.push_back(operator_from_json(k));
    try {
      bs.push_back({KrausChannel(std::move(ops), in, out), b.at("weight").get<double>()});
    } catch (const DimMismatch& e) {
      throw ParseError(std::string("branch: ") + e.what());
    }
  }
  return WeightedInstrument(std::move(bs));
}

inline Json to_json(const QuasiDecomposition& q) {
  Json terms = Json::array();
  for (const auto& t : q.terms) terms.push_back({{"coeff", t.coeff}, {"branches", instrument_to_json(t.element)}});
  Json j{{"target_label", q.target_label}, {"terms", std::move(terms)}};
  j["claimed_gamma"] = q.claimed_gamma ? Json(*q.claimed_gamma) : Json(nullptr);
  if (!q.terms.empty()) {
    j["dims_in"] = q.dims_in().dims;
    j["dims_out"] = q.dims_out().dims;
  }
  return j;
}

inline QuasiDecomposition qpd_from_json(const Json& j) {
  try {
    QuasiDecomposition q;
    q.target_label = j.value("target_label", std::string());
    if (j.contains("claimed_gamma") && !j.at("claimed_gamma").is_null()) q.claimed_gamma = j.at("claimed_gamma").get<double>();
    const Json& terms = j.at("terms");
    if (!terms.is_array()) throw ParseError("terms must be an array");
    for (const auto& t : terms) {
      const Json& branches = t.at("branches");
      SubsystemDims in, out;
      if (j.contains("dims_in")) {
        in = SubsystemDims(j.at("dims_in").get<std::vector<std::size_t>>());
        out = SubsystemDims(j.at("dims_out").get<std::vector<std::size_t>>());
      } else {
        const DenseOperator k0 = operator_from_json(branches.at(0).at("kraus").at(0));
        in = dims_for(static_cast<std::size_t>(k0.cols()));
        out = dims_for(static_cast<std::size_t>(k0.rows()));
      }
      q.terms.push_back({t.at("coeff").get<double>(), instrument_from_json(branches, in, out)});
    }
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("QPD JSON: ") + e.what());
  } catch (const DimMismatch& e) {
    throw ParseError(std::string("QPD JSON: ") + e.what());
  }
}

}  // namespace qknit

#endif  // QKNIT_QPD_JSON_HPP
