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

#ifndef QKNIT_CIRCUIT_JSON_HPP
#define QKNIT_CIRCUIT_JSON_HPP

#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "qknit/catalog.hpp"
#include "qknit/circuit.hpp"
#include "qknit/qpd_json.hpp"

namespace qknit {

namespace detail {

inline double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

inline std::size_t count_or(const Json& j, const char* key, std::size_t fallback) {
  return j.contains(key) ? j.at(key).get<std::size_t>() : fallback;
}

inline StateVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("state must be a nonempty array of amplitudes");
  StateVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& a = j[i];
    if (a.is_number()) {
      v(static_cast<Eigen::Index>(i)) = a.get<double>();
    } else if (a.is_array() && a.size() == 2) {
      v(static_cast<Eigen::Index>(i)) = Complex(a[0].get<double>(), a[1].get<double>());
    } else {
      throw ParseError("amplitude must be a number or [re, im]");
    }
  }
  return v;
}

}  // namespace detail

/// Gate from a table name; parametrized gates are written "CR(theta)" with theta in radians.
inline DenseOperator gate_from_name(const std::string& text) {
  static const std::regex kParam(R"(^\s*([A-Za-z]+)\s*\(\s*([-+0-9.eE]+)\s*\)\s*$)");
  std::smatch m;
  std::optional<DenseOperator> u;
  if (std::regex_match(text, m, kParam)) {
    double theta = 0.0;
    try {
      std::size_t used = 0;
      theta = std::stod(m[2].str(), &used);
      if (used != m[2].str().size()) throw ParseError("bad angle in gate '" + text + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad angle in gate '" + text + "'");
    }
    const std::string name = m[1].str();
    if (name == "CR" || name == "RZZ" || name == "RXX" || name == "RYY") u = gates::by_name(name, theta);
  } else {
    u = gates::by_name(text);
  }
  if (!u) throw ParseError("unknown gate '" + text + "'");
  return *u;
}

/// Catalog QPD selected by {"catalog": kind, ...parameters}.
inline QuasiDecomposition catalog_qpd(const Json& params) {
  const std::string kind = params.at("catalog").get<std::string>();
  if (kind == "t_gate") return t_gate_qpd();
  if (kind == "magic_state") return magic_state_qpd();
  if (kind == "unot") return unot_qpd();
  if (kind == "wirecut_mpc") return wirecut_mpc_qpd(detail::count_or(params, "n", 1));
  if (kind == "wirecut_ebc") return wirecut_ebc_qpd(detail::count_or(params, "d", 2));
  if (kind == "transpose") return transpose_qpd(detail::count_or(params, "d", 2));
  if (kind == "depolarizing_inverse") return pec_basis_and_inverse(detail::number_or(params, "p", 0.0)).inverse;
  if (kind == "pure_state") return pure_state_sep_qpd(params.at("schmidt").get<std::vector<double>>());
  if (kind == "cr") return two_qubit_gate_qpd(gates::CR(params.at("theta").get<double>()));
  if (kind == "gate") return two_qubit_gate_qpd(gate_from_name(params.at("gate").get<std::string>()));
  throw ParseError("unknown catalog kind '" + kind + "'");
}

namespace detail {

inline void add_site(Circuit& c, const Json& site) {
  const std::string kind = site.at("kind").get<std::string>();
  const Targets targets = site.at("targets").get<Targets>();
  const Json payload = site.contains("payload") ? site.at("payload") : Json();
  if (kind == "prep") {
    if (payload.is_string()) {
      const auto psi = states::by_name(payload.get<std::string>());
      if (!psi) throw ParseError("unknown state '" + payload.get<std::string>() + "'");
      c.prep(*psi, targets);
    } else if (payload.is_object() && payload.contains("density")) {
      c.prep_density(operator_from_json(payload.at("density")), targets);
    } else {
      c.prep(vector_from_json(payload), targets);
    }
  } else if (kind == "gate") {
    if (payload.is_string()) {
      c.gate(gate_from_name(payload.get<std::string>()), targets, payload.get<std::string>());
    } else {
      c.gate(operator_from_json(payload.at("matrix")), targets, payload.value("name", std::string("U")));
    }
  } else if (kind == "channel") {
    if (payload.contains("depolarizing")) {
      c.channel(depolarizing(payload.at("depolarizing").get<double>(), targets.size()), targets);
    } else {
      std::vector<DenseOperator> ops;
      for (const auto& k : payload.at("kraus")) ops.push_back(operator_from_json(k));
      const auto din = static_cast<std::size_t>(ops.at(0).cols()), dout = static_cast<std::size_t>(ops.at(0).rows());
      c.channel(KrausChannel(std::move(ops), dims_for(din), dims_for(dout)), targets);
    }
  } else if (kind == "qpd") {
    const QuasiDecomposition q = payload.contains("catalog") ? catalog_qpd(payload) : qpd_from_json(payload);
    std::optional<KrausChannel> ideal;
    if (payload.contains("ideal")) ideal = KrausChannel::unitary(gate_from_name(payload.at("ideal").get<std::string>()));
    c.qpd(q, targets, ideal);
  } else if (kind == "instrument") {
    const Json& branches = payload.at("branches");
    const DenseOperator k0 = operator_from_json(branches.at(0).at("kraus").at(0));
    c.instrument(instrument_from_json(branches, dims_for(static_cast<std::size_t>(k0.cols())),
                                      dims_for(static_cast<std::size_t>(k0.rows()))),
                 targets);
  } else if (kind == "blackbox_cut") {
    const std::string gate = payload.is_string() ? payload.get<std::string>() : payload.value("gate", std::string("CNOT"));
    const std::string mode = payload.is_object() ? payload.value("kind", std::string("cnot")) : std::string("cnot");
    const std::size_t k = payload.is_object() ? count_or(payload, "factory_size", 1) : 1;
    c.blackbox_cut(gate_from_name(gate), targets, mode, k);
  } else {
    throw ParseError("unknown site kind '" + kind + "'");
  }
}

}  // namespace detail

/// Parses and validates a circuit document; errors name the offending site index.
inline Circuit circuit_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("qubits") || !j.contains("sites")) {
    throw ParseError("circuit JSON needs \"qubits\" and \"sites\"");
  }
  Circuit c;
  try {
    c = Circuit(j.at("qubits").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("qubits: ") + e.what());
  }
  const Json& sites = j.at("sites");
  if (!sites.is_array()) throw ParseError("sites must be an array");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string where = "site " + std::to_string(i) + ": ";
    try {
      detail::add_site(c, sites[i]);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const DimMismatch& e) {
      throw ParseError(where + e.what());
    }
  }
  try {
    validate_circuit(c);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return c;
}

}  // namespace qknit

#endif  // QKNIT_CIRCUIT_JSON_HPP
