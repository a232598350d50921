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

// qknit command-line driver. Exit codes: 0 ok, 1 domain error, 2 usage or parse error, 3 resource cap.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "CLI11.hpp"
#include "qknit/catalog.hpp"
#include "qknit/circuit_json.hpp"
#include "qknit/cutting.hpp"
#include "qknit/engine.hpp"
#include "qknit/extent.hpp"

namespace {

using qknit::Json;

constexpr std::uint64_t kDefaultSeed = 20260101;

struct Output {
  std::string format = "json";
  std::string path;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string csv_number(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << x;
  return s.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw UsageError("cannot write " + out.path);
  f << text;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string q = "\"";
  for (char ch : f) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

/// Rows of a table; the first row is the header.
std::string render_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string s;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_field(r[i]);
    s += "\n";
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw qknit::ParseError(path + ": " + e.what());
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream s(text);
  s.imbue(std::locale::classic());
  std::string item;
  while (std::getline(s, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad number '" + item + "'");
    }
  }
  if (v.empty()) throw UsageError("empty number list");
  return v;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QKNIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw UsageError("QKNIT_SEED is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

qknit::ChoiOperator unitary_choi(const qknit::DenseOperator& u) { return qknit::choi_of(qknit::KrausChannel::unitary(u)); }

qknit::ChoiOperator pauli_channel_choi(const std::vector<double>& r) {
  const std::size_t n = r.size() == 4 ? 1 : 2;
  qknit::ChoiOperator c = unitary_choi(qknit::pauli_string(0, n));
  c.matrix *= r[0];
  for (std::size_t i = 1; i < r.size(); ++i) c.matrix += r[i] * unitary_choi(qknit::pauli_string(i, n)).matrix;
  return c;
}

// ---------------------------------------------------------------- extent

struct ExtentArgs {
  std::string target;
  std::string set;
  bool coefficients = false;
};

qknit::DenseOperator named_state_density(const std::string& name) {
  std::string key = name;
  if (key.ends_with("_state")) key.resize(key.size() - 6);
  const auto psi = qknit::states::by_name(key);
  if (!psi) throw UsageError("unknown state target '" + name + "'");
  return qknit::projector(*psi);
}

qknit::ChoiOperator channel_target(const std::string& target) {
  if (target.ends_with(".json")) {
    const Json j = read_json_file(target);
    try {
      return qknit::ChoiOperator{qknit::operator_from_json(j.at("choi")),
                                 qknit::SubsystemDims(j.at("dims_in").get<std::vector<std::size_t>>()),
                                 qknit::SubsystemDims(j.at("dims_out").get<std::vector<std::size_t>>())};
    } catch (const Json::exception& e) {
      throw qknit::ParseError(target + ": " + e.what());
    }
  }
  try {
    return unitary_choi(qknit::gate_from_name(target));
  } catch (const qknit::ParseError&) {
    throw UsageError("unknown target '" + target + "'");
  }
}

qknit::DecompositionSet custom_set(const std::string& path) {
  const qknit::QuasiDecomposition q = qknit::qpd_from_json(read_json_file(path));
  qknit::DecompositionSet s;
  s.label = path;
  for (const auto& t : q.terms) s.elements.push_back(t.element);
  return s;
}

int cmd_extent(const ExtentArgs& a, const Output& out) {
  qknit::LPResult r;
  if (a.set == "pauli") {
    // target is a PTM diagonal such as "1,0.9,0.9,0.9"
    const auto d = qknit::pauli_diagonal_decomposition(parse_list(a.target));
    r.gamma = d.gamma;
    r.coefficients = d.coefficients;
    r.status = qknit::LpStatus::Optimal;
  } else if (a.set == "stab1" || a.set == "stab2") {
    const std::size_t n = a.set == "stab1" ? 1 : 2;
    qknit::DenseOperator rho = named_state_density(a.target);
    if (n == 2) rho = qknit::kron(rho, rho);
    r = qknit::stab_extent(rho, n);
  } else if (a.set == "clifford1q" || a.set == "endo16") {
    qknit::DecompositionSet set;
    if (a.set == "clifford1q") {
      set = qknit::clifford_channels_1q();
    } else {
      set.elements = qknit::modified_endo_basis();
      set.label = "endo16";
    }
    r = qknit::lp_extent(channel_target(a.target), set);
  } else if (a.set.ends_with(".json")) {
    r = qknit::lp_extent(channel_target(a.target), custom_set(a.set));
  } else {
    throw UsageError("unknown set '" + a.set + "'");
  }
  const std::string status = r.status == qknit::LpStatus::Optimal ? "optimal" : "infeasible";
  if (out.format == "csv") {
    std::vector<std::vector<std::string>> rows{{"target", "set", "gamma", "status"}};
    rows.push_back({a.target, a.set, csv_number(r.gamma), status});
    emit(out, render_csv(rows));
  } else {
    Json j{{"command", "extent"}, {"target", a.target}, {"set", a.set}, {"gamma", r.gamma}, {"status", status}};
    if (a.coefficients) j["coefficients"] = r.coefficients;
    emit(out, render_json(j));
  }
  return r.status == qknit::LpStatus::Optimal ? 0 : 1;
}

// ------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string kind;
  std::size_t n = 1;
  std::size_t d = 2;
  std::string schmidt;
  std::optional<double> theta;
  std::string gate;
  double p = 0.0;
};

/// Catalog parameters plus the Choi of the map it should reconstruct.
std::pair<Json, qknit::ChoiOperator> decompose_request(const DecomposeArgs& a) {
  using namespace qknit;
  Json params{{"catalog", a.kind}};
  if (a.kind == "t_gate") return {params, unitary_choi(gates::T())};
  if (a.kind == "magic_state") return {params, ChoiOperator{projector(states::magic_h()), SubsystemDims(), dims_for(2)}};
  if (a.kind == "wirecut_mpc") {
    params["n"] = a.n;
    return {params, unitary_choi(identity(std::size_t{1} << a.n))};
  }
  if (a.kind == "wirecut_ebc") {
    params["d"] = a.d;
    return {params, unitary_choi(identity(a.d))};
  }
  if (a.kind == "transpose") {
    params["d"] = a.d;
    const auto d = static_cast<Eigen::Index>(a.d);
    DenseOperator swap = DenseOperator::Zero(d * d, d * d);
    for (Eigen::Index x = 0; x < d; ++x) {
      for (Eigen::Index y = 0; y < d; ++y) swap(x * d + y, y * d + x) = 1.0 / static_cast<double>(d);
    }
    return {params, ChoiOperator{swap, dims_for(a.d), dims_for(a.d)}};
  }
  if (a.kind == "unot") return {params, pauli_channel_choi(pauli_diagonal_decomposition({1, -1, -1, -1}).coefficients)};
  if (a.kind == "depolarizing_inverse") {
    params["p"] = a.p;
    const double f = 1.0 - a.p;
    return {params, pauli_channel_choi(pauli_diagonal_inverse({1, f, f, f}).coefficients)};
  }
  if (a.kind == "pure_state") {
    const auto u = parse_list(a.schmidt);
    params["schmidt"] = u;
    const std::size_t dim = std::bit_ceil(std::max<std::size_t>(2, u.size()));
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(dim * dim));
    for (std::size_t k = 0; k < u.size(); ++k) psi(static_cast<Eigen::Index>(k * dim + k)) = u[k];
    return {params, ChoiOperator{projector(psi), SubsystemDims(), dims_for(dim * dim)}};
  }
  if (a.kind == "cr") {
    if (!a.theta) throw UsageError("--theta is required for cr");
    params["theta"] = *a.theta;
    return {params, unitary_choi(gates::CR(*a.theta))};
  }
  if (a.kind == "gate") {
    params["gate"] = a.gate;
    return {params, unitary_choi(gate_from_name(a.gate))};
  }
  throw UsageError("unknown kind '" + a.kind + "'");
}

int cmd_decompose(const DecomposeArgs& a, const Output& out) {
  const auto [params, target] = decompose_request(a);
  const qknit::QuasiDecomposition q = qknit::catalog_qpd(params);
  const qknit::ChoiOperator rec = qknit::reconstruct(q);
  const double residual = qknit::trace_norm(rec.matrix - target.matrix);
  const double gamma = qknit::one_norm(q);
  if (out.format == "csv") {
    std::vector<std::vector<std::string>> rows{{"kind", "terms", "one_norm", "claimed_gamma", "residual"}};
    rows.push_back({a.kind, std::to_string(q.terms.size()), csv_number(gamma),
                    q.claimed_gamma ? csv_number(*q.claimed_gamma) : "", csv_number(residual)});
    emit(out, render_csv(rows));
  } else {
    Json j{{"command", "decompose"}, {"params", params}, {"terms", q.terms.size()}, {"one_norm", gamma},
           {"residual", residual}, {"qpd", qknit::to_json(q)}};
    j["claimed_gamma"] = q.claimed_gamma ? Json(*q.claimed_gamma) : Json(nullptr);
    emit(out, render_json(j));
  }
  return 0;
}

// -------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string circuit;
  std::string obs = "Z";
  std::optional<std::size_t> shots;
  std::optional<double> eps;
  double delta = 0.05;
  std::optional<std::uint64_t> seed;
  std::string mode = "analytic";
  bool oracle = false;
  bool keep_values = false;
  std::size_t threads = 0;
  std::string expand = "auto";
  std::optional<std::size_t> factory;
};

qknit::Observable parse_observable(const std::string& text) {
  const auto at = text.find('@');
  const std::string paulis = text.substr(0, at);
  qknit::Targets targets;
  if (at != std::string::npos) {
    for (double x : parse_list(text.substr(at + 1))) {
      if (x < 0 || x != std::floor(x)) throw UsageError("observable target must be a nonnegative integer");
      targets.push_back(static_cast<std::size_t>(x));
    }
  }
  if (paulis.empty() || paulis.find_first_not_of("IXYZ") != std::string::npos) {
    throw UsageError("observable must be a Pauli string such as ZZ or XZ@1,3");
  }
  if (!targets.empty() && targets.size() != paulis.size()) throw UsageError("observable targets do not match its length");
  return qknit::pauli_observable(paulis, targets);
}

/// Replaces black-box cut markers by their QPD circuits.
qknit::Circuit expand_cuts(const qknit::Circuit& c, const EstimateArgs& a) {
  std::string kind;
  std::size_t factory = 1;
  for (const auto& s : c.sites) {
    if (const auto* b = std::get_if<qknit::BlackBoxCutSite>(&s)) {
      if (!kind.empty() && kind != b->kind) throw qknit::DomainError("mixed black-box cut kinds in one circuit");
      kind = b->kind;
      factory = b->factory_size;
    }
  }
  if (kind.empty() || a.expand == "none") return c;
  if (a.expand != "auto") throw UsageError("--expand must be auto or none");
  if (kind == "twoqubit") return qknit::blackbox_twoqubit_cut(c);
  return qknit::blackbox_clifford_cut(c, a.factory.value_or(factory));
}

int cmd_estimate(const EstimateArgs& a, const Output& out) {
  const auto start = std::chrono::steady_clock::now();
  const qknit::Circuit original = qknit::circuit_from_json(read_json_file(a.circuit));
  const qknit::Observable obs = parse_observable(a.obs);
  const qknit::Circuit c = expand_cuts(original, a);

  qknit::EstimateOptions opt;
  opt.seed = resolve_seed(a.seed);
  opt.delta = a.delta;
  opt.keep_values = a.keep_values;
  opt.threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
  if (a.mode == "analytic") {
    opt.mode = qknit::EstimatorMode::Analytic;
  } else if (a.mode == "sampled") {
    opt.mode = qknit::EstimatorMode::Sampled;
  } else {
    throw UsageError("--mode must be analytic or sampled");
  }
  if (a.shots) {
    opt.shots = *a.shots;
  } else if (a.eps) {
    opt.shots = static_cast<std::size_t>(qknit::hoeffding_shots(qknit::one_norm(c), *a.eps, a.delta));
  }
  const qknit::EstimateReport r = qknit::qps_estimate(c, obs, opt);
  std::optional<double> truth;
  if (a.oracle) truth = qknit::exact_expectation(original, obs);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (out.format == "csv") {
    std::vector<std::string> head{"mean", "stderr", "shots", "one_norm", "hoeffding_eps", "delta", "seed", "mode"};
    std::vector<std::string> row{csv_number(r.mean), csv_number(r.std_error), std::to_string(r.shots),
                                 csv_number(r.one_norm), csv_number(r.hoeffding_eps_at_delta), csv_number(r.delta),
                                 std::to_string(r.seed), a.mode};
    if (truth) {
      head.insert(head.end(), {"exact", "deviation"});
      row.insert(row.end(), {csv_number(*truth), csv_number(r.mean - *truth)});
    }
    emit(out, render_csv({head, row}));
  } else {
    Json j{{"command", "estimate"},
           {"circuit", a.circuit},
           {"observable", a.obs},
           {"mean", r.mean},
           {"stderr", r.std_error},
           {"shots", r.shots},
           {"one_norm", r.one_norm},
           {"hoeffding_eps_at_delta", r.hoeffding_eps_at_delta},
           {"delta", r.delta},
           {"seed", r.seed},
           {"mode", a.mode},
           {"qubits", c.qubits},
           {"timing", {{"timestamp", utc_timestamp()}, {"wall_time_s", wall}}}};
    if (truth) {
      j["exact"] = *truth;
      j["deviation"] = r.mean - *truth;
    }
    if (a.keep_values) j["values"] = r.values;
    emit(out, render_json(j));
  }
  return 0;
}

// ----------------------------------------------------------------- sweep

struct SweepArgs {
  std::string kind;
  std::string grid;
  std::size_t cnots = 6;
};

std::vector<std::vector<double>> sweep_rows(const SweepArgs& a) {
  using namespace qknit;
  std::vector<std::vector<double>> rows;
  if (a.kind == "depolarizing") {
    const auto grid = a.grid.empty() ? parse_list("0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9") : parse_list(a.grid);
    for (double p : grid) {
      const double f = 1.0 - p;
      const auto dec = pauli_diagonal_inverse({1, f, f, f});
      // residual of (inverse o noise) against the identity
      const KrausChannel noise = depolarizing(p);
      DenseOperator acc = DenseOperator::Zero(4, 4);
      for (std::size_t i = 0; i < 4; ++i) {
        acc += dec.coefficients[i] * choi_of(compose(KrausChannel::unitary(pauli(i)), noise)).matrix;
      }
      const double residual = trace_norm(acc - unitary_choi(identity(2)).matrix);
      rows.push_back({p, (1 + p / 2) / (1 - p), dec.gamma, residual});
    }
  } else if (a.kind == "cr") {
    std::vector<double> grid;
    if (a.grid.empty()) {
      for (int k = 0; k <= 16; ++k) grid.push_back(2 * std::numbers::pi * k / 16);
    } else {
      grid = parse_list(a.grid);
    }
    for (double theta : grid) {
      const QuasiDecomposition q = two_qubit_gate_qpd(gates::CR(theta));
      const auto v = validate(q, unitary_choi(gates::CR(theta)));
      rows.push_back({theta, 1 + 2 * std::abs(std::sin(theta / 2)), v.one_norm, v.residual});
    }
  } else if (a.kind == "factory") {
    const auto grid = a.grid.empty() ? parse_list("1,2,3") : parse_list(a.grid);
    for (double kd : grid) {
      if (kd < 1 || kd != std::floor(kd)) throw UsageError("factory sizes must be positive integers");
      const auto k = static_cast<std::size_t>(kd);
      Circuit c(2);
      for (std::size_t i = 0; i < a.cnots; ++i) c.blackbox_cut(gates::CNOT(), {0, 1}, "cnot", k);
      const double total = one_norm(blackbox_clifford_cut(c, k));
      // the joint resource QPD is the uniform rank-2^K Schmidt decomposition
      const std::vector<double> u(std::size_t{1} << k, 1.0 / std::sqrt(std::exp2(kd)));
      const QuasiDecomposition pair = pure_state_sep_qpd(u);
      StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(u.size() * u.size()));
      for (std::size_t j = 0; j < u.size(); ++j) psi(static_cast<Eigen::Index>(j * u.size() + j)) = u[j];
      const double res = trace_norm(reconstruct(pair).matrix - projector(psi));
      rows.push_back({kd, std::pow(std::exp2(kd + 1) - 1, 1.0 / kd),
                      std::pow(total, 1.0 / static_cast<double>(a.cnots)), res});
    }
  } else {
    throw UsageError("unknown sweep kind '" + a.kind + "'");
  }
  return rows;
}

int cmd_sweep(const SweepArgs& a, const Output& out) {
  const auto rows = sweep_rows(a);
  if (out.format == "json") {
    Json points = Json::array();
    for (const auto& r : rows) {
      points.push_back({{"param", r[0]}, {"gamma_closed_form", r[1]}, {"gamma_lp_or_reconstructed", r[2]}, {"residual", r[3]}});
    }
    emit(out, render_json(Json{{"command", "sweep"}, {"kind", a.kind}, {"points", points}}));
  } else {
    std::vector<std::vector<std::string>> table{{"param", "gamma_closed_form", "gamma_lp_or_reconstructed", "residual"}};
    for (const auto& r : rows) table.push_back({csv_number(r[0]), csv_number(r[1]), csv_number(r[2]), csv_number(r[3])});
    emit(out, render_csv(table));
  }
  return 0;
}

void add_output_flags(CLI::App* cmd, Output& out, const std::string& default_format) {
  out.format = default_format;
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("-o,--output", out.path, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Density matrices are large, short-lived temporaries; keep them on the heap instead of fresh mappings.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  CLI::App app{"qknit: quasiprobability decompositions, extents, and cut-circuit estimation"};
  app.require_subcommand(1);

  ExtentArgs ea;
  Output eo;
  auto* extent = app.add_subcommand("extent", "Minimal 1-norm of a target over a decomposition set");
  extent->add_option("--target", ea.target,
                     "Gate name (T, CR(0.5), ...), state (H_state, 0, +), PTM diagonal for --set pauli, or Choi JSON file")
      ->required();
  extent->add_option("--set", ea.set, "clifford1q | stab1 | stab2 | pauli | endo16 | QPD JSON file whose elements form the set")
      ->required();
  extent->add_flag("--coefficients", ea.coefficients, "Include the optimal coefficients");
  add_output_flags(extent, eo, "json");

  DecomposeArgs da;
  Output dout;
  auto* decompose = app.add_subcommand("decompose", "Emit a catalog QPD as JSON with its reconstruction residual");
  decompose
      ->add_option("--kind", da.kind,
                   "t_gate | magic_state | wirecut_mpc | wirecut_ebc | transpose | unot | depolarizing_inverse | "
                   "pure_state | cr | gate")
      ->required();
  decompose->add_option("--n", da.n, "Qubits for wirecut_mpc")->capture_default_str();
  decompose->add_option("--d", da.d, "Dimension for wirecut_ebc and transpose")->capture_default_str();
  decompose->add_option("--schmidt", da.schmidt, "Comma-separated Schmidt coefficients for pure_state");
  decompose->add_option("--theta", da.theta, "Angle in radians for cr");
  decompose->add_option("--gate", da.gate, "Two-qubit gate name for --kind gate");
  decompose->add_option("--p", da.p, "Depolarizing probability for depolarizing_inverse")->capture_default_str();
  add_output_flags(decompose, dout, "json");

  EstimateArgs sa;
  Output so;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of an observable on a circuit JSON file");
  estimate->add_option("circuit", sa.circuit, "Circuit JSON file")->required();
  estimate->add_option("--obs", sa.obs, "Pauli observable, e.g. ZZ or XZ@1,3 (default targets 0..len-1)")->capture_default_str();
  estimate->add_option("--shots", sa.shots, "Number of shots (default 10000)");
  estimate->add_option("--eps", sa.eps, "Derive shots from the Hoeffding bound when --shots is absent");
  estimate->add_option("--delta", sa.delta, "Failure probability for the reported Hoeffding radius")->capture_default_str();
  estimate->add_option("--seed", sa.seed, "RNG seed (fallback: QKNIT_SEED, then 20260101)");
  estimate->add_option("--mode", sa.mode, "analytic | sampled")->capture_default_str();
  estimate->add_flag("--oracle", sa.oracle, "Add the exact expectation and the deviation");
  estimate->add_flag("--values", sa.keep_values, "Include per-shot values (json only)");
  estimate->add_option("--threads", sa.threads, "Worker threads (0 = machine parallelism)")->capture_default_str();
  estimate->add_option("--expand", sa.expand, "auto: replace black-box cut markers by their QPDs; none: keep them ideal")
      ->capture_default_str();
  estimate->add_option("--factory", sa.factory, "Override the black-box CNOT factory size");
  add_output_flags(estimate, so, "json");

  SweepArgs wa;
  Output wo;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep comparing closed forms with constructed QPDs");
  sweep->add_option("--kind", wa.kind, "depolarizing | cr | factory")->required();
  sweep->add_option("--grid", wa.grid, "Comma-separated parameter values (kind-specific default)");
  sweep->add_option("--cnots", wa.cnots, "Cut CNOTs for the factory sweep")->capture_default_str();
  add_output_flags(sweep, wo, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*extent) return cmd_extent(ea, eo);
    if (*decompose) return cmd_decompose(da, dout);
    if (*estimate) return cmd_estimate(sa, so);
    return cmd_sweep(wa, wo);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const qknit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const qknit::SizeCap& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const qknit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
