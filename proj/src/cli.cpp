#include "fbt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fbt/geometry.hpp"
#include "fbt/pathopt.hpp"
#include "fbt/reservoir.hpp"
#include "fbt/transport.hpp"

namespace fbt::cli {

using io::Json;
using io::format_number;

namespace {

constexpr const char* kToolName = "fbt";

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::InvalidConfig, what); }

// Typed access to one experiment's config object; rejects unknown keys up front.
class ConfigReader {
 public:
  ConfigReader(const Json& config, std::set<std::string> allowed) : config_(config) {
    if (!config_.is_object()) config_error("config must be a JSON object");
    allowed.insert("seed");
    for (const auto& [key, value] : config_.items()) {
      if (!allowed.count(key)) config_error("unknown config key \"" + key + "\"");
    }
  }

  bool has(const std::string& key) const { return config_.contains(key); }
  const Json& at(const std::string& key) const {
    if (!has(key)) config_error("missing config key \"" + key + "\"");
    return config_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return config_.at(key).get<T>();
    } catch (const Json::exception&) {
      config_error("config key \"" + key + "\" has the wrong type");
    }
  }

 private:
  const Json& config_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t effective_seed(const ConfigReader& reader, const RunContext& ctx) {
  if (ctx.seed_from_flag || !reader.has("seed")) return ctx.seed;
  return reader.get<std::uint64_t>("seed", ctx.seed);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    config_error("\"" + path + "\" is not valid JSON: " + e.what());
  }
}

StateKind parse_kind(const std::string& text) {
  if (text == "classical") return StateKind::Classical;
  if (text == "quantum") return StateKind::Quantum;
  config_error("kind must be \"classical\" or \"quantum\"");
}

// Resolves a state specification: inline array, tagged object, {"file": ...}
// or {"random": {"dim", "rank", "stream"}}.
io::AnyState resolve_state(const Json& entry, std::optional<StateKind> kind, std::uint64_t seed,
                           std::uint64_t default_stream, const RunContext& ctx) {
  if (entry.is_object() && entry.contains("file")) {
    if (entry.size() != 1 || !entry["file"].is_string()) config_error("file reference takes only \"file\": path");
    std::filesystem::path path = entry["file"].get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(ctx.config_dir) / path;
    return resolve_state(load_json_file(path.string()), kind, seed, default_stream, ctx);
  }
  if (entry.is_object() && entry.contains("random")) {
    if (entry.size() != 1 || !entry["random"].is_object()) config_error("random state takes only \"random\": {...}");
    const Json& r = entry["random"];
    for (const auto& [key, value] : r.items()) {
      if (key != "dim" && key != "rank" && key != "stream") config_error("unknown random-state key \"" + key + "\"");
    }
    if (!r.contains("dim")) config_error("random state needs \"dim\"");
    const int dim = r["dim"].get<int>();
    const int rank = r.value("rank", dim);
    const auto stream = r.value("stream", default_stream);
    if (kind.value_or(StateKind::Quantum) == StateKind::Classical) return random_distribution(dim, mix_seed(seed, stream));
    return random_state(dim, rank, mix_seed(seed, stream));
  }
  io::AnyState state = io::state_from_json(entry);
  if (kind == StateKind::Quantum && std::holds_alternative<ProbabilityDistribution>(state)) {
    return diagonal_state(std::get<ProbabilityDistribution>(state));
  }
  if (kind == StateKind::Classical && std::holds_alternative<DensityMatrix>(state)) {
    config_error("kind is classical but a density matrix was given");
  }
  return state;
}

struct StatePair {
  StateKind kind;
  io::AnyState rho;
  io::AnyState sigma;
};

StatePair resolve_pair(const ConfigReader& reader, std::uint64_t seed, const RunContext& ctx) {
  std::optional<StateKind> kind;
  if (reader.has("kind")) kind = parse_kind(reader.get<std::string>("kind", ""));
  io::AnyState rho = resolve_state(reader.at("rho"), kind, seed, 0, ctx);
  if (!kind) kind = std::holds_alternative<ProbabilityDistribution>(rho) ? StateKind::Classical : StateKind::Quantum;
  if (*kind == StateKind::Quantum && std::holds_alternative<ProbabilityDistribution>(rho)) {
    rho = diagonal_state(std::get<ProbabilityDistribution>(rho));
  }
  io::AnyState sigma = resolve_state(reader.at("sigma"), kind, seed, 1, ctx);
  const auto dim = [](const io::AnyState& s) { return std::visit([](const auto& x) { return x.dim(); }, s); };
  if (dim(rho) != dim(sigma)) fail(ErrorCode::DimensionMismatch, "rho and sigma differ in dimension");
  return {*kind, std::move(rho), std::move(sigma)};
}

std::string metadata_block(const std::string& command, const Json& resolved, std::uint64_t seed) {
  std::string out;
  out += std::string("# tool=") + kToolName + " " + FBT_VERSION + "\n";
  out += "# command=" + command + "\n";
  out += "# seed=" + std::to_string(seed) + "\n";
  out += "# config_hash=" + config_hash(resolved) + "\n";
  out += "# config=" + resolved.dump() + "\n";
  return out;
}

Json json_envelope(const std::string& command, const Json& resolved, std::uint64_t seed, Json result) {
  return {{"tool", kToolName},        {"version", FBT_VERSION}, {"command", command},
          {"seed", seed},             {"config_hash", config_hash(resolved)},
          {"config", resolved},       {"result", std::move(result)}};
}

CommandResult emit(const std::string& command, const Json& resolved, std::uint64_t seed, const RunContext& ctx,
                   const std::string& csv_body, Json json_result) {
  CommandResult r;
  if (ctx.format == Format::Csv) {
    r.output = metadata_block(command, resolved, seed) + csv_body;
  } else {
    r.output = json_envelope(command, resolved, seed, std::move(json_result)).dump(2) + "\n";
  }
  return r;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

template <class State>
Json state_json(const State& s) {
  return io::to_json(s);
}

}  // namespace

std::string config_hash(const Json& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t dimension_cap_from_env() {
  const char* raw = std::getenv(kDimensionCapEnv);
  if (!raw || !*raw) return kDefaultDimensionCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) config_error(std::string(kDimensionCapEnv) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------

CommandResult cmd_fidelity(const Json& config, const RunContext& ctx) {
  const ConfigReader reader(config, {"kind", "rho", "sigma"});
  const std::uint64_t seed = effective_seed(reader, ctx);
  const StatePair pair = resolve_pair(reader, seed, ctx);

  const double f = std::visit(
      [](const auto& a, const auto& b) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, std::decay_t<decltype(b)>>) {
          return fidelity(a, b);
        } else {
          fail(ErrorCode::InvalidConfig, "rho and sigma must be of the same kind");
        }
      },
      pair.rho, pair.sigma);
  const double ell_f = geodesic_length_fisher(f);
  const double ell_b = geodesic_length_bures(f);

  Json resolved = {{"kind", to_string(pair.kind)},
                   {"rho", io::to_json(pair.rho)},
                   {"sigma", io::to_json(pair.sigma)},
                   {"seed", seed}};
  const std::string csv = "kind,F,ell_fisher,ell_bures\n" +
                          join_row({to_string(pair.kind), format_number(f), format_number(ell_f), format_number(ell_b)});
  Json result = {{"kind", to_string(pair.kind)}, {"F", f}, {"ell_fisher", ell_f}, {"ell_bures", ell_b}};
  return emit("fidelity", resolved, seed, ctx, csv, std::move(result));
}

CommandResult cmd_transport(const Json& config, const RunContext& ctx) {
  const ConfigReader reader(config, {"kind", "rho", "sigma", "path", "N_grid", "step_rule"});
  const std::uint64_t seed = effective_seed(reader, ctx);
  const StatePair pair = resolve_pair(reader, seed, ctx);

  std::vector<std::string> paths;
  if (!reader.has("path")) {
    paths = {"geodesic"};
  } else if (reader.at("path").is_string()) {
    paths = {reader.at("path").get<std::string>()};
  } else {
    paths = reader.get<std::vector<std::string>>("path", {});
  }
  for (const auto& p : paths) {
    if (p != "geodesic" && p != "linear") config_error("path must be \"geodesic\" or \"linear\", got \"" + p + "\"");
  }
  if (paths.empty()) config_error("path list is empty");
  const auto grid = reader.get<std::vector<int>>("N_grid", {64, 128, 256, 512});
  if (grid.empty()) config_error("N_grid is empty");
  for (int n : grid) {
    if (n < 1) config_error("N_grid entries must be positive");
  }
  const StepRule rule = parse_step_rule(reader.get<std::string>("step_rule", to_string(default_step_rule(pair.kind))));

  std::string csv = "path,N,ell,Delta_S,N_Delta_S,half_ell_sq,bound_eq15,bound_eq16,nu,rate_ratio\n";
  Json rows = Json::array();
  auto add_rows = [&](const std::string& path_name, const auto& path) {
    for (int n : grid) {
      const TransportReport rep = run_transport(even_schedule(path, n, rule));
      const double ell = rep.total_length;
      const double half_sq = 0.5 * ell * ell;
      const double rate_ratio = ell > 0.0 ? rep.total_entropy / rep.linear_prediction() : std::nan("");
      csv += join_row({path_name, std::to_string(n), format_number(ell), format_number(rep.total_entropy),
                       format_number(n * rep.total_entropy), format_number(half_sq),
                       format_number(rep.min_production_bound), format_number(rep.fidelity_bound),
                       format_number(rep.density_nu), format_number(rate_ratio)});
      rows.push_back({{"path", path_name},
                      {"N", n},
                      {"ell", ell},
                      {"Delta_S", rep.total_entropy},
                      {"N_Delta_S", n * rep.total_entropy},
                      {"half_ell_sq", half_sq},
                      {"bound_eq15", rep.min_production_bound},
                      {"bound_eq16", rep.fidelity_bound},
                      {"nu", io::number(rep.density_nu)},
                      {"rate_ratio", io::number(rate_ratio)}});
    }
  };
  for (const auto& path_name : paths) {
    if (pair.kind == StateKind::Classical) {
      const auto& p = std::get<ProbabilityDistribution>(pair.rho);
      const auto& q = std::get<ProbabilityDistribution>(pair.sigma);
      add_rows(path_name, path_name == "geodesic" ? classical_geodesic_path(p, q) : linear_mixture_path(p, q));
    } else {
      const auto& r = std::get<DensityMatrix>(pair.rho);
      const auto& s = std::get<DensityMatrix>(pair.sigma);
      add_rows(path_name, path_name == "geodesic" ? commuting_quantum_geodesic(r, s) : linear_mixture_path(r, s));
    }
  }

  Json resolved = {{"kind", to_string(pair.kind)}, {"rho", io::to_json(pair.rho)}, {"sigma", io::to_json(pair.sigma)},
                   {"path", paths},  {"N_grid", grid},  {"step_rule", to_string(rule)},  {"seed", seed}};
  return emit("transport", resolved, seed, ctx, csv, {{"rows", rows}});
}

CommandResult cmd_reservoir(const Json& config, const RunContext& ctx) {
  const ConfigReader reader(config, {"kind", "rho", "sigma", "n_max", "mode"});
  const std::uint64_t seed = effective_seed(reader, ctx);
  const StatePair pair = resolve_pair(reader, seed, ctx);
  const int n_max = reader.get<int>("n_max", 12);
  std::string mode = reader.get<std::string>("mode", "auto");
  if (mode != "auto" && mode != "dense" && mode != "classical-fast") {
    config_error("mode must be \"auto\", \"dense\" or \"classical-fast\"");
  }
  if (mode == "auto") mode = pair.kind == StateKind::Classical ? "classical-fast" : "dense";

  ReservoirScanResult scan;
  if (mode == "classical-fast") {
    if (pair.kind == StateKind::Classical) {
      scan = convergence_scan(std::get<ProbabilityDistribution>(pair.rho), std::get<ProbabilityDistribution>(pair.sigma),
                              n_max);
    } else {
      const SharedEigenbasis shared =
          shared_eigenbasis(std::get<DensityMatrix>(pair.rho), std::get<DensityMatrix>(pair.sigma));
      scan = convergence_scan(shared.rho_spectrum, shared.sigma_spectrum, n_max);
    }
  } else {
    const auto as_density = [](const io::AnyState& s) {
      if (const auto* p = std::get_if<ProbabilityDistribution>(&s)) return diagonal_state(*p);
      return std::get<DensityMatrix>(s);
    };
    scan = convergence_scan(as_density(pair.rho), as_density(pair.sigma), n_max, ctx.dimension_cap);
  }

  Json resolved = {{"kind", to_string(pair.kind)}, {"rho", io::to_json(pair.rho)}, {"sigma", io::to_json(pair.sigma)},
                   {"n_max", n_max},  {"mode", mode},  {"seed", seed}};
  return emit("reservoir", resolved, seed, ctx, io::to_csv(scan), io::to_json(scan));
}

CommandResult cmd_geodesic(const Json& config, const RunContext& ctx) {
  const ConfigReader reader(config, {"kind", "rho", "sigma", "N", "seed_path", "max_iter", "ridge", "history_out"});
  const std::uint64_t seed = effective_seed(reader, ctx);
  const StatePair pair = resolve_pair(reader, seed, ctx);
  const int N = reader.get<int>("N", 32);
  const std::string seed_path = reader.get<std::string>("seed_path", "linear");
  if (seed_path != "linear" && seed_path != "geodesic") config_error("seed_path must be \"linear\" or \"geodesic\"");
  PathOptions options;
  options.max_iter = reader.get<int>("max_iter", options.max_iter);
  options.ridge = reader.get<double>("ridge", 0.0);

  double f = 0.0;
  PathOptimizationResult<ProbabilityDistribution> classical;
  PathOptimizationResult<DensityMatrix> quantum;
  const bool is_classical = pair.kind == StateKind::Classical;
  if (is_classical) {
    const auto& p = std::get<ProbabilityDistribution>(pair.rho);
    const auto& q = std::get<ProbabilityDistribution>(pair.sigma);
    f = fidelity(p, q);
    classical = minimize_path(p, q, N, seed_path == "linear" ? linear_mixture_path(p, q) : classical_geodesic_path(p, q),
                              options);
  } else {
    const auto& r = std::get<DensityMatrix>(pair.rho);
    const auto& s = std::get<DensityMatrix>(pair.sigma);
    f = fidelity(r, s);
    quantum = minimize_path(r, s, N, seed_path == "linear" ? linear_mixture_path(r, s) : commuting_quantum_geodesic(r, s),
                            options);
  }
  const auto summary = [&](const auto& res) {
    return std::make_tuple(res.initial_length, res.final_length, res.final_length_arc, res.final_energy, res.step_cv,
                           res.iterations, res.converged, res.history);
  };
  const auto [initial, final_len, final_arc, energy, cv, iterations, converged, history] =
      is_classical ? summary(classical) : summary(quantum);

  Json resolved = {{"kind", to_string(pair.kind)},
                   {"rho", io::to_json(pair.rho)},
                   {"sigma", io::to_json(pair.sigma)},
                   {"N", N},
                   {"seed_path", seed_path},
                   {"max_iter", options.max_iter},
                   {"ridge", options.ridge},
                   {"seed", seed}};
  std::optional<std::string> history_path;
  if (reader.has("history_out")) {
    history_path = reader.get<std::string>("history_out", "");
    resolved["history_out"] = *history_path;
  } else if (ctx.out_path) {
    history_path = *ctx.out_path + ".history.csv";
  }

  const double fisher_candidate = geodesic_length_fisher(f);
  const double bures_candidate = geodesic_length_bures(f);
  const std::string csv =
      "kind,N,F,initial_length,final_length,final_length_arc,fisher_candidate,bures_candidate,final_energy,step_cv,"
      "iterations,converged,ridge\n" +
      join_row({to_string(pair.kind), std::to_string(N), format_number(f), format_number(initial),
                format_number(final_len), format_number(final_arc), format_number(fisher_candidate),
                format_number(bures_candidate), format_number(energy), format_number(cv), std::to_string(iterations),
                converged ? "true" : "false", format_number(options.ridge)});
  Json result = {{"kind", to_string(pair.kind)},
                 {"N", N},
                 {"F", f},
                 {"initial_length", initial},
                 {"final_length", final_len},
                 {"final_length_arc", final_arc},
                 {"fisher_candidate", fisher_candidate},
                 {"bures_candidate", bures_candidate},
                 {"final_energy", energy},
                 {"step_cv", cv},
                 {"iterations", iterations},
                 {"converged", converged},
                 {"ridge", options.ridge},
                 {"history", io::to_json(history)}};
  CommandResult out = emit("geodesic", resolved, seed, ctx, csv, std::move(result));
  if (history_path) {
    out.extra_files.emplace_back(*history_path, metadata_block("geodesic", resolved, seed) + io::history_csv(history));
  }
  if (!converged) {
    out.status = kExitNotConverged;
    out.message = "NotConverged: optimizer stopped after " + std::to_string(iterations) +
                  " iterations; best iterate reported";
  }
  return out;
}

CommandResult cmd_probe(const Json& config, const RunContext& ctx) {
  const ConfigReader reader(config, {"kind", "rho", "perturbation", "eps_grid"});
  const std::uint64_t seed = effective_seed(reader, ctx);
  std::optional<StateKind> kind;
  if (reader.has("kind")) kind = parse_kind(reader.get<std::string>("kind", ""));
  io::AnyState state = resolve_state(reader.at("rho"), kind, seed, 0, ctx);
  if (!kind) kind = std::holds_alternative<ProbabilityDistribution>(state) ? StateKind::Classical : StateKind::Quantum;
  if (*kind == StateKind::Quantum && std::holds_alternative<ProbabilityDistribution>(state)) {
    state = diagonal_state(std::get<ProbabilityDistribution>(state));
  }
  const auto eps_grid = reader.get<std::vector<double>>("eps_grid", {1e-1, 1e-2, 1e-3, 1e-4});
  const Json& pert = reader.at("perturbation");
  const std::size_t d = std::visit([](const auto& s) { return s.dim(); }, state);

  ProbeTable table;
  Json resolved_pert;
  if (*kind == StateKind::Classical) {
    RealVector dp;
    if (pert.is_object() && pert.contains("random")) {
      const auto stream = pert["random"].value("stream", std::uint64_t{2});
      const QuantumTangent t = random_tangent(static_cast<int>(d), mix_seed(seed, stream));
      dp = t.delta().diagonal().real();
      dp.array() -= dp.mean();
    } else {
      dp = io::real_vector_from_json(pert);
    }
    const ClassicalTangent tangent = ClassicalTangent::make(dp);
    table = expansion_probe(std::get<ProbabilityDistribution>(state), tangent, eps_grid);
    resolved_pert = std::vector<double>(tangent.delta().data(), tangent.delta().data() + tangent.delta().size());
  } else {
    Matrix dm;
    if (pert.is_object() && pert.contains("random")) {
      const auto stream = pert["random"].value("stream", std::uint64_t{2});
      dm = random_tangent(static_cast<int>(d), mix_seed(seed, stream)).delta();
    } else if (pert.is_array() && !pert.empty() && pert[0].is_number()) {
      dm = io::real_vector_from_json(pert).cast<Complex>().asDiagonal();
    } else {
      dm = io::complex_matrix_from_json(pert);
    }
    const QuantumTangent tangent = QuantumTangent::make(dm);
    table = expansion_probe(std::get<DensityMatrix>(state), tangent, eps_grid);
    resolved_pert = Json::array();
    for (Eigen::Index i = 0; i < dm.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < dm.cols(); ++j) {
        row.push_back(Json::array({tangent.delta()(i, j).real(), tangent.delta()(i, j).imag()}));
      }
      resolved_pert.push_back(row);
    }
  }
  Json resolved = {{"kind", to_string(*kind)},
                   {"rho", io::to_json(state)},
                   {"perturbation", resolved_pert},
                   {"eps_grid", eps_grid},
                   {"seed", seed}};
  return emit("probe", resolved, seed, ctx, io::to_csv(table), io::to_json(table));
}

// ---------------------------------------------------------------------------

CommandResult dispatch(const std::string& command, const Json& config, const RunContext& ctx) {
  CommandResult result;
  try {
    if (command == "fidelity") return cmd_fidelity(config, ctx);
    if (command == "transport") return cmd_transport(config, ctx);
    if (command == "reservoir") return cmd_reservoir(config, ctx);
    if (command == "geodesic") return cmd_geodesic(config, ctx);
    if (command == "probe") return cmd_probe(config, ctx);
    result.status = kExitInvalidInput;
    result.message = "unknown command \"" + command + "\"";
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::DimensionCap: result.status = kExitResourceCap; break;
      case ErrorCode::NotConverged: result.status = kExitNotConverged; break;
      default: result.status = kExitInvalidInput; break;
    }
    result.message = e.what();
  } catch (const Json::exception& e) {
    result.status = kExitInvalidInput;
    result.message = std::string("InvalidConfig: ") + e.what();
  }
  return result;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fidelity, Fisher-Bures path length and entropy production in reservoir state transport"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + FBT_VERSION);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"fidelity", "fidelity and the two geodesic lengths of a state pair"},
      {"transport", "even-schedule sequential transport over an N grid"},
      {"reservoir", "finite-reservoir swap + twirl entropy production scan"},
      {"geodesic", "numerical geodesic search by path-energy minimization"},
      {"probe", "relative entropy versus half the squared line element"},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_options;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    seed_options.push_back(sub->add_option("--seed", seed, "seed for random state generation")->capture_default_str());
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  std::string command;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) command = sub->get_name();
  }

  RunContext ctx;
  ctx.seed = seed;
  for (CLI::Option* opt : seed_options) ctx.seed_from_flag = ctx.seed_from_flag || opt->count() > 0;
  ctx.format = format == "json" ? Format::Json : Format::Csv;
  if (!out_path.empty()) ctx.out_path = out_path;
  ctx.config_dir = std::filesystem::path(config_path).parent_path().string();
  if (ctx.config_dir.empty()) ctx.config_dir = ".";

  CommandResult result;
  try {
    ctx.dimension_cap = dimension_cap_from_env();
    std::ifstream in(config_path, std::ios::binary);
    Json config;
    try {
      config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      err << "InvalidConfig: " << config_path << " is not valid JSON: " << e.what() << "\n";
      return kExitInvalidInput;
    }
    result = dispatch(command, config, ctx);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }

  if (!result.message.empty()) err << result.message << "\n";
  if (result.output.empty()) return result.status;

  auto write_file = [&](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
      err << "cannot write " << path << "\n";
      return false;
    }
    return true;
  };
  if (ctx.out_path) {
    if (!write_file(*ctx.out_path, result.output)) return kExitInternal;
  } else {
    out << result.output;
  }
  for (const auto& [path, text] : result.extra_files) {
    if (!write_file(path, text)) return kExitInternal;
  }
  return result.status;
}

}  // namespace fbt::cli
