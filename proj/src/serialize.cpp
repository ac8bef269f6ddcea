#include "fbt/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fbt::io {

namespace {

[[noreturn]] void bad_shape(const std::string& what) { fail(ErrorCode::InvalidConfig, what); }

Json complex_entry(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  bad_shape("matrix entries must be numbers or [re, im] pairs");
}

template <class Row>
std::string join(const Row& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json to_json(const ProbabilityDistribution& p) {
  Json w = Json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) w.push_back(p[i]);
  return {{"kind", "classical"}, {"weights", w}};
}

Json to_json(const DensityMatrix& rho) {
  Json rows = Json::array();
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_entry(m(i, j)));
    rows.push_back(row);
  }
  return {{"kind", "quantum"}, {"matrix", rows}};
}

Json to_json(const AnyState& s) {
  return std::visit([](const auto& st) { return to_json(st); }, s);
}

RealVector real_vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad_shape("expected a non-empty array of reals");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad_shape("expected a non-empty array of reals");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad_shape("expected an array of matrix rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad_shape("matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
    }
  }
  return m;
}

AnyState state_from_json(const Json& j) {
  if (j.is_object()) {
    if (!j.contains("kind") || !j["kind"].is_string()) bad_shape("state object needs a \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();
    for (const auto& [key, value] : j.items()) {
      if (key != "kind" && key != "weights" && key != "matrix") bad_shape("unknown state field \"" + key + "\"");
    }
    if (kind == "classical") {
      if (!j.contains("weights")) bad_shape("classical state needs \"weights\"");
      return validate_distribution(real_vector_from_json(j["weights"]));
    }
    if (kind == "quantum") {
      if (!j.contains("matrix")) bad_shape("quantum state needs \"matrix\"");
      return validate_density(complex_matrix_from_json(j["matrix"]));
    }
    bad_shape("state kind must be \"classical\" or \"quantum\"");
  }
  if (j.is_array() && !j.empty() && j[0].is_number()) return validate_distribution(real_vector_from_json(j));
  if (j.is_array() && !j.empty()) return validate_density(complex_matrix_from_json(j));
  bad_shape("unrecognized state specification");
}

std::string to_csv(const PathLengthReport& report) {
  std::string out = "i,t_i,delta_ell,cumulative_ell\n";
  double cumulative = 0.0;
  for (std::size_t i = 0; i < report.step_lengths.size(); ++i) {
    cumulative += report.step_lengths[i];
    out += join(std::vector<std::string>{std::to_string(i), format_number(report.t[i]),
                                         format_number(report.step_lengths[i]), format_number(cumulative)});
  }
  return out;
}

template <class State>
std::string to_csv(const TransportSchedule<State>& schedule) {
  PathLengthReport view;
  view.t = schedule.t;
  view.step_lengths = schedule.step_lengths;
  view.N = schedule.N;
  view.step_rule = schedule.step_rule;
  return to_csv(view);
}

template std::string to_csv(const TransportSchedule<ProbabilityDistribution>&);
template std::string to_csv(const TransportSchedule<DensityMatrix>&);

std::string summary_csv(const TransportReport& r) {
  std::string out = "N,ell,Delta_S,bound_eq15,bound_eq16,nu\n";
  out += join(std::vector<std::string>{std::to_string(r.N), format_number(r.total_length),
                                       format_number(r.total_entropy), format_number(r.min_production_bound),
                                       format_number(r.fidelity_bound), format_number(r.density_nu)});
  return out;
}

std::string to_csv(const TransportReport& r) {
  std::string out = "i,delta_ell_i,yield_i\n";
  for (std::size_t i = 0; i < r.step_yields.size(); ++i) {
    const double len = i < r.step_lengths.size() ? r.step_lengths[i] : 0.0;
    out += join(std::vector<std::string>{std::to_string(i), format_number(len), format_number(r.step_yields[i])});
  }
  out += '\n';
  out += summary_csv(r);
  return out;
}

std::string to_csv(const ReservoirScanResult& scan) {
  std::string out = "# reference_S=" + format_number(scan.reference) + ",mode=" + to_string(scan.mode) + "\n";
  out += "n,delta_S_n,gap_n\n";
  for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
    out += join(std::vector<std::string>{std::to_string(scan.n_values[i]), format_number(scan.delta_S_n[i]),
                                         format_number(scan.gaps[i])});
  }
  return out;
}

std::string history_csv(const std::vector<PathIteration>& history) {
  std::string out = "iter,length,energy,step_cv\n";
  for (const auto& h : history) {
    out += join(std::vector<std::string>{std::to_string(h.iter), format_number(h.length), format_number(h.energy),
                                         format_number(h.step_cv)});
  }
  return out;
}

std::string to_csv(const ProbeTable& table) {
  std::string out = std::string("# metric=") + (table.kind == StateKind::Classical ? "fisher" : "bures") + "\n";
  out += "eps,relative_entropy,metric_element,kubo_mori_element,hellinger_element,metric_ratio,kubo_mori_ratio\n";
  for (const auto& r : table.rows) {
    out += join(std::vector<std::string>{format_number(r.eps), format_number(r.relative_entropy),
                                         format_number(r.metric_element), format_number(r.kubo_mori_element),
                                         format_number(r.hellinger_element), format_number(r.metric_ratio),
                                         format_number(r.kubo_mori_ratio)});
  }
  return out;
}

Json to_json(const PathLengthReport& report) {
  return {{"N", report.N},
          {"step_rule", to_string(report.step_rule)},
          {"total_length", number(report.total_length)},
          {"t", report.t},
          {"step_lengths", report.step_lengths}};
}

Json to_json(const TransportReport& r) {
  return {{"kind", to_string(r.kind)},
          {"N", r.N},
          {"ell", number(r.total_length)},
          {"Delta_S", number(r.total_entropy)},
          {"bound_eq15", number(r.min_production_bound)},
          {"bound_eq16", number(r.fidelity_bound)},
          {"nu", number(r.density_nu)},
          {"step_lengths", r.step_lengths},
          {"step_yields", r.step_yields}};
}

Json to_json(const ReservoirScanResult& scan) {
  Json delta = Json::array(), gaps = Json::array();
  for (double v : scan.delta_S_n) delta.push_back(number(v));
  for (double v : scan.gaps) gaps.push_back(number(v));
  return {{"mode", to_string(scan.mode)},
          {"reference_S", number(scan.reference)},
          {"n", scan.n_values},
          {"delta_S_n", delta},
          {"gap_n", gaps}};
}

Json to_json(const ProbeTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"eps", r.eps},
                    {"relative_entropy", number(r.relative_entropy)},
                    {"metric_element", number(r.metric_element)},
                    {"kubo_mori_element", number(r.kubo_mori_element)},
                    {"hellinger_element", number(r.hellinger_element)},
                    {"metric_ratio", number(r.metric_ratio)},
                    {"kubo_mori_ratio", number(r.kubo_mori_ratio)}});
  }
  return {{"metric", table.kind == StateKind::Classical ? "fisher" : "bures"}, {"rows", rows}};
}

Json to_json(const std::vector<PathIteration>& history) {
  Json rows = Json::array();
  for (const auto& h : history) {
    rows.push_back({{"iter", h.iter}, {"length", number(h.length)}, {"energy", number(h.energy)},
                    {"step_cv", number(h.step_cv)}});
  }
  return rows;
}

}  // namespace fbt::io
