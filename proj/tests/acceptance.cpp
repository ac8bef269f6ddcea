// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "fbt/geometry.hpp"
#include "fbt/pathopt.hpp"
#include "fbt/reservoir.hpp"
#include "fbt/transport.hpp"

namespace fs = std::filesystem;
using namespace fbt;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ProbabilityDistribution dist(std::initializer_list<double> v) { return validate_distribution(v); }

Verdict commuting_reduction() {
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 7);
    const auto p = random_distribution(d, 1000 + 2 * s), q = random_distribution(d, 1001 + 2 * s);
    worst = std::max(worst, std::abs(fidelity(diagonal_state(p), diagonal_state(q)) - fidelity(p, q)));
  }
  return {worst <= 1e-10, "max |F_q - F_c| = " + fmt("%.3e", worst)};
}

Verdict metric_reduction() {
  double worst = 0;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 7);
    const auto p = random_distribution(d, 2000 + s);
    RealVector raw(d);
    for (int a = 0; a < d; ++a) raw[a] = u(gen);
    raw = (raw.array() - raw.mean()).matrix() * p.weights().minCoeff();
    const auto dp = ClassicalTangent::make(raw);
    const double f = fisher_element(p, dp, 1e-3);
    const double b = bures_element(diagonal_state(p), QuantumTangent::from_classical(dp), 1e-3);
    worst = std::max(worst, std::abs(b - f) / f);
  }
  return {worst <= 1e-8, "max relative |Bures - Fisher| = " + fmt("%.3e", worst)};
}

Verdict formula_identity() {
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double f = i / 999.0;
    worst = std::max(worst, std::abs(geodesic_length_bures(f) - 2 * std::sin(0.5 * geodesic_length_fisher(f))));
  }
  return {worst <= 1e-12, "max deviation on 1000-point grid = " + fmt("%.3e", worst)};
}

Verdict quadratic_expansion() {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_factor = kInfinity;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int d = 2 + static_cast<int>(s % 4);
    const auto p = random_distribution(d, 3000 + s);
    RealVector raw(d);
    for (int a = 0; a < d; ++a) raw[a] = u(gen);
    raw = (raw.array() - raw.mean()).matrix() * p.weights().minCoeff();
    const auto table = expansion_probe(p, ClassicalTangent::make(raw), {1e-3, 1e-4});
    const double dev3 = std::abs(table.rows[0].metric_ratio - 1), dev4 = std::abs(table.rows[1].metric_ratio - 1);
    worst_factor = std::min(worst_factor, dev3 / dev4);
  }
  return {worst_factor >= 5.0, "min deviation shrink factor 1e-3 -> 1e-4 = " + fmt("%.2f", worst_factor)};
}

Verdict reservoir_limit() {
  const auto p = dist({0.5, 0.5}), q = dist({0.9, 0.1});
  const auto fast = convergence_scan(p, q, 12);
  bool monotone = true;
  for (std::size_t i = 1; i < fast.gaps.size(); ++i) monotone = monotone && fast.gaps[i] < fast.gaps[i - 1];
  const double g2 = fast.gaps[1], g12 = fast.gaps[11];
  const auto dense = convergence_scan(diagonal_state(p), diagonal_state(q), 10, std::size_t{1} << 11);
  double worst = 0;
  for (std::size_t i = 0; i < dense.delta_S_n.size(); ++i)
    worst = std::max(worst, std::abs(dense.delta_S_n[i] - fast.delta_S_n[i]));
  const bool ok = monotone && g12 < 0.5 * g2 && worst <= 1e-9 && std::abs(fast.reference - 0.51083) < 1e-5;
  return {ok, "S = " + fmt("%.5f", fast.reference) + ", g2 = " + fmt("%.5f", g2) + ", g12 = " + fmt("%.5f", g12) +
                  ", dense vs fast = " + fmt("%.1e", worst)};
}

Verdict even_spacing() {
  const auto path = classical_geodesic_path(dist({0.5, 0.5}), dist({0.9, 0.1}));
  const int N = 32;
  const double even = run_transport(even_schedule(path, N)).total_entropy;
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> u(0, 1);
  double best_other = kInfinity;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ts(N + 1);
    ts[0] = 0;
    ts[N] = 1;
    for (int i = 1; i < N; ++i) ts[i] = u(gen);
    std::sort(ts.begin(), ts.end());
    best_other = std::min(best_other, run_transport(schedule_at(path, ts, StepRule::Arc)).total_entropy);
  }
  return {best_other >= even * (1 - 1e-3),
          "even dS = " + fmt("%.6g", even) + ", best of 100 reallocations = " + fmt("%.6g", best_other)};
}

Verdict minimum_dissipation() {
  const auto path = classical_geodesic_path(dist({0.5, 0.5}), dist({0.9, 0.1}));
  const double ell = geodesic_length_fisher(fidelity(path.start(), path.end()));
  const double target = 0.5 * ell * ell;
  const double n256 = 256 * run_transport(even_schedule(path, 256)).total_entropy;
  const double n512 = 512 * run_transport(even_schedule(path, 512)).total_entropy;
  const double dev256 = std::abs(n256 - target), dev512 = std::abs(n512 - target);
  const double bound = 256 * geodesic_bound(fidelity(path.start(), path.end()), 256, StateKind::Classical);
  const bool ok = dev256 <= 0.02 * target && dev512 <= 0.5 * dev256 && std::abs(bound - target) <= 1e-12;
  return {ok, "l = " + fmt("%.5f", ell) + ", l^2/2 = " + fmt("%.5f", target) + ", N dS(256) = " + fmt("%.5f", n256) +
                  ", N dS(512) = " + fmt("%.5f", n512)};
}

Verdict linear_law() {
  const auto path = classical_geodesic_path(dist({0.5, 0.5}), dist({0.9, 0.1}));
  const auto r = run_transport(even_schedule(path, 256));
  const double measured = r.total_entropy * 2 * r.density_nu / r.total_length;
  return {measured >= 0.98 && measured <= 1.02,
          "dS 2 nu / l = " + fmt("%.5f", measured) + " (nu = " + fmt("%.2f", r.density_nu) + ")"};
}

Verdict numerical_geodesic() {
  const auto a = dist({1, 0}), b = dist({0, 1});
  const auto r = minimize_path(a, b, 32, linear_mixture_path(a, b));
  const double rel = std::abs(r.final_length_arc / std::numbers::pi - 1);
  return {r.converged && rel <= 0.01 && r.step_cv <= 0.02,
          "length = " + fmt("%.6f", r.final_length_arc) + ", step cv = " + fmt("%.2e", r.step_cv) + ", iterations = " +
              std::to_string(r.iterations)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / ("fbt_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"fidelity", R"({"kind":"quantum","rho":{"random":{"dim":3,"rank":2}},"sigma":{"random":{"dim":3,"rank":3}}})"},
      {"transport", R"({"kind":"quantum","rho":{"random":{"dim":2,"rank":2}},"sigma":{"random":{"dim":2,"rank":2}},"path":"linear","N_grid":[16,32]})"},
      {"reservoir", R"({"kind":"quantum","rho":{"random":{"dim":2,"rank":2}},"sigma":{"random":{"dim":2,"rank":2}},"n_max":6})"},
      {"geodesic", R"({"kind":"quantum","rho":{"random":{"dim":2,"rank":2}},"sigma":{"random":{"dim":2,"rank":2}},"N":8})"},
      {"probe", R"({"kind":"quantum","rho":{"random":{"dim":2,"rank":2}},"perturbation":{"random":{"stream":5}}})"},
  };
  int compared = 0;
  bool same = true;
  for (const auto& [command, config] : experiments) {
    const fs::path cfg = dir / (command + ".json");
    std::ofstream(cfg, std::ios::binary) << config;
    for (const char* format : {"csv", "json"}) {
      std::string texts[2];
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / (command + "_" + std::to_string(run) + "." + format);
        const std::string cmd = std::string("\"") + FBT_CLI_PATH + "\" " + command + " --config \"" + cfg.string() +
                                "\" --seed 20240501 --format " + format + " --out \"" + out.string() + "\"";
        if (std::system(cmd.c_str()) != 0) return {false, command + " exited with an error"};
        texts[run] = slurp(out);
      }
      same = same && !texts[0].empty() && texts[0] == texts[1];
      ++compared;
    }
  }
  fs::remove_all(dir);
  return {same, std::to_string(compared) + " output pairs byte-identical"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "commuting reduction of fidelity", 5, commuting_reduction},
      {2, "Bures element reduces to Fisher", 5, metric_reduction},
      {3, "l_Bures = 2 sin(l_Fisher / 2)", 1, formula_identity},
      {4, "quadratic expansion of relative entropy", 5, quadratic_expansion},
      {5, "finite-reservoir limit", 600, reservoir_limit},
      {6, "even spacing is optimal", 60, even_spacing},
      {7, "minimum dissipation l^2 / 2N", 60, minimum_dissipation},
      {8, "linear dissipation-length law", 60, linear_law},
      {9, "numerical geodesic recovers pi", 120, numerical_geodesic},
      {10, "CLI determinism", 120, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = v.pass && secs < c.budget_s;
    failures += ok ? 0 : 1;
    std::printf("%s criterion %d: %s -- %s [%.2fs / %.0fs]\n", ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                secs, c.budget_s);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
