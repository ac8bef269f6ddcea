#include "fbt/transport.hpp"

#include <algorithm>
#include <cmath>

#include "fbt/kernels.hpp"

namespace fbt {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    fail(ErrorCode::DimensionMismatch, "dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

void require_descending_eps(const std::vector<double>& eps_list) {
  if (eps_list.empty()) fail(ErrorCode::InvalidArgument, "empty eps grid");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) fail(ErrorCode::InvalidArgument, "eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) fail(ErrorCode::InvalidArgument, "eps grid must be descending");
  }
}

double ratio(double value, double element) { return element > 0.0 ? value / (0.5 * element) : 0.0; }

}  // namespace

double relative_entropy(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  require_same_dim(p.dim(), q.dim());
  // sum p ln(p/q) - p + q: every term is nonnegative and second order in q - p.
  double acc = 0.0;
  for (std::size_t a = 0; a < p.dim(); ++a) {
    const double pa = p[a], qa = q[a];
    if (pa <= kSupportFloor) {
      acc += qa - pa;
      continue;
    }
    if (qa <= kSupportFloor) return kInfinity;
    const double h = qa - pa;
    acc += h - pa * std::log1p(h / pa);
  }
  return std::max(acc, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  const SpectralDecomposition a = spectral_decomposition(rho);
  const SpectralDecomposition b = spectral_decomposition(sigma);
  // With W_ij = |<a_i|b_j>|^2 doubly stochastic,
  //   S = sum_ij W_ij [l_i ln(l_i / m_j) - l_i + m_j],
  // a sum of nonnegative terms that reduces to the classical form when the
  // eigenbases coincide.
  const Eigen::MatrixXd overlap = (a.eigenvectors.adjoint() * b.eigenvectors).cwiseAbs2();
  const Eigen::Index d = overlap.rows();
  double acc = 0.0;
  double leak = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mj = b.eigenvalues[j];
    for (Eigen::Index i = 0; i < d; ++i) {
      const double li = a.eigenvalues[i];
      const double w = overlap(i, j);
      if (li <= kSupportFloor) {
        acc += w * (std::max(mj, 0.0) - std::max(li, 0.0));
      } else if (mj <= kSupportFloor) {
        leak += w * li;
      } else {
        const double h = mj - li;
        acc += w * (h - li * std::log1p(h / li));
      }
    }
  }
  if (leak > kSupportLeakTol) return kInfinity;
  return std::max(acc, 0.0);
}

double TransportReport::linear_prediction() const {
  if (std::isinf(density_nu)) return 0.0;
  return total_length / (2.0 * density_nu);
}

template <class State>
TransportReport run_transport(const TransportSchedule<State>& schedule) {
  const auto steps = static_cast<std::size_t>(schedule.N);
  if (schedule.N < 1 || schedule.states.size() != steps + 1) {
    fail(ErrorCode::InvalidArgument, "schedule must hold N + 1 states for N >= 1");
  }
  std::vector<double> yields = schedule.step_yields;
  if (yields.size() != steps) {
    yields = kernels::map_indexed<double>(steps, [&](std::size_t i) {
      return single_step_yield(schedule.states[i], schedule.states[i + 1]);
    });
  }
  TransportReport report;
  report.kind = State::kind;
  report.N = schedule.N;
  for (std::size_t i = 0; i < steps; ++i) {
    if (std::isinf(yields[i])) {
      fail(ErrorCode::InfiniteYield, "step " + std::to_string(i) + " leaves the support of its target state");
    }
    report.total_entropy += yields[i];
  }
  for (double s : schedule.step_lengths) report.total_length += s;
  report.step_lengths = schedule.step_lengths;
  report.step_yields = std::move(yields);
  report.min_production_bound = min_entropy_production(report.total_length, report.N);
  report.endpoint_fidelity = fidelity(schedule.states.front(), schedule.states.back());
  report.fidelity_bound = geodesic_bound(report.endpoint_fidelity, report.N, State::kind);
  report.density_nu = report.total_length > 0.0 ? report.N / report.total_length : kInfinity;
  return report;
}

template TransportReport run_transport(const TransportSchedule<ProbabilityDistribution>&);
template TransportReport run_transport(const TransportSchedule<DensityMatrix>&);

double min_entropy_production(double ell, int N) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "step count N must be at least 1");
  if (!(ell >= 0.0)) fail(ErrorCode::InvalidArgument, "path length must be nonnegative");
  return ell * ell / (2.0 * N);
}

double geodesic_bound(double fidelity, int N, StateKind kind) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "step count N must be at least 1");
  if (!(fidelity >= -kValidationTol && fidelity <= 1.0 + kValidationTol)) {
    fail(ErrorCode::InvalidArgument, "fidelity must lie in [0, 1]");
  }
  const double f = std::clamp(fidelity, 0.0, 1.0);
  if (kind == StateKind::Quantum) return 2.0 / N * (1.0 - f * f);
  const double angle = std::acos(f);
  return 2.0 / N * angle * angle;
}

double entropy_per_unit_length(double nu) {
  if (!(nu > 0.0)) fail(ErrorCode::InvalidArgument, "equilibration density must be positive");
  if (std::isinf(nu)) return 0.0;
  return 1.0 / (2.0 * nu);
}

ProbeTable expansion_probe(const ProbabilityDistribution& p, const ClassicalTangent& dp,
                           const std::vector<double>& eps_list) {
  require_same_dim(p.dim(), dp.dim());
  require_descending_eps(eps_list);
  if (p.weights().minCoeff() <= kSupportFloor) fail(ErrorCode::RankDeficient, "probe needs a full-support distribution");
  ProbeTable table;
  table.kind = StateKind::Classical;
  for (double eps : eps_list) {
    const auto moved = validate_distribution(RealVector(p.weights() + eps * dp.delta()));
    ProbeRow row;
    row.eps = eps;
    row.relative_entropy = relative_entropy(p, moved);
    row.metric_element = fisher_element(p, dp, eps);
    // Commuting case: the Kubo-Mori and Hellinger forms reduce to Fisher.
    row.kubo_mori_element = row.metric_element;
    row.hellinger_element = 0.0;
    for (std::size_t a = 0; a < p.dim(); ++a) {
      const double x = std::sqrt(moved[a]) - std::sqrt(p[a]);
      row.hellinger_element += 4.0 * x * x;
    }
    row.metric_ratio = ratio(row.relative_entropy, row.metric_element);
    row.kubo_mori_ratio = ratio(row.relative_entropy, row.kubo_mori_element);
    table.rows.push_back(row);
  }
  return table;
}

ProbeTable expansion_probe(const DensityMatrix& rho, const QuantumTangent& drho, const std::vector<double>& eps_list) {
  require_same_dim(rho.dim(), drho.dim());
  require_descending_eps(eps_list);
  ProbeTable table;
  table.kind = StateKind::Quantum;
  for (double eps : eps_list) {
    ProbeRow row;
    row.eps = eps;
    row.kubo_mori_element = kubo_mori_element(rho, drho, eps);
    row.metric_element = bures_element(rho, drho, eps);
    row.hellinger_element = hellinger_element(rho, drho, eps);
    const DensityMatrix moved = validate_density(rho.matrix() + eps * drho.delta());
    row.relative_entropy = relative_entropy(rho, moved);
    row.metric_ratio = ratio(row.relative_entropy, row.metric_element);
    row.kubo_mori_ratio = ratio(row.relative_entropy, row.kubo_mori_element);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace fbt
