#include "fbt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbt/kernels.hpp"
#include "fbt/transport.hpp"

namespace fbt {

namespace {

constexpr double kFullRankFloor = 1e-10;

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    fail(ErrorCode::DimensionMismatch, "dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

double checked_fidelity(double f) {
  if (!(f >= -kValidationTol && f <= 1.0 + kValidationTol)) {
    fail(ErrorCode::InvalidArgument, "fidelity must lie in [0, 1]");
  }
  return clamp_unit(f);
}

// Eigenbasis of rho (after an optional ridge) and drho expressed in it.
struct EigenFrame {
  RealVector lambda;
  Matrix coupling;
};

EigenFrame eigen_frame(const DensityMatrix& rho, const QuantumTangent& drho, double ridge) {
  require_same_dim(rho.dim(), drho.dim());
  const SpectralDecomposition sd = spectral_decomposition(with_ridge(rho, ridge));
  return {sd.eigenvalues, sd.eigenvectors.adjoint() * drho.delta() * sd.eigenvectors};
}

void require_full_rank(const RealVector& lambda) {
  const double min_eig = lambda.minCoeff();
  if (min_eig <= kFullRankFloor) {
    fail(ErrorCode::RankDeficient, "smallest eigenvalue " + std::to_string(min_eig) + " is not above 1e-10");
  }
}

// 1 / logarithmic mean of a and b.
double inverse_log_mean(double a, double b) {
  if (a == b) return 1.0 / a;
  const double lo = std::min(a, b), hi = std::max(a, b);
  return std::log1p((hi - lo) / lo) / (hi - lo);
}

double arc_from_infidelity(double g) { return 4.0 * std::asin(std::min(1.0, std::sqrt(std::max(g, 0.0) / 2.0))); }
double chord_from_infidelity(double g) { return std::sqrt(8.0 * std::max(g, 0.0)); }

double step_from_infidelity(double g, StepRule rule) {
  return rule == StepRule::Arc ? arc_from_infidelity(g) : chord_from_infidelity(g);
}

}  // namespace

double fidelity_classical(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  require_same_dim(p.dim(), q.dim());
  double acc = 0.0;
  for (std::size_t a = 0; a < p.dim(); ++a) acc += std::sqrt(p[a] * q[a]);
  return clamp_unit(acc);
}

double fidelity_quantum(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  const Matrix product = mat_sqrt(rho) * mat_sqrt(sigma);
  Eigen::JacobiSVD<Matrix> svd(product);
  return clamp_unit(svd.singularValues().sum());
}

double fidelity_quantum_spectral(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  const Matrix root_sigma = mat_sqrt(sigma);
  Matrix inner = root_sigma * rho.matrix() * root_sigma;
  inner = (inner + inner.adjoint()) * 0.5;
  const RealVector ev = eigenvalues_descending(inner);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::sqrt(std::max(ev[i], 0.0));
  return clamp_unit(acc);
}

double infidelity(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  require_same_dim(p.dim(), q.dim());
  double acc = 0.0;
  for (std::size_t a = 0; a < p.dim(); ++a) {
    const double diff = std::sqrt(p[a]) - std::sqrt(q[a]);
    acc += diff * diff;
  }
  return std::min(1.0, 0.5 * acc);
}

// 1 - F = (1/2) min_V |sqrt(rho) - sqrt(sigma) V|^2 over unitaries V; the
// minimizer is the polar factor of sqrt(sigma) sqrt(rho). Summing squares of
// the residual avoids the cancellation in 1 - F for nearby states.
double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  const Matrix root_rho = mat_sqrt(rho);
  const Matrix root_sigma = mat_sqrt(sigma);
  Eigen::JacobiSVD<Matrix> svd(root_sigma * root_rho, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix polar = svd.matrixU() * svd.matrixV().adjoint();
  return std::min(1.0, 0.5 * (root_rho - root_sigma * polar).squaredNorm());
}

double fisher_element(const ProbabilityDistribution& p, const ClassicalTangent& dp, double eps) {
  require_same_dim(p.dim(), dp.dim());
  double acc = 0.0;
  for (std::size_t a = 0; a < p.dim(); ++a) {
    const double d = dp.delta()[static_cast<Eigen::Index>(a)];
    if (p[a] <= kSupportFloor) {
      if (d != 0.0) fail(ErrorCode::SupportViolation, "perturbation leaves the support at index " + std::to_string(a));
      continue;
    }
    if (p[a] + eps * d < -kValidationTol) {
      fail(ErrorCode::InvalidArgument, "p + eps*dp is negative at index " + std::to_string(a));
    }
    acc += d * d / p[a];
  }
  return eps * eps * acc;
}

double bures_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge) {
  const EigenFrame frame = eigen_frame(rho, drho, ridge);
  require_full_rank(frame.lambda);
  const Eigen::Index d = frame.lambda.size();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) acc += std::norm(frame.coupling(i, j)) / (frame.lambda[i] + frame.lambda[j]);
  return 2.0 * eps * eps * acc;
}

double hellinger_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge) {
  require_same_dim(rho.dim(), drho.dim());
  const DensityMatrix base = with_ridge(rho, ridge);
  require_full_rank(eigenvalues_descending(base.matrix()));
  const DensityMatrix moved = validate_density(base.matrix() + eps * drho.delta());
  const Matrix x = mat_sqrt(moved) - mat_sqrt(base);
  return 4.0 * (x * x).trace().real();
}

double kubo_mori_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge) {
  const EigenFrame frame = eigen_frame(rho, drho, ridge);
  require_full_rank(frame.lambda);
  const Eigen::Index d = frame.lambda.size();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      acc += std::norm(frame.coupling(i, j)) * inverse_log_mean(frame.lambda[i], frame.lambda[j]);
  return eps * eps * acc;
}

double geodesic_length_fisher(double fidelity) { return 2.0 * std::acos(checked_fidelity(fidelity)); }

double geodesic_length_bures(double fidelity) {
  const double f = checked_fidelity(fidelity);
  return 2.0 * std::sqrt(1.0 - f * f);
}

ClassicalPath classical_geodesic_path(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  require_same_dim(p.dim(), q.dim());
  const double theta = arc_from_infidelity(infidelity(p, q)) / 2.0;
  if (theta < 1e-15) return ClassicalPath(p, p, [p](double) { return p; }, "geodesic");
  const RealVector root_p = p.weights().cwiseSqrt();
  const RealVector root_q = q.weights().cwiseSqrt();
  const double s = std::sin(theta);
  return ClassicalPath(p, q,
                       [root_p, root_q, theta, s](double t) {
                         const RealVector x = (std::sin((1.0 - t) * theta) * root_p + std::sin(t * theta) * root_q) / s;
                         return validate_distribution(RealVector(x.cwiseAbs2()));
                       },
                       "geodesic");
}

SharedEigenbasis shared_eigenbasis(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  if (!commutes(rho, sigma)) fail(ErrorCode::NotCommuting, "states do not commute within 1e-10");

  // A generic combination separates every eigenspace that either state splits.
  Matrix basis;
  RealVector p_diag, q_diag;
  for (double mix : {0.5773502691896258, 1.3247179572447460, 0.2360679774997897}) {
    const Matrix combined = rho.matrix() + mix * sigma.matrix();
    basis = spectral_decomposition(Matrix((combined + combined.adjoint()) * 0.5)).eigenvectors;
    Matrix rho_b = basis.adjoint() * rho.matrix() * basis;
    Matrix sigma_b = basis.adjoint() * sigma.matrix() * basis;
    p_diag = rho_b.diagonal().real();
    q_diag = sigma_b.diagonal().real();
    rho_b.diagonal().setZero();
    sigma_b.diagonal().setZero();
    if (max_abs(rho_b) <= 1e-9 && max_abs(sigma_b) <= 1e-9) break;
  }
  p_diag = p_diag.cwiseMax(0.0);
  q_diag = q_diag.cwiseMax(0.0);
  return {basis, validate_distribution(RealVector(p_diag / p_diag.sum())),
          validate_distribution(RealVector(q_diag / q_diag.sum()))};
}

QuantumPath commuting_quantum_geodesic(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const SharedEigenbasis shared = shared_eigenbasis(rho, sigma);
  const ClassicalPath eigen_path = classical_geodesic_path(shared.rho_spectrum, shared.sigma_spectrum);
  const Matrix basis = shared.basis;
  return QuantumPath(rho, sigma,
                     [eigen_path, basis](double t) {
                       const ProbabilityDistribution w = eigen_path.sample(t);
                       const Matrix m = basis * w.weights().cast<Complex>().asDiagonal() * basis.adjoint();
                       return validate_density(Matrix((m + m.adjoint()) * 0.5));
                     },
                     "commuting-geodesic");
}

ClassicalPath linear_mixture_path(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  require_same_dim(p.dim(), q.dim());
  return ClassicalPath(p, q,
                       [p, q](double t) {
                         return validate_distribution(RealVector((1.0 - t) * p.weights() + t * q.weights()));
                       },
                       "linear");
}

QuantumPath linear_mixture_path(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim());
  return QuantumPath(rho, sigma,
                     [rho, sigma](double t) {
                       return validate_density(Matrix((1.0 - t) * rho.matrix() + t * sigma.matrix()));
                     },
                     "linear");
}

const char* to_string(StepRule rule) { return rule == StepRule::Arc ? "arc" : "chord"; }

StepRule parse_step_rule(std::string_view text) {
  if (text == "arc") return StepRule::Arc;
  if (text == "chord") return StepRule::Chord;
  fail(ErrorCode::InvalidArgument, "unknown step rule '" + std::string(text) + "' (expected arc or chord)");
}

StepRule default_step_rule(StateKind kind) { return kind == StateKind::Classical ? StepRule::Arc : StepRule::Chord; }

double step_length(const ProbabilityDistribution& a, const ProbabilityDistribution& b, StepRule rule) {
  return step_from_infidelity(infidelity(a, b), rule);
}

double step_length(const DensityMatrix& a, const DensityMatrix& b, StepRule rule) {
  return step_from_infidelity(infidelity(a, b), rule);
}

template <class State>
PathLengthReport discrete_path_length(const StatePath<State>& path, int N, StepRule rule, bool parallel) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "step count N must be at least 1");
  PathLengthReport report;
  report.N = N;
  report.step_rule = rule;
  report.t.resize(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) report.t[i] = static_cast<double>(i) / N;
  const auto samples = kernels::map_indexed<State>(
      report.t.size(), [&](std::size_t i) { return path.sample(report.t[i]); }, parallel);
  report.step_lengths = kernels::map_indexed<double>(
      static_cast<std::size_t>(N), [&](std::size_t i) { return step_length(samples[i], samples[i + 1], rule); },
      parallel);
  for (double s : report.step_lengths) report.total_length += s;
  return report;
}

template <class State>
TransportSchedule<State> schedule_at(const StatePath<State>& path, const std::vector<double>& ts, StepRule rule,
                                     bool parallel) {
  if (ts.size() < 2 || ts.front() != 0.0 || ts.back() != 1.0) {
    fail(ErrorCode::InvalidArgument, "schedule parameters must run from 0 to 1");
  }
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] >= ts[i - 1])) fail(ErrorCode::InvalidArgument, "schedule parameters must be nondecreasing");
  }
  TransportSchedule<State> s;
  s.N = static_cast<int>(ts.size()) - 1;
  s.step_rule = rule;
  s.t = ts;
  s.states = kernels::map_indexed<State>(ts.size(), [&](std::size_t i) { return path.sample(ts[i]); }, parallel);
  const auto steps = static_cast<std::size_t>(s.N);
  s.step_lengths = kernels::map_indexed<double>(
      steps, [&](std::size_t i) { return step_length(s.states[i], s.states[i + 1], rule); }, parallel);
  s.step_yields = kernels::map_indexed<double>(
      steps, [&](std::size_t i) { return single_step_yield(s.states[i], s.states[i + 1]); }, parallel);
  return s;
}

template <class State>
TransportSchedule<State> even_schedule(const StatePath<State>& path, int N, StepRule rule, bool parallel) {
  if (N < 1) fail(ErrorCode::InvalidArgument, "step count N must be at least 1");
  const int resolution = std::max(64 * N, 4096);
  const PathLengthReport table = discrete_path_length(path, resolution, rule, parallel);

  std::vector<double> ts(static_cast<std::size_t>(N) + 1);
  ts.front() = 0.0;
  ts.back() = 1.0;
  if (table.total_length < 1e-12) {
    for (int i = 1; i < N; ++i) ts[i] = static_cast<double>(i) / N;
    return schedule_at(path, ts, rule, parallel);
  }

  std::vector<double> cumulative(table.step_lengths.size() + 1, 0.0);
  for (std::size_t k = 0; k < table.step_lengths.size(); ++k) cumulative[k + 1] = cumulative[k] + table.step_lengths[k];
  const double total = cumulative.back();
  std::size_t cell = 0;
  for (int i = 1; i < N; ++i) {
    const double target = total * i / N;
    while (cell + 1 < table.step_lengths.size() && cumulative[cell + 1] < target) ++cell;
    const double width = table.step_lengths[cell];
    const double frac = width > 0.0 ? std::clamp((target - cumulative[cell]) / width, 0.0, 1.0) : 0.0;
    ts[i] = (static_cast<double>(cell) + frac) / resolution;
  }
  return schedule_at(path, ts, rule, parallel);
}

template PathLengthReport discrete_path_length(const ClassicalPath&, int, StepRule, bool);
template PathLengthReport discrete_path_length(const QuantumPath&, int, StepRule, bool);
template TransportSchedule<ProbabilityDistribution> schedule_at(const ClassicalPath&, const std::vector<double>&,
                                                                StepRule, bool);
template TransportSchedule<DensityMatrix> schedule_at(const QuantumPath&, const std::vector<double>&, StepRule, bool);
template TransportSchedule<ProbabilityDistribution> even_schedule(const ClassicalPath&, int, StepRule, bool);
template TransportSchedule<DensityMatrix> even_schedule(const QuantumPath&, int, StepRule, bool);

}  // namespace fbt
