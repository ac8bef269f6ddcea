#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbt/states.hpp"

namespace fbt {

// ---------------------------------------------------------------------------
// Fidelities

/// Bhattacharyya coefficient sum_a sqrt(p_a q_a), clamped to [0, 1].
double fidelity_classical(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Uhlmann-Jozsa fidelity computed as the trace norm of sqrt(rho) sqrt(sigma)
/// (sum of singular values), clamped to [0, 1].
double fidelity_quantum(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Same quantity through tr sqrt(sqrt(sigma) rho sqrt(sigma)). Kept as an
/// independent route for cross-checks; loses accuracy near rank deficiency.
double fidelity_quantum_spectral(const DensityMatrix& rho, const DensityMatrix& sigma);

inline double fidelity(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  return fidelity_classical(p, q);
}
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) { return fidelity_quantum(rho, sigma); }

/// 1 - F. The classical overload uses (1/2) sum (sqrt p - sqrt q)^2, which
/// keeps full relative precision for nearby distributions.
double infidelity(const ProbabilityDistribution& p, const ProbabilityDistribution& q);
double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// ---------------------------------------------------------------------------
// Local metric elements (squared line elements for the displacement eps * d)

/// eps^2 sum dp^2 / p. Throws SupportViolation if dp is nonzero where p is zero.
double fisher_element(const ProbabilityDistribution& p, const ClassicalTangent& dp, double eps);

/// 2 tr(G eps drho) with rho G + G rho = eps drho, solved in the eigenbasis of
/// rho (optionally ridged). Throws RankDeficient unless the smallest
/// eigenvalue exceeds 1e-10.
double bures_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge = 0.0);

/// 4 tr(X^2) with X = sqrt(rho + eps drho) - sqrt(rho), by differencing.
/// Agrees with bures_element to O(eps^3) for commuting perturbations only.
double hellinger_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge = 0.0);

/// eps^2 sum |drho_ij|^2 c(l_i, l_j) with c the inverse logarithmic mean;
/// this is the Hessian of the relative entropy.
double kubo_mori_element(const DensityMatrix& rho, const QuantumTangent& drho, double eps, double ridge = 0.0);

// ---------------------------------------------------------------------------
// Geodesic lengths as functions of fidelity

/// 2 arccos F, in [0, pi].
double geodesic_length_fisher(double fidelity);
/// 2 sqrt(1 - F^2), in [0, 2].
double geodesic_length_bures(double fidelity);

// ---------------------------------------------------------------------------
// Paths

/// Immutable curve t in [0, 1] -> state. Samples are produced lazily and are
/// validated states; t = 0 and t = 1 return the stored endpoints exactly.
template <class State>
class StatePath {
 public:
  using Sampler = std::function<State(double)>;
  static constexpr StateKind kind = State::kind;

  StatePath(State start, State end, Sampler sampler, std::string name)
      : start_(std::move(start)), end_(std::move(end)), sampler_(std::move(sampler)), name_(std::move(name)) {}

  State sample(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::InvalidArgument, "path parameter outside [0, 1]");
    if (t == 0.0) return start_;
    if (t == 1.0) return end_;
    return sampler_(t);
  }

  const State& start() const { return start_; }
  const State& end() const { return end_; }
  const std::string& name() const { return name_; }
  std::size_t dim() const { return start_.dim(); }

 private:
  State start_;
  State end_;
  Sampler sampler_;
  std::string name_;
};

using ClassicalPath = StatePath<ProbabilityDistribution>;
using QuantumPath = StatePath<DensityMatrix>;

/// Great circle in sqrt(p) coordinates. Constant path when F(p, q) = 1.
ClassicalPath classical_geodesic_path(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Common eigenbasis of two commuting states and the two spectra in it
/// (entry a of each spectrum belongs to column a of the basis).
struct SharedEigenbasis {
  Matrix basis;
  ProbabilityDistribution rho_spectrum;
  ProbabilityDistribution sigma_spectrum;
};

/// Throws NotCommuting unless [rho, sigma] = 0 within 1e-10.
SharedEigenbasis shared_eigenbasis(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Classical geodesic of the eigenvalue vectors in a shared eigenbasis.
/// Throws NotCommuting unless [rho, sigma] = 0 within 1e-10.
QuantumPath commuting_quantum_geodesic(const DensityMatrix& rho, const DensityMatrix& sigma);

ClassicalPath linear_mixture_path(const ProbabilityDistribution& p, const ProbabilityDistribution& q);
QuantumPath linear_mixture_path(const DensityMatrix& rho, const DensityMatrix& sigma);

template <class State>
StatePath<State> constant_path(const State& s) {
  return StatePath<State>(s, s, [s](double) { return s; }, "constant");
}

/// Same curve traversed with t -> warp(t); warp must be increasing with
/// warp(0) = 0 and warp(1) = 1.
template <class State>
StatePath<State> reparametrize(const StatePath<State>& path, std::function<double(double)> warp) {
  return StatePath<State>(
      path.start(), path.end(), [path, warp](double t) { return path.sample(warp(t)); }, path.name() + "+warp");
}

// ---------------------------------------------------------------------------
// Discrete lengths

enum class StepRule { Arc, Chord };

const char* to_string(StepRule rule);
StepRule parse_step_rule(std::string_view text);
/// Arc for classical states, chord for quantum states.
StepRule default_step_rule(StateKind kind);

/// Arc: 2 arccos F. Chord: sqrt(8 (1 - F)).
double step_length(const ProbabilityDistribution& a, const ProbabilityDistribution& b, StepRule rule);
double step_length(const DensityMatrix& a, const DensityMatrix& b, StepRule rule);

struct PathLengthReport {
  double total_length = 0.0;
  std::vector<double> t;             ///< N + 1 sample parameters
  std::vector<double> step_lengths;  ///< N entries
  int N = 0;
  StepRule step_rule = StepRule::Arc;
};

template <class State>
PathLengthReport discrete_path_length(const StatePath<State>& path, int N, StepRule rule, bool parallel = true);

/// Ordered states rho_0 ... rho_N with per-step lengths and relative-entropy
/// yields S(rho_i || rho_{i+1}).
template <class State>
struct TransportSchedule {
  std::vector<State> states;
  std::vector<double> t;
  std::vector<double> step_lengths;
  std::vector<double> step_yields;
  int N = 0;
  StepRule step_rule = StepRule::Arc;
};

/// Schedule through the given increasing parameters (first 0, last 1).
template <class State>
TransportSchedule<State> schedule_at(const StatePath<State>& path, const std::vector<double>& ts, StepRule rule,
                                     bool parallel = true);

/// Places N steps of equal discrete length along the path by inverting a
/// dense cumulative-length table. A path of total length below 1e-12 yields
/// the uniform-in-t schedule.
template <class State>
TransportSchedule<State> even_schedule(const StatePath<State>& path, int N, StepRule rule, bool parallel = true);

template <class State>
TransportSchedule<State> even_schedule(const StatePath<State>& path, int N) {
  return even_schedule(path, N, default_step_rule(State::kind));
}

}  // namespace fbt
