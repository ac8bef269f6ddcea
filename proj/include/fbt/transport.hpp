#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fbt/geometry.hpp"
#include "fbt/states.hpp"

namespace fbt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Weight of rho outside supp(sigma) above which S(rho || sigma) is infinite.
inline constexpr double kSupportLeakTol = 1e-10;

/// Kullback-Leibler divergence in nats; +infinity on a support violation.
double relative_entropy(const ProbabilityDistribution& p, const ProbabilityDistribution& q);
/// tr(rho ln rho - rho ln sigma) in nats; +infinity when supp(rho) is not
/// contained in supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Entropy produced by one swap + equilibration step taking a to b.
template <class State>
double single_step_yield(const State& a, const State& b) {
  return relative_entropy(a, b);
}

struct TransportReport {
  StateKind kind = StateKind::Classical;
  int N = 0;
  double total_entropy = 0.0;  ///< sum of step yields
  double total_length = 0.0;   ///< sum of step lengths under the schedule's rule
  double min_production_bound = 0.0;  ///< ell^2 / (2N)
  double fidelity_bound = 0.0;        ///< geodesic_bound of the endpoints
  double endpoint_fidelity = 1.0;
  double density_nu = kInfinity;      ///< N / ell
  std::vector<double> step_lengths;
  std::vector<double> step_yields;

  /// ell / (2 nu), the linear-in-length prediction.
  double linear_prediction() const;
};

/// Sums the schedule's yields in index order. Throws InfiniteYield naming the
/// first step whose relative entropy is infinite.
template <class State>
TransportReport run_transport(const TransportSchedule<State>& schedule);

/// ell^2 / (2N).
double min_entropy_production(double ell, int N);

/// (2/N)(1 - F^2) for quantum, (2/N)(arccos F)^2 for classical.
double geodesic_bound(double fidelity, int N, StateKind kind);

/// 1 / (2 nu) nats per unit length; 0 for nu = infinity.
double entropy_per_unit_length(double nu);

struct ProbeRow {
  double eps = 0.0;
  double relative_entropy = 0.0;  ///< S(rho || rho + eps d)
  double metric_element = 0.0;    ///< Fisher (classical) or Bures (quantum)
  double kubo_mori_element = 0.0;
  double hellinger_element = 0.0;
  double metric_ratio = 0.0;     ///< S / (metric / 2)
  double kubo_mori_ratio = 0.0;  ///< S / (kubo-mori / 2)
};

struct ProbeTable {
  StateKind kind = StateKind::Classical;
  std::vector<ProbeRow> rows;
};

/// Ratio of relative entropy to half the squared line element over a
/// descending eps grid. Evidence only; no convergence is asserted here.
ProbeTable expansion_probe(const ProbabilityDistribution& p, const ClassicalTangent& dp,
                           const std::vector<double>& eps_list);
ProbeTable expansion_probe(const DensityMatrix& rho, const QuantumTangent& drho, const std::vector<double>& eps_list);

}  // namespace fbt
