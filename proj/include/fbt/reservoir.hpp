#pragma once

#include <string>
#include <vector>

#include "fbt/states.hpp"

namespace fbt {

/// Vector-mode cap for the classical fast path (d^n entries).
inline constexpr std::size_t kClassicalVectorCap = std::size_t{1} << 20;

enum class ReservoirMode { Dense, ClassicalFast };

const char* to_string(ReservoirMode mode);

struct ReservoirScanResult {
  std::vector<int> n_values;
  std::vector<double> delta_S_n;  ///< entropy production of one swap + twirl with n reservoir slots
  std::vector<double> gaps;       ///< |delta_S_n - reference|
  double reference = 0.0;         ///< S(rho || sigma)
  ReservoirMode mode = ReservoirMode::Dense;
};

/// Largest n with d^n <= cap (at least 0).
int max_feasible_slots(std::size_t d, std::size_t cap);

/// System + reservoir after the swap: sigma (x) rho (x) sigma^{(x)(n-1)}.
/// Dimension d^(n+1) is checked against cap.
DensityMatrix swap_state(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                         std::size_t cap = kDefaultDimensionCap);

/// Reservoir after relaxation: (1/n) sum_k sigma^{(x)k} (x) rho (x) sigma^{(x)(n-k-1)}.
/// Like every dense-mode operation, checks the full system + reservoir
/// dimension d^(n+1) against cap.
DensityMatrix twirl_state(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                          std::size_t cap = kDefaultDimensionCap, bool parallel = true);

/// S(twirl) - S(rho) - (n-1) S(sigma), by dense diagonalization.
double step_entropy_production(const DensityMatrix& rho, const DensityMatrix& sigma, int n,
                               std::size_t cap = kDefaultDimensionCap, bool parallel = true);

/// The same quantity for commuting inputs held as probability vectors.
double classical_step_entropy_production(const ProbabilityDistribution& p, const ProbabilityDistribution& q, int n,
                                         std::size_t cap = kClassicalVectorCap, bool parallel = true);

/// delta_S_n for n = 1 .. n_max against the relative-entropy reference.
ReservoirScanResult convergence_scan(const DensityMatrix& rho, const DensityMatrix& sigma, int n_max,
                                     std::size_t cap = kDefaultDimensionCap);
ReservoirScanResult convergence_scan(const ProbabilityDistribution& p, const ProbabilityDistribution& q, int n_max,
                                     std::size_t cap = kClassicalVectorCap);

}  // namespace fbt
