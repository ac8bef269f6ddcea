#include "fbt/reservoir.hpp"

#include <cmath>

#include "fbt/kernels.hpp"
#include "fbt/transport.hpp"

namespace fbt {

namespace {

void require_pair(std::size_t da, std::size_t db, int n) {
  if (da != db) fail(ErrorCode::DimensionMismatch, "system and reservoir constituents differ in dimension");
  if (n < 1) fail(ErrorCode::InvalidArgument, "reservoir needs n >= 1 constituents");
}

// d^slots <= cap, or DimensionCap naming the largest feasible n for the mode.
void require_cap(std::size_t d, int slots, int slot_offset, std::size_t cap) {
  if (slots <= max_feasible_slots(d, cap)) return;
  const int best_n = max_feasible_slots(d, cap) - slot_offset;
  fail(ErrorCode::DimensionCap, "dimension " + std::to_string(d) + "^" + std::to_string(slots) + " exceeds cap " +
                                    std::to_string(cap) + "; maximal feasible n = " + std::to_string(best_n));
}

template <class State, class Production>
ReservoirScanResult scan(const State& rho, const State& sigma, int n_max, ReservoirMode mode, Production production) {
  if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be at least 1");
  ReservoirScanResult result;
  result.mode = mode;
  result.reference = relative_entropy(rho, sigma);
  for (int n = 1; n <= n_max; ++n) {
    const double value = production(n);
    result.n_values.push_back(n);
    result.delta_S_n.push_back(value);
    result.gaps.push_back(std::abs(value - result.reference));
  }
  return result;
}

}  // namespace

const char* to_string(ReservoirMode mode) { return mode == ReservoirMode::Dense ? "dense" : "classical-fast"; }

int max_feasible_slots(std::size_t d, std::size_t cap) {
  if (d <= 1) return 64;
  int slots = 0;
  std::size_t dim = 1;
  while (dim <= cap / d) {
    dim *= d;
    ++slots;
  }
  return slots;
}

DensityMatrix swap_state(const DensityMatrix& rho, const DensityMatrix& sigma, int n, std::size_t cap) {
  require_pair(rho.dim(), sigma.dim(), n);
  require_cap(rho.dim(), n + 1, 1, cap);
  DensityMatrix out = tensor_product(sigma, rho, cap);
  for (int s = 1; s < n; ++s) out = tensor_product(out, sigma, cap);
  return out;
}

DensityMatrix twirl_state(const DensityMatrix& rho, const DensityMatrix& sigma, int n, std::size_t cap, bool parallel) {
  require_pair(rho.dim(), sigma.dim(), n);
  require_cap(rho.dim(), n + 1, 1, cap);
  Matrix m = parallel ? kernels::twirl(rho.matrix(), sigma.matrix(), n)
                      : kernels::serial::twirl(rho.matrix(), sigma.matrix(), n);
  return StateAccess::trusted(std::move(m));
}

double step_entropy_production(const DensityMatrix& rho, const DensityMatrix& sigma, int n, std::size_t cap,
                               bool parallel) {
  require_pair(rho.dim(), sigma.dim(), n);
  require_cap(rho.dim(), n + 1, 1, cap);
  if (n == 1) return 0.0;
  const DensityMatrix mixed = twirl_state(rho, sigma, n, cap, parallel);
  return von_neumann_entropy(mixed) - von_neumann_entropy(rho) - (n - 1) * von_neumann_entropy(sigma);
}

double classical_step_entropy_production(const ProbabilityDistribution& p, const ProbabilityDistribution& q, int n,
                                         std::size_t cap, bool parallel) {
  require_pair(p.dim(), q.dim(), n);
  require_cap(p.dim(), n, 0, cap);
  if (n == 1) return 0.0;
  const std::vector<double> mixed =
      parallel ? kernels::placement_mixture(p.span(), q.span(), n) : kernels::serial::placement_mixture(p.span(), q.span(), n);
  const double mixed_entropy =
      parallel ? kernels::entropy(mixed, kSupportFloor) : kernels::serial::entropy(mixed, kSupportFloor);
  return mixed_entropy - shannon_entropy(p) - (n - 1) * shannon_entropy(q);
}

ReservoirScanResult convergence_scan(const DensityMatrix& rho, const DensityMatrix& sigma, int n_max, std::size_t cap) {
  require_pair(rho.dim(), sigma.dim(), n_max);
  require_cap(rho.dim(), n_max + 1, 1, cap);
  return scan(rho, sigma, n_max, ReservoirMode::Dense,
              [&](int n) { return step_entropy_production(rho, sigma, n, cap); });
}

ReservoirScanResult convergence_scan(const ProbabilityDistribution& p, const ProbabilityDistribution& q, int n_max,
                                     std::size_t cap) {
  require_pair(p.dim(), q.dim(), n_max);
  require_cap(p.dim(), n_max, 0, cap);
  return scan(p, q, n_max, ReservoirMode::ClassicalFast,
              [&](int n) { return classical_step_entropy_production(p, q, n, cap); });
}

}  // namespace fbt
