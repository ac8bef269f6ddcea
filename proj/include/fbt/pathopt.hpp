#pragma once

#include <vector>

#include "fbt/geometry.hpp"
#include "fbt/states.hpp"

namespace fbt {

struct PathOptions {
  int max_iter = 5000;
  double fd_step = 1e-6;   ///< central-difference step on the free coordinates
  double armijo = 1e-4;    ///< sufficient-decrease constant
  double rel_tol = 1e-10;  ///< relative energy decrease over `window` iterations that counts as converged
  int window = 10;
  double ridge = 0.0;      ///< quantum only: endpoints and seed samples mixed with ridge * I/d
  bool parallel = true;    ///< gradient evaluated point-parallel; false selects the serial reference
};

struct PathIteration {
  int iter = 0;
  double length = 0.0;
  double energy = 0.0;
  double step_cv = 0.0;
};

template <class State>
struct PathOptimizationResult {
  std::vector<State> optimized_states;
  double initial_length = 0.0;    ///< length of the seed path (arc rule, finely sampled)
  double final_length = 0.0;      ///< chord-rule length, the rule the energy uses
  double final_length_arc = 0.0;  ///< arc-rule length of the same points
  double final_energy = 0.0;      ///< sum of squared chord steps
  double step_cv = 0.0;           ///< coefficient of variation of the final chord steps
  int iterations = 0;
  bool converged = false;
  double ridge = 0.0;
  std::vector<PathIteration> history;
};

/// Minimizes the discrete path energy sum_i dl_i^2 (chord rule) over the N - 1
/// interior points with fixed endpoints, by gradient descent with numerical
/// gradients and Armijo backtracking. Interior points are free coordinates:
/// x with p = x^2 / |x|^2 (classical), A with rho = A A^dagger / tr (quantum).
///
/// N must lie in [4, 64]; dimension at most 8 (classical) or 4 (quantum).
/// When max_iter is reached the best iterate is returned with
/// converged = false.
PathOptimizationResult<ProbabilityDistribution> minimize_path(const ProbabilityDistribution& start,
                                                              const ProbabilityDistribution& end, int N,
                                                              const ClassicalPath& seed, const PathOptions& options = {});

/// Quantum variant. Without a ridge the endpoints must be full rank and an
/// accepted iterate with an eigenvalue below 1e-10 raises RankCollapse.
PathOptimizationResult<DensityMatrix> minimize_path(const DensityMatrix& start, const DensityMatrix& end, int N,
                                                    const QuantumPath& seed, const PathOptions& options = {});

}  // namespace fbt
