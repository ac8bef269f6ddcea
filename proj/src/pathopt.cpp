#include "fbt/pathopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbt/kernels.hpp"

namespace fbt {

namespace {

constexpr double kCollapseFloor = 1e-10;
constexpr double kSameEndpoints = 1e-24;

// Free-coordinate model of the classical simplex: p = x^2 / |x|^2, root sqrt(p).
struct ClassicalModel {
  using State = ProbabilityDistribution;
  using Root = RealVector;

  RealVector coords(const State& s) const { return s.weights().cwiseSqrt(); }
  Root root(const RealVector& x) const { return x.cwiseAbs() / x.norm(); }
  Root root(const State& s) const { return s.weights().cwiseSqrt(); }
  double infidelity(const Root& a, const Root& b) const { return std::min(1.0, 0.5 * (a - b).squaredNorm()); }
  double min_eigenvalue(const Root&) const { return std::numeric_limits<double>::infinity(); }
  State state(const RealVector& x) const { return validate_distribution(RealVector(x.cwiseAbs2() / x.squaredNorm())); }
};

// rho = A A^dagger / tr(A A^dagger) with A stored as interleaved (re, im), column-major.
struct QuantumModel {
  using State = DensityMatrix;
  struct Root {
    Matrix sqrt_rho;
    double min_eig = 0.0;
  };

  Eigen::Index d = 0;

  Matrix factor(const RealVector& x) const {
    Matrix a(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) a(i, j) = Complex(x[2 * (j * d + i)], x[2 * (j * d + i) + 1]);
    return a;
  }
  Matrix density(const RealVector& x) const {
    const Matrix a = factor(x);
    Matrix m = a * a.adjoint();
    m = (m + m.adjoint()) * 0.5;
    return m / m.trace().real();
  }
  RealVector coords(const State& s) const {
    const Matrix a = mat_sqrt(s);
    RealVector x(2 * d * d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) {
        x[2 * (j * d + i)] = a(i, j).real();
        x[2 * (j * d + i) + 1] = a(i, j).imag();
      }
    return x;
  }
  Root root_of_matrix(const Matrix& m) const {
    const SpectralDecomposition sd = spectral_decomposition(m);
    Root r;
    r.sqrt_rho = spectral_apply(sd, [](double v) { return std::sqrt(std::max(v, 0.0)); });
    r.min_eig = sd.eigenvalues[sd.eigenvalues.size() - 1];
    return r;
  }
  Root root(const RealVector& x) const { return root_of_matrix(density(x)); }
  Root root(const State& s) const { return root_of_matrix(s.matrix()); }
  // Residual form of 1 - F, see geometry.cpp.
  double infidelity(const Root& a, const Root& b) const {
    Eigen::JacobiSVD<Matrix> svd(b.sqrt_rho * a.sqrt_rho, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix polar = svd.matrixU() * svd.matrixV().adjoint();
    return std::min(1.0, 0.5 * (a.sqrt_rho - b.sqrt_rho * polar).squaredNorm());
  }
  double min_eigenvalue(const Root& r) const { return r.min_eig; }
  State state(const RealVector& x) const { return validate_density(density(x)); }
};

template <class Model>
class PathEnergy {
 public:
  using Root = typename Model::Root;

  PathEnergy(const Model& model, std::vector<Root> roots) : model_(model), roots_(std::move(roots)) {}

  int N() const { return static_cast<int>(roots_.size()) - 1; }
  const std::vector<Root>& roots() const { return roots_; }
  void set_root(std::size_t i, Root r) { roots_[i] = std::move(r); }

  double step_energy(const Root& a, const Root& b) const { return 8.0 * model_.infidelity(a, b); }

  double energy() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < roots_.size(); ++i) acc += step_energy(roots_[i], roots_[i + 1]);
    return acc;
  }

  std::vector<double> steps() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < roots_.size(); ++i) out.push_back(std::sqrt(step_energy(roots_[i], roots_[i + 1])));
    return out;
  }

  // Energy terms touching interior point i when it sits at coordinates x.
  double local(std::size_t i, const RealVector& x) const {
    const Root r = model_.root(x);
    return step_energy(roots_[i - 1], r) + step_energy(r, roots_[i + 1]);
  }

  RealVector point_gradient(std::size_t i, const RealVector& x, double h) const {
    RealVector g(x.size());
    RealVector probe = x;
    for (Eigen::Index c = 0; c < x.size(); ++c) {
      probe[c] = x[c] + h;
      const double up = local(i, probe);
      probe[c] = x[c] - h;
      const double down = local(i, probe);
      probe[c] = x[c];
      g[c] = (up - down) / (2.0 * h);
    }
    return g;
  }

 private:
  const Model& model_;
  std::vector<Root> roots_;
};

double coefficient_of_variation(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean <= 0.0) return 0.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size())) / mean;
}

double squared_norm(const std::vector<RealVector>& v) {
  double acc = 0.0;
  for (const auto& x : v) acc += x.squaredNorm();
  return acc;
}

double dot(const std::vector<RealVector>& a, const std::vector<RealVector>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].dot(b[i]);
  return acc;
}

template <class State>
double endpoint_mismatch(const State& a, const State& b) {
  if constexpr (State::kind == StateKind::Classical) {
    return (a.weights() - b.weights()).cwiseAbs().maxCoeff();
  } else {
    return max_abs(a.matrix() - b.matrix());
  }
}

void check_options(const PathOptions& o, int N) {
  if (N < 4 || N > 64) fail(ErrorCode::InvalidArgument, "N must lie in [4, 64], got " + std::to_string(N));
  if (o.max_iter < 0 || o.window < 1 || !(o.fd_step > 0.0) || !(o.armijo > 0.0 && o.armijo < 1.0) ||
      !(o.rel_tol >= 0.0) || !(o.ridge >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "invalid optimizer options");
  }
}

template <class Model, class State>
PathOptimizationResult<State> optimize(const Model& model, const State& start, const State& end, int N,
                                       const StatePath<State>& seed, const PathOptions& options,
                                       const std::function<State(const State&)>& regularize) {
  using Root = typename Model::Root;
  PathOptimizationResult<State> result;
  result.ridge = options.ridge;
  const std::size_t points = static_cast<std::size_t>(N) + 1;

  if (endpoint_mismatch(seed.start(), start) > 1e-12 || endpoint_mismatch(seed.end(), end) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "seed path endpoints differ from the requested endpoints");
  }
  const State first = regularize(start);
  const State last = regularize(end);

  if (model.infidelity(model.root(first), model.root(last)) <= kSameEndpoints) {
    result.optimized_states.assign(points, first);
    result.converged = true;
    result.history.push_back({0, 0.0, 0.0, 0.0});
    return result;
  }

  // Interior coordinates, unit norm (the map to states is scale invariant).
  std::vector<RealVector> coords(points);
  std::vector<Root> roots(points);
  roots.front() = model.root(first);
  roots.back() = model.root(last);
  for (std::size_t i = 1; i + 1 < points; ++i) {
    coords[i] = model.coords(regularize(seed.sample(static_cast<double>(i) / N)));
    coords[i].normalize();
    roots[i] = model.root(coords[i]);
  }
  PathEnergy<Model> path(model, std::move(roots));

  auto check_collapse = [&]() {
    if (options.ridge > 0.0) return;
    for (std::size_t i = 1; i + 1 < points; ++i) {
      if (model.min_eigenvalue(path.roots()[i]) < kCollapseFloor) {
        fail(ErrorCode::RankCollapse, "interior point " + std::to_string(i) + " lost rank (enable a ridge)");
      }
    }
  };
  check_collapse();

  auto gradient = [&](const std::vector<RealVector>& x) {
    auto interior = kernels::map_indexed<RealVector>(
        points - 2, [&](std::size_t k) { return path.point_gradient(k + 1, x[k + 1], options.fd_step); },
        options.parallel);
    std::vector<RealVector> g(points);
    for (std::size_t k = 0; k < interior.size(); ++k) g[k + 1] = std::move(interior[k]);
    g.front() = RealVector::Zero(0);
    g.back() = RealVector::Zero(0);
    return g;
  };

  auto record = [&](int iter, double energy) {
    const std::vector<double> steps = path.steps();
    double length = 0.0;
    for (double s : steps) length += s;
    result.history.push_back({iter, length, energy, coefficient_of_variation(steps)});
  };

  double energy = path.energy();
  record(0, energy);
  result.initial_length =
      discrete_path_length(seed, std::max(64 * N, 4096), StepRule::Arc, options.parallel).total_length;

  std::vector<RealVector> grad = gradient(coords);
  std::vector<RealVector> prev_coords, prev_grad;
  double alpha = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const double gnorm2 = squared_norm(grad);
    if (gnorm2 == 0.0 || energy == 0.0) {
      result.converged = true;
      break;
    }
    // Barzilai-Borwein trial step, then halving until Armijo holds.
    if (!prev_coords.empty()) {
      std::vector<RealVector> s(points), y(points);
      for (std::size_t i = 1; i + 1 < points; ++i) {
        s[i] = coords[i] - prev_coords[i];
        y[i] = grad[i] - prev_grad[i];
      }
      s.front() = s.back() = y.front() = y.back() = RealVector::Zero(0);
      const double sy = dot(s, y);
      alpha = sy > 0.0 ? squared_norm(s) / sy : 2.0 * alpha;
    } else {
      alpha = 0.1 / std::sqrt(gnorm2);
    }

    bool accepted = false;
    std::vector<RealVector> trial(points);
    std::vector<Root> trial_roots;
    double trial_energy = energy;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t i = 1; i + 1 < points; ++i) trial[i] = coords[i] - alpha * grad[i];
      trial_roots = kernels::map_indexed<Root>(
          points - 2, [&](std::size_t k) { return model.root(trial[k + 1]); }, options.parallel);
      trial_energy = path.step_energy(path.roots().front(), trial_roots.front()) +
                     path.step_energy(trial_roots.back(), path.roots().back());
      for (std::size_t k = 0; k + 1 < trial_roots.size(); ++k) {
        trial_energy += path.step_energy(trial_roots[k], trial_roots[k + 1]);
      }
      if (trial_energy <= energy - options.armijo * alpha * gnorm2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No sufficient decrease is resolvable at finite-difference precision.
      result.converged = true;
      break;
    }

    prev_coords = coords;
    prev_grad = grad;
    for (std::size_t i = 1; i + 1 < points; ++i) {
      const double scale = trial[i].norm();
      coords[i] = trial[i] / scale;
      prev_coords[i] /= scale;  // keeps the BB secant consistent with the rescaled point
      path.set_root(i, std::move(trial_roots[i - 1]));
    }
    check_collapse();
    energy = trial_energy;
    record(iter + 1, energy);
    grad = gradient(coords);

    const auto& h = result.history;
    if (h.size() > static_cast<std::size_t>(options.window)) {
      const double before = h[h.size() - 1 - static_cast<std::size_t>(options.window)].energy;
      if (before - energy <= options.rel_tol * before) {
        result.converged = true;
        break;
      }
    }
  }
  result.iterations = static_cast<int>(result.history.size()) - 1;

  result.optimized_states.reserve(points);
  result.optimized_states.push_back(first);
  for (std::size_t i = 1; i + 1 < points; ++i) result.optimized_states.push_back(model.state(coords[i]));
  result.optimized_states.push_back(last);

  std::vector<double> chord_steps;
  for (std::size_t i = 0; i + 1 < points; ++i) {
    const double c = step_length(result.optimized_states[i], result.optimized_states[i + 1], StepRule::Chord);
    chord_steps.push_back(c);
    result.final_length += c;
    result.final_length_arc +=
        step_length(result.optimized_states[i], result.optimized_states[i + 1], StepRule::Arc);
  }
  result.final_energy = energy;
  result.step_cv = coefficient_of_variation(chord_steps);
  return result;
}

}  // namespace

PathOptimizationResult<ProbabilityDistribution> minimize_path(const ProbabilityDistribution& start,
                                                              const ProbabilityDistribution& end, int N,
                                                              const ClassicalPath& seed, const PathOptions& options) {
  check_options(options, N);
  if (start.dim() != end.dim() || seed.dim() != start.dim()) fail(ErrorCode::DimensionMismatch, "endpoint dimensions differ");
  if (start.dim() > 8) fail(ErrorCode::InvalidArgument, "classical path optimization supports d <= 8");
  const ClassicalModel model;
  return optimize<ClassicalModel, ProbabilityDistribution>(
      model, start, end, N, seed, options, [](const ProbabilityDistribution& p) { return p; });
}

PathOptimizationResult<DensityMatrix> minimize_path(const DensityMatrix& start, const DensityMatrix& end, int N,
                                                    const QuantumPath& seed, const PathOptions& options) {
  check_options(options, N);
  if (start.dim() != end.dim() || seed.dim() != start.dim()) fail(ErrorCode::DimensionMismatch, "endpoint dimensions differ");
  if (start.dim() > 4) fail(ErrorCode::InvalidArgument, "quantum path optimization supports d <= 4");
  if (options.ridge == 0.0) {
    for (const DensityMatrix* s : {&start, &end}) {
      if (eigenvalues_descending(s->matrix()).minCoeff() <= kCollapseFloor) {
        fail(ErrorCode::RankDeficient, "endpoint is not full rank; enable a ridge");
      }
    }
  }
  QuantumModel model;
  model.d = static_cast<Eigen::Index>(start.dim());
  const double ridge = options.ridge;
  return optimize<QuantumModel, DensityMatrix>(model, start, end, N, seed, options,
                                               [ridge](const DensityMatrix& r) { return with_ridge(r, ridge); });
}

}  // namespace fbt
