#pragma once

// Data-parallel inner loops. Every kernel has a plain serial twin under
// fbt::kernels::serial that is kept as the reference implementation for the
// tests and the benchmark target.

#include <complex>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fbt::kernels {

using Matrix = Eigen::MatrixXcd;

/// Partial sums are taken over fixed-size chunks so the result does not
/// depend on the number of threads.
inline constexpr std::size_t kSumChunk = 4096;

/// Evaluates fn(i) for i in [0, count) and returns the results in index
/// order. If several indices throw, the exception of the lowest index wins.
template <class T, class Fn>
std::vector<T> map_indexed(std::size_t count, Fn&& fn, bool parallel = true) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) if (parallel && count > 1)
  for (long long i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double sum(std::span<const double> values);

/// -sum v ln v over entries above floor.
double entropy(std::span<const double> probabilities, double floor);

Matrix kron(const Matrix& a, const Matrix& b);

/// (1/n) sum_k sigma^{(x)k} (x) rho (x) sigma^{(x)(n-k-1)}, built entrywise.
Matrix twirl(const Matrix& rho, const Matrix& sigma, int n);

/// Diagonal analogue of twirl on probability vectors.
std::vector<double> placement_mixture(std::span<const double> p, std::span<const double> q, int n);

namespace serial {

double sum(std::span<const double> values);
double entropy(std::span<const double> probabilities, double floor);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix twirl(const Matrix& rho, const Matrix& sigma, int n);
std::vector<double> placement_mixture(std::span<const double> p, std::span<const double> q, int n);

}  // namespace serial

}  // namespace fbt::kernels
