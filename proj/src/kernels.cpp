#include "fbt/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fbt::kernels {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// digits[I * n + s] is the slot-s digit of composite index I, slot 0 most significant.
std::vector<int> digit_table(std::size_t d, int n) {
  const std::size_t total = ipow(d, n);
  std::vector<int> digits(total * static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int s = n - 1; s >= 0; --s) {
      digits[idx * n + s] = static_cast<int>(rest % d);
      rest /= d;
    }
  }
  return digits;
}

template <class Entry>
double chunked_sum(std::size_t count, Entry entry) {
  const std::size_t chunks = (count + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nchunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kSumChunk;
    const std::size_t hi = std::min(count, lo + kSumChunk);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += entry(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

void check_twirl_args(Eigen::Index rho_dim, Eigen::Index sigma_dim, int n) {
  if (n < 1) throw std::invalid_argument("twirl needs n >= 1");
  if (rho_dim != sigma_dim) throw std::invalid_argument("twirl factors differ in dimension");
}

}  // namespace

double sum(std::span<const double> values) {
  return chunked_sum(values.size(), [&](std::size_t i) { return values[i]; });
}

double entropy(std::span<const double> probabilities, double floor) {
  return chunked_sum(probabilities.size(), [&](std::size_t i) {
    const double v = probabilities[i];
    return v > floor ? -v * std::log(v) : 0.0;
  });
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index rb = b.rows(), cb = b.cols();
  Matrix out(a.rows() * rb, a.cols() * cb);
  const auto cols = static_cast<long long>(a.cols());
#pragma omp parallel for schedule(static)
  for (long long j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

Matrix twirl(const Matrix& rho, const Matrix& sigma, int n) {
  check_twirl_args(rho.rows(), sigma.rows(), n);
  const auto d = static_cast<std::size_t>(rho.rows());
  const std::size_t dim = ipow(d, n);
  const std::vector<int> digits = digit_table(d, n);
  const double weight = 1.0 / n;
  Matrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto ncols = static_cast<long long>(dim);
#pragma omp parallel
  {
    std::vector<std::complex<double>> prefix(n + 1), suffix(n + 1);
#pragma omp for schedule(static)
    for (long long col = 0; col < ncols; ++col) {
      const int* jd = &digits[static_cast<std::size_t>(col) * n];
      for (std::size_t row = 0; row < dim; ++row) {
        const int* id = &digits[row * n];
        prefix[0] = 1.0;
        for (int s = 0; s < n; ++s) prefix[s + 1] = prefix[s] * sigma(id[s], jd[s]);
        suffix[n] = 1.0;
        for (int s = n - 1; s >= 0; --s) suffix[s] = sigma(id[s], jd[s]) * suffix[s + 1];
        std::complex<double> acc = 0.0;
        for (int k = 0; k < n; ++k) acc += prefix[k] * rho(id[k], jd[k]) * suffix[k + 1];
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = weight * acc;
      }
    }
  }
  return out;
}

std::vector<double> placement_mixture(std::span<const double> p, std::span<const double> q, int n) {
  check_twirl_args(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(q.size()), n);
  const std::size_t d = p.size();
  const std::size_t dim = ipow(d, n);
  const double weight = 1.0 / n;
  std::vector<double> out(dim);
  const auto total = static_cast<long long>(dim);
#pragma omp parallel
  {
    std::vector<int> idx(n);
    std::vector<double> prefix(n + 1), suffix(n + 1);
#pragma omp for schedule(static)
    for (long long flat = 0; flat < total; ++flat) {
      auto rest = static_cast<std::size_t>(flat);
      for (int s = n - 1; s >= 0; --s) {
        idx[s] = static_cast<int>(rest % d);
        rest /= d;
      }
      prefix[0] = 1.0;
      for (int s = 0; s < n; ++s) prefix[s + 1] = prefix[s] * q[idx[s]];
      suffix[n] = 1.0;
      for (int s = n - 1; s >= 0; --s) suffix[s] = q[idx[s]] * suffix[s + 1];
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += prefix[k] * p[idx[k]] * suffix[k + 1];
      out[static_cast<std::size_t>(flat)] = weight * acc;
    }
  }
  return out;
}

namespace serial {

double sum(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

double entropy(std::span<const double> probabilities, double floor) {
  double acc = 0.0;
  for (double v : probabilities) {
    if (v > floor) acc -= v * std::log(v);
  }
  return acc;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

Matrix twirl(const Matrix& rho, const Matrix& sigma, int n) {
  check_twirl_args(rho.rows(), sigma.rows(), n);
  Matrix acc;
  for (int k = 0; k < n; ++k) {
    Matrix term = Matrix::Ones(1, 1);
    for (int s = 0; s < n; ++s) term = kron(term, s == k ? rho : sigma);
    if (k == 0) {
      acc = term;
    } else {
      acc += term;
    }
  }
  return acc / static_cast<double>(n);
}

std::vector<double> placement_mixture(std::span<const double> p, std::span<const double> q, int n) {
  check_twirl_args(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(q.size()), n);
  std::vector<double> acc;
  for (int k = 0; k < n; ++k) {
    std::vector<double> term{1.0};
    for (int s = 0; s < n; ++s) {
      const auto factor = s == k ? p : q;
      std::vector<double> next;
      next.reserve(term.size() * factor.size());
      for (double a : term)
        for (double b : factor) next.push_back(a * b);
      term = std::move(next);
    }
    if (acc.empty()) acc.assign(term.size(), 0.0);
    for (std::size_t i = 0; i < term.size(); ++i) acc[i] += term[i];
  }
  for (double& v : acc) v /= n;
  return acc;
}

}  // namespace serial

}  // namespace fbt::kernels
