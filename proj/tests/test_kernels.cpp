#include <doctest.h>

#include <omp.h>

#include <random>
#include <stdexcept>

#include "fbt/kernels.hpp"
#include "fbt/states.hpp"
#include "oracles.hpp"

using namespace fbt;
namespace k = fbt::kernels;

namespace {

std::vector<double> random_probabilities(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double total = 0;
  for (auto& x : v) total += (x = e(gen));
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace

TEST_CASE("map_indexed keeps order and reports the lowest failing index") {
  const auto squares = k::map_indexed<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == static_cast<int>(i * i));

  auto failing = [](std::size_t i) -> int {
    if (i == 7 || i == 40) throw std::runtime_error("bad " + std::to_string(i));
    return 0;
  };
  for (bool parallel : {true, false}) {
    try {
      k::map_indexed<int>(64, failing, parallel);
      FAIL("expected exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "bad 7");
    }
  }
  CHECK(k::map_indexed<int>(0, failing).empty());
}

TEST_CASE("sum and entropy agree with the serial twins and ignore the thread count") {
  for (std::size_t n : {1u, 10u, 4096u, 4097u, 100000u}) {
    const auto v = random_probabilities(n, n);
    CHECK(k::sum(v) == doctest::Approx(k::serial::sum(v)).epsilon(1e-14));
    CHECK(k::entropy(v, 0.0) == doctest::Approx(k::serial::entropy(v, 0.0)).epsilon(1e-14));
    CHECK(k::entropy(v, 0.0) == doctest::Approx(oracle::shannon(v)).epsilon(1e-12));

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double one = k::entropy(v, 0.0);
    omp_set_num_threads(4);
    const double four = k::entropy(v, 0.0);
    omp_set_num_threads(saved);
    CHECK(one == four);
  }
  const std::vector<double> with_zero{0.5, 0.5, 0.0};
  CHECK(k::entropy(with_zero, 1e-14) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("kron matches the oracle and its serial twin") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Matrix a = random_state(2 + static_cast<int>(seed % 3), 2, seed).matrix();
    const Matrix b = random_state(1 + static_cast<int>(seed % 4), 1, seed + 50).matrix();
    const Matrix ref = oracle::kron(a, b);
    CHECK(k::kron(a, b) == k::serial::kron(a, b));
    CHECK(max_abs(k::kron(a, b) - ref) == 0.0);
  }
}

TEST_CASE("twirl matches permutation conjugation and the serial twin") {
  for (int d : {2, 3}) {
    for (int n : {1, 2, 3, 4}) {
      if (d == 3 && n == 4) continue;
      const Matrix rho = random_state(d, d, 11 * d + n).matrix();
      const Matrix sigma = random_state(d, d, 13 * d + n).matrix();
      const Matrix fast = k::twirl(rho, sigma, n);
      CHECK(max_abs(fast - oracle::twirl_by_permutation(rho, sigma, n)) <= 1e-15);
      CHECK(max_abs(fast - k::serial::twirl(rho, sigma, n)) <= 1e-15);
      CHECK(std::abs(fast.trace() - std::complex<double>(1.0)) <= 1e-13);
    }
  }
}

TEST_CASE("placement_mixture matches brute-force enumeration") {
  for (int d : {2, 3, 4}) {
    for (int n : {1, 2, 3, 5}) {
      const auto p = random_probabilities(static_cast<std::size_t>(d), 7 * d + n);
      const auto q = random_probabilities(static_cast<std::size_t>(d), 9 * d + n);
      const auto fast = k::placement_mixture(p, q, n);
      const auto slow = k::serial::placement_mixture(p, q, n);
      const auto ref = oracle::placement_mixture(p, q, n);
      REQUIRE(fast.size() == ref.size());
      double total = 0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(fast[i] == doctest::Approx(ref[i]).epsilon(1e-13));
        CHECK(slow[i] == doctest::Approx(ref[i]).epsilon(1e-13));
        total += fast[i];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}
