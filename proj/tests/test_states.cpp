#include <doctest.h>

#include <cmath>

#include "fbt/states.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fbt;
using testing::error_of;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("validate_distribution clips, renormalizes and rejects") {
  const auto half = validate_distribution({0.5, 0.5});
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);

  const auto clipped = validate_distribution({0.5, 0.5, -1e-13});
  CHECK(clipped.dim() == 3);
  CHECK(clipped[2] == 0.0);
  CHECK(clipped[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(clipped.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(error_of([] { validate_distribution({0.3, 0.3}); }) == ErrorCode::NotNormalized);
  CHECK(error_of([] { validate_distribution({1.1, -0.1}); }) == ErrorCode::NegativeWeight);
  CHECK(error_of([] { validate_distribution(RealVector()); }) == ErrorCode::EmptyState);
}

TEST_CASE("validate_density symmetrizes, clips and rejects") {
  const auto mixed = validate_density(Matrix::Identity(2, 2) / 2.0);
  CHECK(mixed.matrix() == Matrix(Matrix::Identity(2, 2) / 2.0));

  const auto clipped = validate_density(diag2(1.0, -1e-13));
  CHECK(clipped.matrix() == diag2(1.0, 0.0));

  CHECK(error_of([] { validate_density(diag2(0.7, 0.7)); }) == ErrorCode::NotUnitTrace);
  CHECK(error_of([] { validate_density(diag2(1.2, -0.2)); }) == ErrorCode::NotPositive);
  Matrix skew = diag2(0.5, 0.5);
  skew(0, 1) = 0.1;
  CHECK(error_of([&] { validate_density(skew); }) == ErrorCode::NotHermitian);
  CHECK(error_of([] { validate_density(Matrix::Zero(2, 3)); }) == ErrorCode::NotSquare);
}

TEST_CASE("re-validation is bit-identical") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 1 + static_cast<int>(seed % 6);
    const int rank = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(d));
    const auto rho = random_state(d, rank, seed);
    CHECK(validate_density(rho.matrix()) == rho);
    const auto p = random_distribution(d, seed);
    CHECK(validate_distribution(p.weights()) == p);
  }
  const auto clipped = validate_distribution({0.25, 0.75, -5e-13});
  CHECK(validate_distribution(clipped.weights()) == clipped);
}

TEST_CASE("spectral decomposition reconstructs with sorted eigenvalues") {
  for (int d : {1, 2, 5, 16, 64}) {
    const auto rho = random_state(d, d, 100 + d);
    const auto sd = spectral_decomposition(rho);
    CHECK(max_abs(sd.reconstruct() - rho.matrix()) <= 1e-10);
    const Matrix gram = sd.eigenvectors.adjoint() * sd.eigenvectors;
    CHECK(max_abs(gram - Matrix::Identity(d, d)) <= 1e-10);
    for (Eigen::Index i = 1; i < sd.eigenvalues.size(); ++i) CHECK(sd.eigenvalues[i - 1] >= sd.eigenvalues[i]);
  }
}

TEST_CASE("mat_sqrt") {
  CHECK(max_abs(mat_sqrt(validate_density(diag2(1.0, 0.0))) - diag2(1.0, 0.0)) <= 1e-15);
  CHECK(max_abs(mat_sqrt(validate_density(Matrix::Identity(2, 2) / 2.0)) - Matrix::Identity(2, 2) / std::sqrt(2.0)) <=
        1e-15);
  const Matrix root = mat_sqrt(validate_density(diag2(0.9, 0.1)));
  CHECK(root(0, 0).real() == doctest::Approx(0.94868329805051).epsilon(1e-12));
  CHECK(root(1, 1).real() == doctest::Approx(0.31622776601684).epsilon(1e-12));
  CHECK(max_abs(root * root - diag2(0.9, 0.1)) <= 1e-15);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 1 + static_cast<int>(seed % 16);
    const auto rho = random_state(d, 1 + static_cast<int>(seed % static_cast<std::uint64_t>(d)), seed);
    const Matrix s = mat_sqrt(rho);
    CHECK(max_abs(s * s - rho.matrix()) <= 1e-10);
    CHECK(max_abs(s - s.adjoint()) <= 1e-14);
  }
}

TEST_CASE("mat_log_on_support") {
  const auto mixed = mat_log_on_support(validate_density(Matrix::Identity(2, 2) / 2.0));
  CHECK(mixed.rank == 2);
  CHECK(max_abs(mixed.log - std::log(0.5) * Matrix::Identity(2, 2)) <= 1e-15);

  const auto pure = mat_log_on_support(validate_density(diag2(1.0, 0.0)));
  CHECK(pure.rank == 1);
  CHECK(max_abs(pure.projector - diag2(1.0, 0.0)) <= 1e-15);
  CHECK(max_abs(pure.log) <= 1e-15);

  const auto skew = mat_log_on_support(validate_density(diag2(0.9, 0.1)));
  CHECK(skew.log(0, 0).real() == doctest::Approx(-0.105360515658).epsilon(1e-11));
  CHECK(skew.log(1, 1).real() == doctest::Approx(-2.302585092994).epsilon(1e-11));

  CHECK_THROWS_AS(mat_log_on_support(validate_density(diag2(0.9, 0.1)), 0.0), Error);
}

TEST_CASE("entropies") {
  CHECK(von_neumann_entropy(random_state(3, 1, 7)) == doctest::Approx(0.0).epsilon(1e-12));
  for (int d : {1, 2, 3, 8}) {
    CHECK(von_neumann_entropy(validate_density(Matrix::Identity(d, d) / static_cast<double>(d))) ==
          doctest::Approx(std::log(d)).epsilon(1e-13));
    std::vector<double> uniform(static_cast<std::size_t>(d), 1.0 / d);
    CHECK(shannon_entropy(validate_distribution(uniform)) == doctest::Approx(std::log(d)).epsilon(1e-13));
  }
  const double expected = oracle::shannon({0.9, 0.1});
  CHECK(expected == doctest::Approx(0.325082973391).epsilon(1e-11));
  CHECK(von_neumann_entropy(validate_density(diag2(0.9, 0.1))) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(shannon_entropy(validate_distribution({0.9, 0.1})) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(shannon_entropy(validate_distribution({1.0, 0.0})) == 0.0);
}

TEST_CASE("entropy invariants on random states") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int da = 1 + static_cast<int>(seed % 4), db = 1 + static_cast<int>((seed / 4) % 4);
    const auto a = random_state(da, 1 + static_cast<int>(seed % static_cast<std::uint64_t>(da)), seed);
    const auto b = random_state(db, db, seed + 1000);
    const RealVector ev = eigenvalues_descending(a.matrix());
    const std::vector<double> evs(ev.data(), ev.data() + ev.size());
    CHECK(std::abs(von_neumann_entropy(a) - oracle::shannon(evs)) <= 1e-12);
    const double sum = von_neumann_entropy(a) + von_neumann_entropy(b);
    CHECK(std::abs(von_neumann_entropy(tensor_product(a, b)) - sum) <= 1e-9);
    CHECK(von_neumann_entropy(a) <= std::log(da) + 1e-12);
  }
}

TEST_CASE("tensor products") {
  const auto e0 = validate_density(diag2(1.0, 0.0));
  Matrix e00 = Matrix::Zero(4, 4);
  e00(0, 0) = 1.0;
  CHECK(tensor_product(e0, e0).matrix() == e00);

  const auto half = validate_density(Matrix::Identity(2, 2) / 2.0);
  CHECK(max_abs(tensor_product(half, half).matrix() - Matrix::Identity(4, 4) / 4.0) == 0.0);

  const auto a = validate_density(diag2(0.3, 0.7)), b = validate_density(diag2(0.6, 0.4));
  const Matrix ab = tensor_product(a, b).matrix();
  CHECK(ab(0, 0).real() == doctest::Approx(0.18));
  CHECK(ab(1, 1).real() == doctest::Approx(0.12));
  CHECK(ab(2, 2).real() == doctest::Approx(0.42));
  CHECK(ab(3, 3).real() == doctest::Approx(0.28));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = random_state(2, 2, seed), y = random_state(3, 2, seed + 1), z = random_state(2, 1, seed + 2);
    const Matrix left = tensor_product(tensor_product(x, y), z).matrix();
    const Matrix right = tensor_product(x, tensor_product(y, z)).matrix();
    CHECK(max_abs(left - right) <= 1e-12);
    CHECK(std::abs(tensor_product(x, y).matrix().trace().real() - 1.0) <= 1e-14);
  }

  CHECK(error_of([&] { tensor_product(random_state(64, 64, 1), random_state(65, 65, 2)); }) == ErrorCode::DimensionCap);
  CHECK(tensor_product(half, half, 4).dim() == 4);
  CHECK(error_of([&] { tensor_product(half, half, 3); }) == ErrorCode::DimensionCap);
  CHECK(tensor_power(half, 0).dim() == 1);
  CHECK(error_of([&] { tensor_power(half, 13); }) == ErrorCode::DimensionCap);
}

TEST_CASE("random_state contract") {
  const auto pure = random_state(2, 1, 42);
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));
  const auto full = random_state(3, 3, 42);
  CHECK(eigenvalues_descending(full.matrix()).minCoeff() > 0.0);
  CHECK(random_state(3, 2, 9) == random_state(3, 2, 9));
  CHECK_FALSE(random_state(3, 2, 9) == random_state(3, 2, 10));
  CHECK(error_of([] { random_state(2, 3, 0); }) == ErrorCode::BadRank);
  CHECK(error_of([] { random_state(2, 0, 0); }) == ErrorCode::BadRank);
}

TEST_CASE("tangent perturbations and ridge") {
  CHECK_NOTHROW(ClassicalTangent::make(RealVector::Map(std::vector<double>{1.0, -1.0}.data(), 2)));
  CHECK(error_of([] { ClassicalTangent::make(RealVector::Ones(2)); }) == ErrorCode::NotTangent);
  Matrix traced = diag2(1.0, 1.0);
  CHECK(error_of([&] { QuantumTangent::make(traced); }) == ErrorCode::NotTangent);
  const auto t = random_tangent(3, 5);
  CHECK(std::abs(t.delta().trace()) <= 1e-14);
  CHECK(max_abs(t.delta() - t.delta().adjoint()) == 0.0);

  const auto pure = validate_density(diag2(1.0, 0.0));
  const auto ridged = with_ridge(pure, 1e-6);
  CHECK(ridged.matrix()(1, 1).real() == doctest::Approx(0.5e-6 / (1 + 1e-6)));
  CHECK(std::abs(ridged.matrix().trace().real() - 1.0) <= 1e-15);
  CHECK(with_ridge(pure, 0.0) == pure);
}
