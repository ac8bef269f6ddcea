#pragma once

#include <doctest.h>

#include <vector>

#include "fbt/errors.hpp"
#include "fbt/states.hpp"

namespace testing {

template <class Fn>
fbt::ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const fbt::Error& e) {
    return e.code();
  }
  FAIL("expected an fbt::Error");
  return fbt::ErrorCode::InvalidArgument;
}

inline fbt::RealVector vec(const std::vector<double>& v) {
  return fbt::RealVector::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const fbt::RealVector& v) { return {v.data(), v.data() + v.size()}; }

inline fbt::ProbabilityDistribution dist(const std::vector<double>& v) { return fbt::validate_distribution(vec(v)); }

inline fbt::DensityMatrix diag(const std::vector<double>& v) { return fbt::diagonal_state(dist(v)); }

inline fbt::ClassicalTangent ctangent(const std::vector<double>& v) { return fbt::ClassicalTangent::make(vec(v)); }

}  // namespace testing
