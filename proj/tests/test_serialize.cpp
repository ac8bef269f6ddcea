#include <doctest.h>

#include <cmath>
#include <limits>

#include "fbt/serialize.hpp"
#include "helpers.hpp"

using namespace fbt;
using testing::dist;
using testing::error_of;

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.5) == "0.5");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::format_number(std::nan("")) == "nan");
  CHECK(io::format_number(1e-20) == "1e-20");
}

TEST_CASE("state round trips") {
  const auto p = dist({0.25, 0.75});
  const auto back = std::get<ProbabilityDistribution>(io::state_from_json(io::to_json(p)));
  CHECK(back == p);

  const auto rho = random_state(3, 2, 17);
  const auto qback = std::get<DensityMatrix>(io::state_from_json(io::to_json(rho)));
  CHECK(max_abs(qback.matrix() - rho.matrix()) == 0.0);

  CHECK(std::holds_alternative<ProbabilityDistribution>(io::state_from_json(io::Json::parse("[0.5, 0.5]"))));
  const auto bare = io::state_from_json(io::Json::parse("[[0.5, 0], [0, 0.5]]"));
  CHECK(std::holds_alternative<DensityMatrix>(bare));

  CHECK(error_of([] { io::state_from_json(io::Json::parse("[0.2, 0.2]")); }) == ErrorCode::NotNormalized);
  CHECK(error_of([] { io::state_from_json(io::Json::parse(R"({"kind":"classical","weights":[1],"x":1})")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(error_of([] { io::state_from_json(io::Json::parse(R"("text")")); }) == ErrorCode::InvalidConfig);
  CHECK(error_of([] { io::state_from_json(io::Json::parse("[[1, 0], [0]]")); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("csv layouts") {
  const auto path = classical_geodesic_path(dist({0.5, 0.5}), dist({0.9, 0.1}));
  const std::string lengths = io::to_csv(discrete_path_length(path, 4, StepRule::Arc));
  CHECK(lengths.rfind("i,t_i,delta_ell,cumulative_ell\n", 0) == 0);
  CHECK(lengths.back() == '\n');
  CHECK(lengths.find('\r') == std::string::npos);

  const auto report = run_transport(even_schedule(path, 4));
  CHECK(io::to_csv(report).rfind("i,delta_ell_i,yield_i\n", 0) == 0);
  CHECK(io::summary_csv(report).rfind("N,ell,Delta_S,bound_eq15,bound_eq16,nu\n", 0) == 0);

  const auto scan = convergence_scan(dist({0.5, 0.5}), dist({0.9, 0.1}), 3);
  CHECK(io::to_csv(scan).find("n,delta_S_n,gap_n\n") != std::string::npos);
  CHECK(io::history_csv({{0, 1.0, 2.0, 0.5}}) == "iter,length,energy,step_cv\n0,1,2,0.5\n");
}
