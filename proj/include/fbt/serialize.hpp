#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "fbt/geometry.hpp"
#include "fbt/pathopt.hpp"
#include "fbt/reservoir.hpp"
#include "fbt/states.hpp"
#include "fbt/transport.hpp"

namespace fbt::io {

using Json = nlohmann::json;
using AnyState = std::variant<ProbabilityDistribution, DensityMatrix>;

/// 12 significant digits, '.' decimal point; "inf", "-inf" and "nan" spelled out.
std::string format_number(double v);

// States: {"kind": "classical", "weights": [...]} or
//         {"kind": "quantum", "matrix": [[[re, im], ...], ...]}.
Json to_json(const ProbabilityDistribution& p);
Json to_json(const DensityMatrix& rho);
Json to_json(const AnyState& s);

/// Accepts the tagged object above, a bare array of reals (classical) or a
/// bare array of rows (quantum; entries [re, im] pairs or reals). Throws the
/// validation error of the offending invariant, or InvalidConfig on shape.
AnyState state_from_json(const Json& j);
RealVector real_vector_from_json(const Json& j);
Matrix complex_matrix_from_json(const Json& j);

// CSV tables. Each ends with a newline; LF only.

/// i, t_i, delta_ell, cumulative_ell (one row per step).
std::string to_csv(const PathLengthReport& report);
template <class State>
std::string to_csv(const TransportSchedule<State>& schedule);

/// i, delta_ell_i, yield_i followed by a blank line and the summary record
/// N, ell, Delta_S, bound_eq15, bound_eq16, nu.
std::string to_csv(const TransportReport& report);
std::string summary_csv(const TransportReport& report);

/// "# reference_S=...,mode=..." then n, delta_S_n, gap_n.
std::string to_csv(const ReservoirScanResult& scan);

/// iter, length, energy, step_cv.
std::string history_csv(const std::vector<PathIteration>& history);

/// eps, relative_entropy, metric_element, kubo_mori_element, hellinger_element, metric_ratio, kubo_mori_ratio.
std::string to_csv(const ProbeTable& table);

Json to_json(const PathLengthReport& report);
Json to_json(const TransportReport& report);
Json to_json(const ReservoirScanResult& scan);
Json to_json(const ProbeTable& table);
Json to_json(const std::vector<PathIteration>& history);

/// JSON numbers cannot hold inf/nan; these become the strings used in CSV.
Json number(double v);

}  // namespace fbt::io
