#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbt/serialize.hpp"

namespace fbt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitResourceCap = 3;
inline constexpr int kExitNotConverged = 4;

/// Overrides the dense composite-dimension cap of the reservoir experiment.
inline constexpr const char* kDimensionCapEnv = "FBT_DIMENSION_CAP";

enum class Format { Csv, Json };

struct RunContext {
  std::uint64_t seed = 0;
  bool seed_from_flag = false;
  Format format = Format::Csv;
  std::optional<std::string> out_path;
  std::string config_dir = ".";  ///< base for relative {"file": ...} references
  std::size_t dimension_cap = kDefaultDimensionCap;
};

struct CommandResult {
  int status = kExitOk;
  std::string output;  ///< the primary document (CSV or JSON)
  std::vector<std::pair<std::string, std::string>> extra_files;
  std::string message;  ///< diagnostic for stderr
};

CommandResult cmd_fidelity(const io::Json& config, const RunContext& ctx);
CommandResult cmd_transport(const io::Json& config, const RunContext& ctx);
CommandResult cmd_reservoir(const io::Json& config, const RunContext& ctx);
CommandResult cmd_geodesic(const io::Json& config, const RunContext& ctx);
CommandResult cmd_probe(const io::Json& config, const RunContext& ctx);

/// Runs one subcommand and maps library errors onto exit statuses
/// (2 invalid input, 3 resource cap, 4 not converged).
CommandResult dispatch(const std::string& command, const io::Json& config, const RunContext& ctx);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string config_hash(const io::Json& resolved);

/// Reads kDimensionCapEnv; falls back to the library default.
std::size_t dimension_cap_from_env();

/// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fbt::cli
