#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ousig/ou_process.hpp"

namespace ousig {

enum class Command { compute, limit, sweep, mc, check };

/// Resolved run configuration: flat key=value file plus CLI overrides.
struct RunConfig {
  Command command = Command::compute;
  ModelParams params;
  double t = 1.0;
  std::vector<double> m_grid;  // sweep
  int sweep_level = 0;         // sweep
  std::int64_t paths = 100'000;
  int steps = 2000;
  std::uint64_t seed = 1;
  bool drift_free = false;
  int threads = 0;
  std::string out;
  std::string format = "json";
};

/// Raw key=value view of a config file; '#' starts a comment.
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Parse and validate the keys `command` needs. Errors name the offending
/// key. Matrix syntax is row-major with ';' between rows: M = 1,2;-2,1.
RunConfig parse_config(const std::string& path, Command command);

Matrix parse_matrix(const std::string& text, int expected_dim);
std::vector<double> parse_number_list(const std::string& text);

}  // namespace ousig
