#include "ousig/config.hpp"

#include <fstream>
#include <sstream>

namespace ousig {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" +
                      text + "'");
  }
}

long long to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" +
                      text + "'");
  }
}

struct KeyValues {
  std::map<std::string, std::string> kv;
  std::string path;

  const std::string& require(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError("config file " + path + ": missing required key '" +
                        key + "'");
    return it->second;
  }
  std::optional<std::string> optional(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  }
};

}  // namespace

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError(path + ": duplicate key '" + key + "'");
    kv[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in number list");
    out.push_back(to_double("<list>", item));
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

Matrix parse_matrix(const std::string& text, int expected_dim) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_number_list(row));
  const int d = static_cast<int>(rows.size());
  if (d != expected_dim)
    throw ConfigError("config key 'M': got " + std::to_string(d) +
                      " rows, expected d = " + std::to_string(expected_dim));
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw ConfigError("config key 'M': row " + std::to_string(i + 1) +
                        " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(d));
    for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RunConfig parse_config(const std::string& path, Command command) {
  KeyValues cfg{read_key_values(path), path};
  RunConfig run;
  run.command = command;

  const int d = static_cast<int>(to_int("d", cfg.require("d")));
  if (d < 1) throw ConfigError("config key 'd': must be >= 1");
  run.params.M = parse_matrix(cfg.require("M"), d);
  run.params.N = static_cast<int>(to_int("N", cfg.require("N")));

  const std::vector<double> p = parse_number_list(cfg.require("p"));
  if (static_cast<int>(p.size()) != d)
    throw ConfigError("config key 'p': got " + std::to_string(p.size()) +
                      " entries, expected d = " + std::to_string(d));
  run.params.p = Eigen::Map<const Vector>(p.data(), d);

  run.t = to_double("t", cfg.require("t"));
  if (!(run.t > 0)) throw ConfigError("config key 't': must be positive");

  const bool needs_mass =
      command == Command::compute || command == Command::mc ||
      command == Command::check;
  if (needs_mass) {
    run.params.m = to_double("m", cfg.require("m"));
    if (!(run.params.m > 0))
      throw ConfigError("config key 'm': must be positive");
  } else if (auto m = cfg.optional("m")) {
    run.params.m = to_double("m", *m);
  }

  if (command == Command::sweep) {
    run.m_grid = parse_number_list(cfg.require("m_grid"));
    run.sweep_level = static_cast<int>(to_int("n", cfg.require("n")));
    if (run.sweep_level < 0 || run.sweep_level > run.params.N)
      throw ConfigError("config key 'n': must be in [0, N]");
  }
  if (command == Command::mc) {
    run.paths = to_int("paths", cfg.require("paths"));
    run.steps = static_cast<int>(to_int("steps", cfg.require("steps")));
    if (auto s = cfg.optional("seed"))
      run.seed = static_cast<std::uint64_t>(to_int("seed", *s));
    if (auto m = cfg.optional("drift")) {
      if (*m == "none")
        run.drift_free = true;
      else if (*m == "ou")
        run.drift_free = false;
      else
        throw ConfigError("config key 'drift': expected 'ou' or 'none'");
    }
  }
  if (auto th = cfg.optional("threads"))
    run.threads = static_cast<int>(to_int("threads", *th));
  return run;
}

}  // namespace ousig
