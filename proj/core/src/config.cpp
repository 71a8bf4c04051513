#include "loopcx/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "loopcx/errors.hpp"

namespace loopcx {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool power_of_two_(int n) { return n > 0 && (n & (n - 1)) == 0; }

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("value for " + key + " is not an integer: " + v);
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("value for " + key + " is not a number: " + v);
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = val;
  }
  return kv;
}

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "suite") cfg.suite = value;
  else if (key == "group") cfg.group = value;
  else if (key == "rank") cfg.rank = static_cast<int>(to_long(key, value));
  else if (key == "level") cfg.level = to_double(key, value);
  else if (key == "grid_m") cfg.grid_m = static_cast<int>(to_long(key, value));
  else if (key == "grid_n") cfg.grid_n = static_cast<int>(to_long(key, value));
  else if (key == "pgrid") cfg.pgrid = static_cast<int>(to_long(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, value));
  else if (key == "pairs") cfg.pairs = static_cast<int>(to_long(key, value));
  else if (key == "cocycle") cfg.cocycle = value;
  else if (key == "lift") cfg.lift = value;
  else if (key == "format") cfg.format = value;
  else if (key == "out") cfg.out = value;
  else if (key == "threads") cfg.threads = static_cast<int>(to_long(key, value));
  else if (key == "torsion_group") cfg.torsion_group = value;
  else throw ConfigError("unknown configuration key: " + key);
}

void apply_config_map(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  // unsectioned keys first, then the section matching the current suite
  for (const auto& [k, v] : kv)
    if (k.find('.') == std::string::npos) apply_kv(cfg, k, v);
  const std::string prefix = cfg.suite + ".";
  for (const auto& [k, v] : kv) {
    if (k.rfind(prefix, 0) == 0) apply_kv(cfg, k.substr(prefix.size()), v);
    else if (k.find('.') != std::string::npos) {
      std::string section = k.substr(0, k.find('.'));
      static const std::set<std::string> known = {
          "loopspace", "cocycles", "centralext", "abelcoh", "xmod",
          "twogroup",  "fusion",   "comparison", "all"};
      if (!known.count(section)) throw ConfigError("unknown config section: " + section);
    }
  }
}

void validate(const RunConfig& cfg) {
  static const std::set<std::string> suites = {"loopspace", "cocycles", "centralext", "abelcoh",
                                               "xmod", "twogroup", "fusion", "comparison", "all"};
  if (!suites.count(cfg.suite)) throw ConfigError("unknown suite: " + cfg.suite);
  static const std::set<std::string> groups = {"su2", "sun", "son", "u1", "rplus", "u1xu1"};
  if (!groups.count(cfg.group)) throw ConfigError("unknown group: " + cfg.group);
  if (cfg.group == "sun" || cfg.group == "son") {
    if (cfg.rank < 2 || cfg.rank > 8) throw ConfigError("rank must be in [2, 8]");
  }
  if (!std::isfinite(cfg.level)) throw ConfigError("level must be finite");
  if (!power_of_two_(cfg.grid_m) || cfg.grid_m < 32)
    throw ConfigError("grid_m must be a power of two, at least 32");
  if (!power_of_two_(cfg.grid_n) || cfg.grid_n < 32)
    throw ConfigError("grid_n must be a power of two, at least 32");
  if (cfg.pgrid < 8 || cfg.pgrid > 4096) throw ConfigError("pgrid must be in [8, 4096]");
  if (cfg.pairs < 1 || cfg.pairs > 10000) throw ConfigError("pairs must be in [1, 10000]");
  static const std::set<std::string> lifts = {"geodesic", "thin", "swept"};
  if (!lifts.count(cfg.lift)) throw ConfigError("unknown lift style: " + cfg.lift);
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json or csv");
  if (cfg.threads < 0 || cfg.threads > 256) throw ConfigError("threads must be in [0, 256]");
  std::istringstream ts(cfg.torsion_group);
  std::string tok;
  while (std::getline(ts, tok, ',')) {
    long n = to_long("torsion_group", trim(tok));
    if (n < 1) throw ConfigError("torsion_group orders must be positive");
  }
}

}  // namespace loopcx
