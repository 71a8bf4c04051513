#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace loopcx {

// Run configuration shared by the CLI and the suite runners. Precedence:
// command line > config file > defaults.
struct RunConfig {
  std::string suite = "all";
  std::string group = "su2";
  int rank = 2;  // n for sun / son
  double level = 1.0;
  int grid_m = 64;   // sheet rows (path direction)
  int grid_n = 64;   // loop samples
  int pgrid = 96;    // resolution for the period integral (need not be a power of two)
  std::uint64_t seed = 1;
  int pairs = 12;    // battery size for randomized checks
  std::string cocycle = "trivial";
  std::string lift = "swept";
  std::string format = "json";  // json | csv
  std::string out;              // empty = stdout
  int threads = 0;              // 0 = LOOPCX_THREADS / hardware
  std::string torsion_group = "2,2,4";
};

// key=value file with optional [section] headers; keys in a [section] apply
// only when section matches the configured suite. '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_config_map(RunConfig& cfg, const std::map<std::string, std::string>& kv);

// throws ConfigError on bad values (loop grids must be powers of two >= 32)
void validate(const RunConfig& cfg);

}  // namespace loopcx
