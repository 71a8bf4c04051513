#pragma once

#include <string>
#include <vector>

namespace loopcx {

// One verification check: `measured` is the observed gap or value,
// `tol` the pinned tolerance it was held against.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string witness;  // empty when the check has no counterexample to show
};

struct Report {
  std::string suite;
  std::vector<CheckResult> checks;

  // pass = measured <= tol (and finite)
  void add(const std::string& name, double measured, double tol, std::string witness = {});
  void add_result(CheckResult r);
  void absorb(const Report& other);  // append other's checks, names prefixed by its suite
  bool all_pass() const;

  // {"suite": ..., "checks": [{"name", "measured", "tol", "pass", "witness"?}]}
  // Numbers are written with fixed %.12g so reruns are byte-identical.
  std::string to_json() const;
  std::string to_csv() const;
};

// fixed %.12g rendering used by every report writer
std::string format_g12(double x);

}  // namespace loopcx
