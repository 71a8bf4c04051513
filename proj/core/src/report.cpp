#include "loopcx/report.hpp"

#include <cmath>
#include <cstdio>

namespace loopcx {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void Report::add(const std::string& name, double measured, double tol, std::string witness) {
  CheckResult r;
  r.name = name;
  r.measured = measured;
  r.tol = tol;
  r.pass = std::isfinite(measured) && measured <= tol;
  r.witness = std::move(witness);
  checks.push_back(std::move(r));
}

void Report::add_result(CheckResult r) { checks.push_back(std::move(r)); }

void Report::absorb(const Report& other) {
  for (CheckResult c : other.checks) {
    c.name = other.suite + "/" + c.name;
    checks.push_back(std::move(c));
  }
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  std::string out = "{\"suite\":\"" + escape(suite) + "\",\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (i) out += ",";
    out += "{\"name\":\"" + escape(c.name) + "\"";
    out += ",\"measured\":" + format_g12(c.measured);
    out += ",\"tol\":" + format_g12(c.tol);
    out += std::string(",\"pass\":") + (c.pass ? "true" : "false");
    if (!c.witness.empty()) out += ",\"witness\":\"" + escape(c.witness) + "\"";
    out += "}";
  }
  out += "]}\n";
  return out;
}

std::string Report::to_csv() const {
  std::string out = "suite,name,measured,tol,pass,witness\n";
  for (const auto& c : checks) {
    out += csv_field(suite) + "," + csv_field(c.name) + "," + format_g12(c.measured) + "," +
           format_g12(c.tol) + "," + (c.pass ? "true" : "false") + "," + csv_field(c.witness) +
           "\n";
  }
  return out;
}

}  // namespace loopcx
