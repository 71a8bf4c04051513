#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "loopcx/abelcoh.hpp"
#include "loopcx/centralext.hpp"
#include "loopcx/config.hpp"
#include "loopcx/errors.hpp"
#include "loopcx/loopspace.hpp"
#include "loopcx/report.hpp"
#include "loopcx/suites.hpp"

namespace {

struct RawOpts {
  std::string config_path;
  std::string suite;
  std::string group, rank, level, grid, pgrid, seed, pairs;
  std::string cocycle, lift, format, out, threads, torsion;
  std::string input;  // commutator loops file
};

void add_model_options(CLI::App* sub, RawOpts& o) {
  sub->add_option("--config", o.config_path, "key=value configuration file");
  sub->add_option("--group", o.group, "su2 | sun | son | u1 | rplus | u1xu1");
  sub->add_option("--rank", o.rank, "n for sun / son");
  sub->add_option("--level", o.level, "extension level");
  sub->add_option("--grid", o.grid, "loop grid as N or M,N (powers of two >= 32)");
  sub->add_option("--pgrid", o.pgrid, "resolution for period integrals");
  sub->add_option("--seed", o.seed, "64-bit seed for randomized batteries");
  sub->add_option("--pairs", o.pairs, "battery size for randomized checks");
  sub->add_option("--cocycle", o.cocycle, "trivial | rplus | rplus(s,t) | label-bilinear");
  sub->add_option("--lift", o.lift, "geodesic | thin | swept");
  sub->add_option("--format", o.format, "json | csv");
  sub->add_option("--out", o.out, "report file (default stdout)");
  sub->add_option("--threads", o.threads, "worker cap, 0 = LOOPCX_THREADS / hardware");
  sub->add_option("--torsion-group", o.torsion, "comma separated cyclic orders");
}

loopcx::RunConfig build_cfg(const RawOpts& o) {
  loopcx::RunConfig cfg;
  // the suite must be known before the file is applied so that [section]
  // blocks resolve against what will actually run
  if (!o.suite.empty()) cfg.suite = o.suite;
  if (!o.config_path.empty())
    loopcx::apply_config_map(cfg, loopcx::parse_config_file(o.config_path));
  if (!o.suite.empty()) cfg.suite = o.suite;
  auto put = [&cfg](const char* key, const std::string& v) {
    if (!v.empty()) loopcx::apply_kv(cfg, key, v);
  };
  put("group", o.group);
  put("rank", o.rank);
  put("level", o.level);
  if (!o.grid.empty()) {
    int m = 0, n = 0;
    if (std::sscanf(o.grid.c_str(), "%d,%d", &m, &n) == 2) {
      cfg.grid_m = m;
      cfg.grid_n = n;
    } else if (std::sscanf(o.grid.c_str(), "%d", &n) == 1) {
      cfg.grid_m = n;
      cfg.grid_n = n;
    } else {
      throw loopcx::ConfigError("bad --grid value: " + o.grid);
    }
  }
  put("pgrid", o.pgrid);
  put("seed", o.seed);
  put("pairs", o.pairs);
  put("cocycle", o.cocycle);
  put("lift", o.lift);
  put("format", o.format);
  put("out", o.out);
  put("threads", o.threads);
  put("torsion_group", o.torsion);
  if (cfg.threads > 0)
    setenv("LOOPCX_THREADS", std::to_string(cfg.threads).c_str(), 1);
  return cfg;
}

int write_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open output file " << out << "\n";
    return 2;
  }
  f << text;
  return 0;
}

int emit(const loopcx::Report& rep, const loopcx::RunConfig& cfg) {
  const std::string text = cfg.format == "csv" ? rep.to_csv() : rep.to_json();
  const int io = write_text(text, cfg.out);
  if (io != 0) return io;
  return rep.all_pass() ? 0 : 1;
}

int run_commutator(const loopcx::RunConfig& cfg, const std::string& input) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw loopcx::ConfigError("cannot open loops file " + input);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::string header = "pair,phase,expected,tol,pass\n";
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    return write_text(header, cfg.out);

  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw loopcx::ConfigError("loops file must hold a JSON array");
  const loopcx::SpecPtr spec = loopcx::spec_from_config(cfg);
  std::vector<loopcx::SampledLoop> loops;
  loops.reserve(doc.size());
  for (const auto& elem : doc) loops.push_back(loopcx::loop_from_json(spec, elem.dump()));
  if (loops.empty()) return write_text(header, cfg.out);
  if (loops.size() % 2 != 0)
    throw loopcx::ConfigError("loops file must hold an even number of loops");

  const bool path = loopcx::path_model_group(cfg);
  std::optional<loopcx::PathModelExt> pm;
  std::optional<loopcx::CocycleModelExt> cm;
  double tol = 1e-12;
  if (path) {
    pm = loopcx::make_path_model(spec, cfg.level, cfg.grid_m, loops[0].N);
    const double m = std::min(cfg.grid_m, loops[0].N);
    tol = 50.0 / (m * m);
  } else {
    cm = loopcx::cocycle_model_from_config(cfg);
  }
  const loopcx::LiftStyle style = loopcx::lift_from_config(cfg);

  double rs = 1.0, rt = 4.5;
  const bool rplus_c = !path && cfg.cocycle.rfind("rplus", 0) == 0;
  if (rplus_c && cfg.cocycle != "rplus")
    std::sscanf(cfg.cocycle.c_str(), "rplus(%lf,%lf)", &rs, &rt);
  const bool label_c = !path && cfg.cocycle == "label-bilinear";

  std::string out = header;
  bool all_pass = true;
  for (std::size_t i = 0; i + 1 < loops.size(); i += 2) {
    const loopcx::SampledLoop& g = loops[i];
    const loopcx::SampledLoop& h = loops[i + 1];
    const double phase =
        path ? loopcx::commutator_pairing(*pm, g, h, style) : loopcx::commutator_pairing(*cm, g, h);
    double expected = 0.0;
    if (rplus_c) {
      expected = loopcx::rplus_pairing_closed_form(rs, rt, g, h);
    } else if (label_c) {
      const loopcx::AbElem a = cm->cl(g);
      const loopcx::AbElem b = cm->cl(h);
      const std::int64_t q = std::gcd(cm->labels->orders[0], cm->labels->orders[1]);
      expected = loopcx::RootOfUnity::make(a[0] * b[1] - a[1] * b[0], q).angle();
    }
    const double gap = std::abs(loopcx::angle_wrap(phase - expected));
    const bool pass = gap <= tol;
    all_pass = all_pass && pass;
    out += std::to_string(i / 2) + "," + loopcx::format_g12(phase) + "," +
           loopcx::format_g12(expected) + "," + loopcx::format_g12(tol) + "," +
           (pass ? "true" : "false") + "\n";
  }
  const int io = write_text(out, cfg.out);
  if (io != 0) return io;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for central extensions of loop groups"};
  app.require_subcommand(1);
  RawOpts o;

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", o.suite,
                     "loopspace | cocycles | centralext | abelcoh | xmod | twogroup | fusion | "
                     "comparison | all");
  add_model_options(verify, o);

  CLI::App* comm = app.add_subcommand(
      "commutator", "pairing phases for disjointly supported loop pairs from a JSON file");
  comm->add_option("input", o.input, "JSON array of sampled loops, taken in consecutive pairs")
      ->required();
  add_model_options(comm, o);

  CLI::App* periods = app.add_subcommand("periods", "holonomy period integrals across grids");
  add_model_options(periods, o);

  CLI::App* torsion =
      app.add_subcommand("torsion", "two-torsion quotient of the skew bihomomorphisms");
  torsion->add_option("orders", o.torsion, "comma separated cyclic orders, e.g. 4,6");
  add_model_options(torsion, o);

  CLI::App* table = app.add_subcommand("table", "run a suite and emit its table as CSV");
  table->add_option("suite", o.suite,
                    "suite name as for verify, or periods | torsion");
  add_model_options(table, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    loopcx::RunConfig cfg = build_cfg(o);
    if (verify->parsed()) return emit(loopcx::run_suite(cfg), cfg);
    if (comm->parsed()) {
      loopcx::validate(cfg);
      return run_commutator(cfg, o.input);
    }
    if (periods->parsed()) {
      loopcx::validate(cfg);
      return emit(loopcx::run_periods(cfg), cfg);
    }
    if (torsion->parsed()) {
      loopcx::validate(cfg);
      return emit(loopcx::run_torsion(cfg), cfg);
    }
    if (table->parsed()) {
      cfg.format = "csv";
      if (cfg.suite == "periods") {
        loopcx::validate(cfg);
        return emit(loopcx::run_periods(cfg), cfg);
      }
      if (cfg.suite == "torsion") {
        loopcx::validate(cfg);
        return emit(loopcx::run_torsion(cfg), cfg);
      }
      return emit(loopcx::run_suite(cfg), cfg);
    }
  } catch (const loopcx::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const loopcx::LoopcxError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
