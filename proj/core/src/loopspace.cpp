#include "loopcx/loopspace.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace loopcx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kExactTol = 1e-12;   // invariant checks
constexpr double kGlueTol = 1e-10;    // endpoint agreement

bool near(const Mat& a, const Mat& b, double tol) { return (a - b).norm() < tol; }

void check_flat_loop(const std::vector<Mat>& s, int N, int j0, int w, const char* what) {
  for (int k = 1; k <= w; ++k) {
    if (!near(s[(j0 + k) % N], s[j0], kExactTol) ||
        !near(s[((j0 - k) % N + N) % N], s[j0], kExactTol))
      throw NotFlat(std::string(what) + ": samples not constant over the sitting window");
  }
}

void check_flat_path_ends(const std::vector<Mat>& s, int M, int w) {
  for (int k = 1; k <= std::min(w, M); ++k) {
    if (!near(s[k], s[0], kExactTol))
      throw NotFlat("path start: samples not constant over the sitting window");
    if (!near(s[M - k], s[M], kExactTol))
      throw NotFlat("path end: samples not constant over the sitting window");
  }
}

}  // namespace

double SampledLoop::t_at(int j) const { return kTwoPi * j / N; }

int default_window(int N) { return std::max(2, static_cast<int>(std::ceil(0.05 * N))); }

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

SampledLoop make_loop(const SpecPtr& spec, std::vector<Mat> samples, bool based,
                      std::optional<std::pair<double, double>> support, int w) {
  SampledLoop g;
  g.spec = spec;
  g.N = static_cast<int>(samples.size());
  if (g.N < 4 || !power_of_two(g.N))
    throw GridMismatch("loop grid must be a power of two, at least 4");
  g.w = w < 0 ? default_window(g.N) : w;
  for (const Mat& s : samples)
    if (!spec->contains_point(s)) throw NotInGroup("loop sample leaves " + spec->name);
  if (based) {
    if (!near(samples[0], spec->identity(), kExactTol))
      throw NotBased("based loop must start at the identity");
    check_flat_loop(samples, g.N, 0, g.w, "based loop at 0");
  }
  if (support) {
    auto [a, b] = *support;
    if (!(0.0 < a && a < b && b < kTwoPi))
      throw SupportViolation("support interval must satisfy 0 < a < b < 2*pi");
    for (int j = 0; j < g.N; ++j) {
      double t = kTwoPi * j / g.N;
      if ((t <= a || t >= b) && !near(samples[j], spec->identity(), kExactTol))
        throw SupportViolation("sample outside the declared support is not the identity");
    }
  }
  g.based = based;
  g.support = support;
  g.samples = std::move(samples);
  return g;
}

SampledPath make_path(const SpecPtr& spec, std::vector<Mat> samples, double domain,
                      bool starts_at_e, int w) {
  SampledPath p;
  p.spec = spec;
  p.M = static_cast<int>(samples.size()) - 1;
  if (p.M < 2 || !power_of_two(p.M))
    throw GridMismatch("path grid must be a power of two, at least 2");
  if (!(domain > 0.0)) throw GridMismatch("path domain length must be positive");
  p.domain = domain;
  p.w = w < 0 ? default_window(2 * p.M) : w;
  for (const Mat& s : samples)
    if (!spec->contains_point(s)) throw NotInGroup("path sample leaves " + spec->name);
  if (starts_at_e && !near(samples[0], spec->identity(), kExactTol))
    throw NotBased("path must start at the identity");
  check_flat_path_ends(samples, p.M, p.w);
  p.starts_at_e = starts_at_e;
  p.samples = std::move(samples);
  return p;
}

PathPair make_path_pair(SampledPath first, SampledPath second) {
  if (!first.spec->same(*second.spec)) throw TagMismatch("path pair over different specs");
  if (first.M != second.M || first.domain != second.domain)
    throw GridMismatch("path pair on different grids");
  if (!near(first.samples[first.M], second.samples[second.M], kGlueTol))
    throw EndpointMismatch("paths do not share their endpoint");
  return PathPair{std::move(first), std::move(second)};
}

SampledLoop const_loop(const SpecPtr& spec, int N) {
  return make_loop(spec, std::vector<Mat>(N, spec->identity()), true);
}

SampledPath const_path(const SpecPtr& spec, int M, double domain) {
  return make_path(spec, std::vector<Mat>(M + 1, spec->identity()), domain, true);
}

SampledLoop cup(const PathPair& p) {
  const SampledPath& g1 = p.first;
  const SampledPath& g2 = p.second;
  if (std::abs(g1.domain - kPi) > kExactTol)
    throw GridMismatch("cup needs paths on [0, pi]");
  if (!near(g1.samples[g1.M], g2.samples[g2.M], kGlueTol))
    throw EndpointMismatch("cup: paths do not share their endpoint");
  const int M = g1.M;
  const int N = 2 * M;
  std::vector<Mat> s(N);
  for (int j = 0; j <= M; ++j) s[j] = g1.samples[j];
  for (int j = M + 1; j < N; ++j) s[j] = g2.samples[N - j];
  int w = std::min(g1.w, g2.w);
  SampledLoop out = make_loop(g1.spec, std::move(s), g1.starts_at_e && g2.starts_at_e,
                              std::nullopt, w);
  check_flat_loop(out.samples, N, M, w, "cup seam at pi");
  return out;
}

SampledLoop pointwise_mul(const SampledLoop& a, const SampledLoop& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("pointwise_mul over different specs");
  if (a.N != b.N) throw GridMismatch("pointwise_mul on different grids");
  std::vector<Mat> s(a.N);
  for (int j = 0; j < a.N; ++j) s[j] = a.samples[j] * b.samples[j];
  std::optional<std::pair<double, double>> support;
  if (a.support && b.support)
    support = std::make_pair(std::min(a.support->first, b.support->first),
                             std::max(a.support->second, b.support->second));
  return make_loop(a.spec, std::move(s), a.based && b.based, support, std::min(a.w, b.w));
}

SampledPath pointwise_mul(const SampledPath& a, const SampledPath& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("pointwise_mul over different specs");
  if (a.M != b.M || a.domain != b.domain) throw GridMismatch("pointwise_mul on different grids");
  std::vector<Mat> s(a.M + 1);
  for (int j = 0; j <= a.M; ++j) s[j] = a.samples[j] * b.samples[j];
  return make_path(a.spec, std::move(s), a.domain, a.starts_at_e && b.starts_at_e,
                   std::min(a.w, b.w));
}

SampledLoop pointwise_inv(const SampledLoop& a) {
  std::vector<Mat> s(a.N);
  for (int j = 0; j < a.N; ++j) s[j] = a.samples[j].inverse();
  return make_loop(a.spec, std::move(s), a.based, a.support, a.w);
}

SampledPath pointwise_inv(const SampledPath& a) {
  std::vector<Mat> s(a.M + 1);
  for (int j = 0; j <= a.M; ++j) s[j] = a.samples[j].inverse();
  return make_path(a.spec, std::move(s), a.domain, a.starts_at_e, a.w);
}

SampledLoop flip(const SampledLoop& g) {
  std::vector<Mat> s(g.N);
  for (int j = 0; j < g.N; ++j) s[j] = g.samples[(g.N - j) % g.N];
  std::optional<std::pair<double, double>> support;
  if (g.support) support = std::make_pair(kTwoPi - g.support->second, kTwoPi - g.support->first);
  return make_loop(g.spec, std::move(s), g.based, support, g.w);
}

SampledPath rep(const SampledPath& g) {
  SampledPath out = g;
  out.domain = 2.0 * g.domain;
  return out;
}

SampledPath res(const SampledLoop& g) {
  if (g.support && !(g.support->first > 0.0 && g.support->second <= kPi))
    throw SupportViolation("res needs support inside (0, pi)");
  for (int j = 0; j < g.N; ++j) {
    double t = g.t_at(j);
    if ((j == 0 || t >= kPi) && !near(g.samples[j], g.spec->identity(), kExactTol))
      throw SupportViolation("res: loop has samples outside (0, pi)");
  }
  std::vector<Mat> s(g.samples.begin(), g.samples.begin() + g.N / 2 + 1);
  return make_path(g.spec, std::move(s), kPi, true, g.w);
}

SampledLoop half_grid_loop(const SampledLoop& g) {
  SampledPath r = rep(res(g));
  std::vector<Mat> s(r.samples.begin(), r.samples.end() - 1);
  std::optional<std::pair<double, double>> support;
  if (g.support) support = std::make_pair(2.0 * g.support->first, 2.0 * g.support->second);
  // the sitting window that actually survives on the half grid
  const int half = static_cast<int>(s.size());
  int w = 0;
  while (w < default_window(half) &&
         near(s[(w + 1) % half], s[0], kExactTol) &&
         near(s[(half - w - 1) % half], s[0], kExactTol))
    ++w;
  if (w == 0) throw NotFlat("half-grid loop loses its sitting instant at 0");
  return make_loop(g.spec, std::move(s), true, support, w);
}

SampledLoop loop_from_closed_path(const SampledPath& p) {
  if (!near(p.samples[p.M], p.samples[0], kGlueTol))
    throw EndpointMismatch("path endpoint does not return to its start");
  std::vector<Mat> s(p.samples.begin(), p.samples.end() - 1);
  return make_loop(p.spec, std::move(s), p.starts_at_e, std::nullopt,
                   std::min(p.w, default_window(p.M)));
}

double max_deviation(const SampledLoop& a, const SampledLoop& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("max_deviation over different specs");
  if (a.N != b.N) throw GridMismatch("max_deviation on different grids");
  double m = 0.0;
  for (int j = 0; j < a.N; ++j) m = std::max(m, (a.samples[j] - b.samples[j]).norm());
  return m;
}

double max_deviation(const SampledPath& a, const SampledPath& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("max_deviation over different specs");
  if (a.M != b.M || a.domain != b.domain) throw GridMismatch("max_deviation on different grids");
  double m = 0.0;
  for (int j = 0; j <= a.M; ++j) m = std::max(m, (a.samples[j] - b.samples[j]).norm());
  return m;
}

int star_order(const std::vector<double>& t, const std::vector<double>& f, int n_cap) {
  // order n passes when |f| <= t^n on a nonempty initial run of positive
  // grid points; relative slack because exp(n log t) and pow(t, n) can
  // disagree by n*log(t) ulps for factors sitting exactly on the envelope
  int best = 0;
  for (int n = 1; n <= n_cap; ++n) {
    if (t.size() < 2 || std::abs(f[1]) > std::pow(t[1], n) * (1.0 + 1e-12)) break;
    best = n;
  }
  return best;
}

FlatFactorization flat_factorize(const std::vector<double>& t, const std::vector<double>& f,
                                 int n_max) {
  const std::size_t K = t.size();
  if (K < 3 || f.size() != K) throw GridMismatch("flat_factorize needs matching grids, >= 3 points");
  if (t[0] != 0.0) throw GridMismatch("flat_factorize grid must start at 0");
  for (std::size_t j = 1; j < K; ++j)
    if (!(t[j] > t[j - 1])) throw GridMismatch("flat_factorize grid must be strictly increasing");
  if (std::abs(f[0]) > 1e-15) throw NotFlat("f(0) must vanish");
  if (n_max < 2) n_max = 2;
  if (n_max % 2) ++n_max;

  // eps_n: largest grid point up to which |f| <= t^n holds from the origin
  std::vector<double> eps(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    std::size_t j = 1;
    while (j < K && std::abs(f[j]) <= std::pow(t[j], n)) ++j;
    if (j == 1)
      throw NotFlat("star property fails at order " + std::to_string(n));
    eps[n] = t[j - 1];
    if (n > 1) eps[n] = std::min(eps[n], eps[n - 1]);
  }

  // exponent profile: n at log(eps_n), cubic-blended between consecutive
  // anchors, clamped to n_max below the last anchor
  auto exponent_at = [&](double tau) {
    if (tau >= std::log(eps[1])) return 1.0;
    for (int n = 1; n < n_max; ++n) {
      double hi = std::log(eps[n]);
      double lo = std::log(eps[n + 1]);
      if (tau >= lo && tau < hi) {
        double x = (hi - tau) / (hi - lo);
        double s = x * x * (3.0 - 2.0 * x);
        return n + s;
      }
    }
    return static_cast<double>(n_max);
  };

  FlatFactorization out;
  out.g1.assign(K, 0.0);
  out.g2.assign(K, 0.0);
  out.envelope.assign(K, 0.0);
  for (std::size_t j = 1; j < K; ++j) {
    double tau = std::log(t[j]);
    double h = std::exp(exponent_at(tau) * tau);
    out.envelope[j] = h;
    out.g2[j] = std::sqrt(h);
    out.g1[j] = f[j] / out.g2[j];
  }
  return out;
}

std::string loop_to_json(const SampledLoop& g) {
  nlohmann::json j;
  j["group"] = g.spec->name;
  j["N"] = g.N;
  j["based"] = g.based;
  j["w"] = g.w;
  if (g.support)
    j["support"] = {g.support->first, g.support->second};
  else
    j["support"] = nullptr;
  nlohmann::json samples = nlohmann::json::array();
  for (const Mat& s : g.samples) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < s.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < s.cols(); ++c) row.push_back({s(r, c).real(), s(r, c).imag()});
      rows.push_back(row);
    }
    samples.push_back(rows);
  }
  j["samples"] = std::move(samples);
  return j.dump();
}

SampledLoop loop_from_json(const SpecPtr& spec, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("group").get<std::string>() != spec->name)
    throw TagMismatch("serialized loop group " + j.at("group").get<std::string>() +
                      " does not match " + spec->name);
  int N = j.at("N").get<int>();
  std::vector<Mat> samples;
  samples.reserve(N);
  for (const auto& sj : j.at("samples")) {
    Mat m(spec->dim, spec->dim);
    for (int r = 0; r < spec->dim; ++r)
      for (int c = 0; c < spec->dim; ++c)
        m(r, c) = cplx(sj.at(r).at(c).at(0).get<double>(), sj.at(r).at(c).at(1).get<double>());
    samples.push_back(std::move(m));
  }
  if (static_cast<int>(samples.size()) != N) throw GridMismatch("sample count differs from N");
  std::optional<std::pair<double, double>> support;
  if (!j.at("support").is_null())
    support = std::make_pair(j["support"].at(0).get<double>(), j["support"].at(1).get<double>());
  return make_loop(spec, std::move(samples), j.at("based").get<bool>(), support,
                   j.at("w").get<int>());
}

SampledLoop loop_from_csv(const SpecPtr& spec, const std::string& text) {
  if (spec->dim != 1) throw TagMismatch("CSV import is defined for scalar groups only");
  std::vector<Mat> samples;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    double re = 0.0, im = 0.0;
    char comma = 0;
    std::istringstream row(line);
    row >> re;
    if (row >> comma >> im && comma != ',') throw ConfigError("bad CSV row: " + line);
    Mat m(1, 1);
    m(0, 0) = cplx(re, im);
    samples.push_back(std::move(m));
  }
  return make_loop(spec, std::move(samples));
}

}  // namespace loopcx
