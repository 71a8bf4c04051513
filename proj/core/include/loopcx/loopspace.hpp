#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopcx/liegroup.hpp"

namespace loopcx {

// Discretized loop: samples at t_j = 2*pi*j/N, j = 0..N-1, N a power of two.
// support = (a, b) asserts identity samples outside (a, b). Flat points are
// modeled by sitting instants: samples constant over `w` grid steps on each
// side of every declared flat point.
struct SampledLoop {
  SpecPtr spec;
  int N = 0;
  std::vector<Mat> samples;
  bool based = false;
  std::optional<std::pair<double, double>> support;
  int w = 0;

  double t_at(int j) const;
  const Mat& at(int j) const { return samples[((j % N) + N) % N]; }
};

// Discretized path: samples at x_j = domain*j/M, j = 0..M (M+1 values).
// domain is pi for genuine paths and 2*pi for relabeled ones (rep output).
struct SampledPath {
  SpecPtr spec;
  int M = 0;
  double domain = 0.0;
  std::vector<Mat> samples;
  bool starts_at_e = false;
  int w = 0;
};

// Two paths sharing their endpoint value at the far end.
struct PathPair {
  SampledPath first;
  SampledPath second;
};

int default_window(int N);
bool power_of_two(int n);

// validated constructors; they check membership of every sample, support
// soundness, basedness and sitting instants
SampledLoop make_loop(const SpecPtr& spec, std::vector<Mat> samples, bool based = false,
                      std::optional<std::pair<double, double>> support = std::nullopt,
                      int w = -1);
SampledPath make_path(const SpecPtr& spec, std::vector<Mat> samples, double domain,
                      bool starts_at_e = true, int w = -1);
PathPair make_path_pair(SampledPath first, SampledPath second);  // EndpointMismatch

SampledLoop const_loop(const SpecPtr& spec, int N);
SampledPath const_path(const SpecPtr& spec, int M, double domain);

// glue: t in [0,pi] follows first, t in [pi,2pi] follows second reversed
SampledLoop cup(const PathPair& p);

SampledLoop pointwise_mul(const SampledLoop& a, const SampledLoop& b);
SampledPath pointwise_mul(const SampledPath& a, const SampledPath& b);
SampledLoop pointwise_inv(const SampledLoop& a);
SampledPath pointwise_inv(const SampledPath& a);

// pullback along t -> -t
SampledLoop flip(const SampledLoop& g);

// domain relabeling [0,pi] -> [0,2pi]: rep(g)(x) = g(x/2), same sample array
SampledPath rep(const SampledPath& g);

// restriction of a loop supported in (0,pi) to [0,pi]
SampledPath res(const SampledLoop& g);

// rep(res(g)) folded back to a loop on the half grid (drops the duplicate
// closing sample). Defined exactly for loops supported in (0,pi).
SampledLoop half_grid_loop(const SampledLoop& g);

// closed path (endpoint equals start to 1e-10) reread as a loop
SampledLoop loop_from_closed_path(const SampledPath& p);

double max_deviation(const SampledLoop& a, const SampledLoop& b);  // GridMismatch
double max_deviation(const SampledPath& a, const SampledPath& b);

// Flat-function factorization. Input: strictly increasing grid t with
// t[0] = 0 and samples f with f[0] = 0, flat at 0 in the discrete sense
// |f(t_j)| <= t_j^n on an initial segment for every n <= n_max. Output:
// g1 * g2 = f pointwise, both factors flat to order n_max/2.
struct FlatFactorization {
  std::vector<double> g1;
  std::vector<double> g2;
  std::vector<double> envelope;
};
FlatFactorization flat_factorize(const std::vector<double>& t, const std::vector<double>& f,
                                 int n_max = 12);

// largest order n <= n_cap for which |f(t_j)| <= t_j^n holds on a nonempty
// initial segment of positive grid points
int star_order(const std::vector<double>& t, const std::vector<double>& f, int n_cap);

// serialization
std::string loop_to_json(const SampledLoop& g);
SampledLoop loop_from_json(const SpecPtr& spec, const std::string& text);
SampledLoop loop_from_csv(const SpecPtr& spec, const std::string& text);  // scalar groups

}  // namespace loopcx
