#include "loopcx/crossedmod.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "loopcx/errors.hpp"

namespace loopcx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExactTol = 1e-12;
constexpr double kCheckTol = 1e-10;

void require_kind(const CrossedModule& xm, const CextElement& a, const char* what) {
  if (a.model != xm.kind)
    throw ModelMismatch(std::string(what) + ": element from the other model");
}

std::string row_name(const char* stem, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%02zu", stem, i);
  return buf;
}

SampledLoop with_support(const SampledLoop& g, std::optional<std::pair<double, double>> sup) {
  return make_loop(g.spec, g.samples, g.based, sup, g.w);
}

// conjugation by a phase-zero lift of the doubled path; style selects the
// lift homotopy (the result is lift-phase independent, not style independent
// at finite grids, which is what check_action_uniqueness measures)
CextElement action_with_style(const CrossedModule& xm, LiftStyle style, const SampledPath& g,
                              const CextElement& phi) {
  require_kind(xm, phi, "canonical_action");
  const SampledLoop& base = base_of(phi);
  res(base);  // support gate: SupportViolation unless pi(phi) sits in (0, pi)
  const SampledLoop doubled = cup(make_path_pair(g, g));
  if (xm.kind == ExtModel::Cocycle) {
    const CocycleModelExt& m = *xm.base_c;
    const CextElement L = lift(m, doubled);
    CextElement out = mul(m, mul(m, L, phi), inv(m, L));
    if (base.support) out.loop = with_support(*out.loop, base.support);
    return out;
  }
  const PathModelExt& m = *xm.base_p;
  const CextElement L = lift(m, doubled, style);
  CextElement out = mul(m, mul(m, L, phi), inv(m, L));
  if (base.support) {
    std::vector<SampledLoop> rows = out.sheet->rows;
    rows.back() = with_support(rows.back(), base.support);
    out.sheet = make_sheet(std::move(rows));
  }
  return out;
}

// signed equivalence angle; callers take |.| where only the gap matters
double gap_between(const CrossedModule& xm, const CextElement& a, const CextElement& b) {
  if (xm.kind == ExtModel::Cocycle) return equivalence_angle(*xm.base_c, a, b);
  return equivalence_angle(*xm.base_p, a, b);
}

CextElement model_mul(const CrossedModule& xm, const CextElement& a, const CextElement& b) {
  if (xm.kind == ExtModel::Cocycle) return mul(*xm.base_c, a, b);
  return mul(*xm.base_p, a, b);
}

CextElement model_inv(const CrossedModule& xm, const CextElement& a) {
  if (xm.kind == ExtModel::Cocycle) return inv(*xm.base_c, a);
  return inv(*xm.base_p, a);
}

double central_phase(const CrossedModule& xm, const CextElement& a) {
  if (xm.kind == ExtModel::Cocycle) return phase_of_central(*xm.base_c, a);
  return phase_of_central(*xm.base_p, a);
}

}  // namespace

CrossedModule make_xmod(const CocycleModelExt& ext) {
  CrossedModule xm;
  xm.kind = ExtModel::Cocycle;
  xm.base_c = ext;
  xm.h_c = restrict_model(ext, {0.0, kPi}, 4);
  return xm;
}

CrossedModule make_xmod(const PathModelExt& ext, LiftStyle conj_style) {
  CrossedModule xm;
  xm.kind = ExtModel::Path;
  xm.base_p = ext;
  xm.h_p = restrict_model(ext, {0.0, kPi});
  xm.conj_style = conj_style;
  return xm;
}

namespace {

void gate_battery(const Report& rep) {
  for (const CheckResult& c : rep.checks) {
    if (!c.pass)
      throw NotDisjointCommutative("commutator battery fails at " + c.name +
                                   ": |pairing| = " + format_g12(c.measured) + " > " +
                                   format_g12(c.tol));
  }
}

}  // namespace

CrossedModule build_canonical_xmod(const CocycleModelExt& ext,
                                   const std::vector<std::pair<SampledLoop, SampledLoop>>& battery,
                                   double tol) {
  gate_battery(is_disjoint_commutative(ext, battery, tol));
  return make_xmod(ext);
}

CrossedModule build_canonical_xmod(const PathModelExt& ext,
                                   const std::vector<std::pair<SampledLoop, SampledLoop>>& battery,
                                   double tol, LiftStyle pairing_style) {
  gate_battery(is_disjoint_commutative(ext, battery, tol, pairing_style));
  return make_xmod(ext);
}

std::pair<SampledPath, SampledPath> st_maps(const CextElement& phi) {
  const SampledLoop& base = base_of(phi);
  const int n = base.N;
  const int half = n / 2;
  const Mat id = base.spec->identity();
  for (int k = 1; k <= base.w; ++k) {
    if ((base.at(k) - base.at(-k)).norm() > kExactTol ||
        (base.at(half + k) - base.at(half - k)).norm() > kExactTol)
      throw NotFlatAtPi("base loop is not flat at 0 and pi");
  }
  std::vector<Mat> t_samples(base.samples.begin(), base.samples.begin() + half + 1);
  std::vector<Mat> s_samples(half + 1);
  for (int j = 0; j <= half; ++j) s_samples[std::size_t(j)] = base.at(n - j);
  const bool ste = (base.samples[0] - id).norm() < kExactTol;
  SampledPath t_path = make_path(base.spec, std::move(t_samples), kPi, ste, base.w);
  SampledPath s_path = make_path(base.spec, std::move(s_samples), kPi, ste, base.w);
  return {std::move(s_path), std::move(t_path)};
}

SampledPath xmod_target(const CrossedModule& xm, const CextElement& phi) {
  require_kind(xm, phi, "xmod_target");
  return res(base_of(phi));
}

CextElement canonical_action(const CrossedModule& xm, const SampledPath& g,
                             const CextElement& phi) {
  return action_with_style(xm, xm.conj_style, g, phi);
}

Report check_equivariance(const CrossedModule& xm,
                          const std::vector<std::pair<SampledPath, CextElement>>& samples) {
  Report rep;
  rep.suite = "equivariance";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SampledPath& g = samples[i].first;
    const CextElement& phi = samples[i].second;
    const SampledPath lhs = xmod_target(xm, canonical_action(xm, g, phi));
    const SampledPath rhs =
        pointwise_mul(pointwise_mul(g, xmod_target(xm, phi)), pointwise_inv(g));
    rep.add(row_name("sample", i), max_deviation(lhs, rhs), kCheckTol);
  }
  return rep;
}

Report check_peiffer(const CrossedModule& xm,
                     const std::vector<std::pair<CextElement, CextElement>>& samples) {
  Report rep;
  rep.suite = "peiffer";
  const double tol = xmod_tol(xm);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CextElement& phi = samples[i].first;
    const CextElement& psi = samples[i].second;
    const CextElement lhs = canonical_action(xm, xmod_target(xm, psi), phi);
    const CextElement rhs = model_mul(xm, model_mul(xm, psi, phi), model_inv(xm, psi));
    rep.add(row_name("pair", i), std::abs(gap_between(xm, lhs, rhs)), tol);
  }
  return rep;
}

Report check_central(const CrossedModule& xm, const std::vector<SampledPath>& gs,
                     const std::vector<double>& phases) {
  Report rep;
  rep.suite = "centrality";
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const double theta = phases[i % phases.size()];
    CextElement z;
    if (xm.kind == ExtModel::Cocycle)
      z = with_phase(lift(*xm.base_c, const_loop(xm.base_c->spec, 2 * gs[i].M)), theta);
    else
      z = with_phase(unit_element(*xm.base_p), theta);
    const CextElement out = canonical_action(xm, gs[i], z);
    rep.add(row_name("sample", i), std::abs(angle_wrap(central_phase(xm, out) - theta)),
            kCheckTol);
  }
  return rep;
}

Report check_action_uniqueness(const CrossedModule& xm,
                               const std::vector<std::pair<SampledPath, CextElement>>& samples) {
  Report rep;
  rep.suite = "action-uniqueness";
  const double tol = xmod_tol(xm);
  const LiftStyle alt =
      xm.conj_style == LiftStyle::Geodesic ? LiftStyle::Thin : LiftStyle::Geodesic;
  std::vector<double> vals(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SampledPath& g = samples[i].first;
    const CextElement& phi = samples[i].second;
    vals[i] = angle_wrap(gap_between(xm, action_with_style(xm, alt, g, phi),
                                     canonical_action(xm, g, phi)));
    rep.add(row_name("vanish", i), std::abs(vals[i]), tol);
  }
  // homomorphism in the H slot, checked on consecutive samples sharing g
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (max_deviation(samples[i].first, samples[i + 1].first) > 0.0) continue;
    const SampledPath& g = samples[i].first;
    const CextElement prod = model_mul(xm, samples[i].second, samples[i + 1].second);
    const double both = angle_wrap(gap_between(xm, action_with_style(xm, alt, g, prod),
                                               canonical_action(xm, g, prod)));
    rep.add(row_name("hom", i), std::abs(angle_wrap(both - vals[i] - vals[i + 1])), 2.0 * tol);
  }
  return rep;
}

double xmod_tol(const CrossedModule& xm) {
  if (xm.kind == ExtModel::Cocycle) return kCheckTol;
  const double m = std::min(xm.base_p->M, xm.base_p->N);
  return 50.0 / (m * m);
}

}  // namespace loopcx
