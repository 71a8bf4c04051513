#include "loopcx/twogroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "loopcx/errors.hpp"
#include "loopcx/report.hpp"

namespace loopcx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGlueTol = 1e-10;
constexpr double kBranchGuard = 1e-6;

ExtModel model_of(const TwoGroup& tg) {
  if (tg.kind == TwoGroup::Kind::Semidirect) return tg.xm->kind;
  return tg.ff->model;
}

const CocycleModelExt& cm_of(const TwoGroup& tg) {
  return tg.kind == TwoGroup::Kind::Semidirect ? *tg.xm->base_c : *tg.ff->cm;
}

const PathModelExt& pm_of(const TwoGroup& tg) {
  return tg.kind == TwoGroup::Kind::Semidirect ? *tg.xm->base_p : *tg.ff->pm;
}

CextElement el_mul(const TwoGroup& tg, const CextElement& a, const CextElement& b) {
  if (model_of(tg) == ExtModel::Cocycle) return mul(cm_of(tg), a, b);
  return mul(pm_of(tg), a, b);
}

CextElement el_inv(const TwoGroup& tg, const CextElement& a) {
  if (model_of(tg) == ExtModel::Cocycle) return inv(cm_of(tg), a);
  return inv(pm_of(tg), a);
}

double el_gap(const TwoGroup& tg, const CextElement& a, const CextElement& b) {
  if (model_of(tg) == ExtModel::Cocycle) return std::abs(equivalence_angle(cm_of(tg), a, b));
  return std::abs(equivalence_angle(pm_of(tg), a, b));
}

const CextElement& kernel_part(const Morph& x, const char* what) {
  if (!x.h) throw ModelMismatch(std::string(what) + ": morphism carries no kernel element");
  return *x.h;
}

const SampledPath& object_part(const Morph& x, const char* what) {
  if (!x.g) throw ModelMismatch(std::string(what) + ": morphism carries no object path");
  return *x.g;
}

// ---- fusion factorization internals ------------------------------------

SampledPath shrink_path(const SampledPath& g, double s) {
  std::vector<Mat> out(std::size_t(g.M) + 1);
  for (int j = 0; j <= g.M; ++j)
    out[std::size_t(j)] = mexp(s * mlog(g.samples[std::size_t(j)]));
  return make_path(g.spec, std::move(out), g.domain, g.starts_at_e, g.w);
}

struct FusionKit {
  std::function<CextElement(const SampledPath&)> lift_doubled;
  std::function<CextElement(const CextElement&)> flip_cover;
  std::function<CextElement(const CextElement&, const CextElement&)> mul;
  std::function<CextElement(const CextElement&)> inv;
  std::function<double(const CextElement&)> central;
};

// i(g): lift of cup(g, g), phase z solving z^2 = exp(i w0) with
// w0 the central phase of lift^{-1} flip_cover(lift); the two square roots
// are separated by tracking the branch along the contraction of g
CextElement fusion_lift(const FusionKit& kit, const SampledPath& g) {
  double prev = 0.0;
  CextElement out;
  for (double s : {0.25, 0.5, 0.75, 1.0}) {
    const SampledPath gs = s == 1.0 ? g : shrink_path(g, s);
    const CextElement phi = kit.lift_doubled(gs);
    const double w0 = kit.central(kit.mul(kit.inv(phi), kit.flip_cover(phi)));
    const double c0 = angle_wrap(w0 / 2.0);
    const double d0 = std::abs(angle_wrap(c0 - prev));
    if (std::abs(d0 - kPi / 2.0) < kBranchGuard)
      throw SignBranchAmbiguous("sign branch undecidable at contraction step " +
                                format_g12(s));
    const double pick = d0 < kPi / 2.0 ? c0 : angle_wrap(c0 + kPi);
    prev = pick;
    if (s == 1.0) out = with_phase(phi, pick);
  }
  return out;
}

}  // namespace

TwoGroup from_crossed_module(const CrossedModule& xm) {
  TwoGroup tg;
  tg.kind = TwoGroup::Kind::Semidirect;
  tg.xm = xm;
  return tg;
}

CrossedModule to_crossed_module(const TwoGroup& tg) {
  if (tg.kind == TwoGroup::Kind::Semidirect) return *tg.xm;
  if (tg.ff->model == ExtModel::Cocycle) return make_xmod(*tg.ff->cm);
  return make_xmod(*tg.ff->pm);
}

SampledPath source(const TwoGroup& tg, const Morph& x) {
  if (tg.kind == TwoGroup::Kind::Semidirect) return object_part(x, "source");
  return st_maps(kernel_part(x, "source")).first;
}

SampledPath target(const TwoGroup& tg, const Morph& x) {
  if (tg.kind == TwoGroup::Kind::Semidirect) {
    const SampledPath th = xmod_target(*tg.xm, kernel_part(x, "target"));
    return pointwise_mul(th, object_part(x, "target"));
  }
  return st_maps(kernel_part(x, "target")).second;
}

Morph identity_morph(const TwoGroup& tg, const SampledPath& g) {
  Morph m;
  if (tg.kind == TwoGroup::Kind::Fusion) {
    m.h = tg.ff->i(g);
    return m;
  }
  if (tg.xm->kind == ExtModel::Cocycle)
    m.h = lift(*tg.xm->base_c, const_loop(tg.xm->base_c->spec, 2 * g.M));
  else
    m.h = unit_element(*tg.xm->base_p);
  m.g = g;
  return m;
}

Morph mul_morph(const TwoGroup& tg, const Morph& a, const Morph& b) {
  Morph m;
  if (tg.kind == TwoGroup::Kind::Fusion) {
    m.h = el_mul(tg, kernel_part(a, "mul_morph"), kernel_part(b, "mul_morph"));
    return m;
  }
  const SampledPath& ga = object_part(a, "mul_morph");
  m.h = el_mul(tg, kernel_part(a, "mul_morph"),
               canonical_action(*tg.xm, ga, kernel_part(b, "mul_morph")));
  m.g = pointwise_mul(ga, object_part(b, "mul_morph"));
  return m;
}

Morph inv_morph(const TwoGroup& tg, const Morph& a) {
  Morph m;
  if (tg.kind == TwoGroup::Kind::Fusion) {
    m.h = el_inv(tg, kernel_part(a, "inv_morph"));
    return m;
  }
  const SampledPath gi = pointwise_inv(object_part(a, "inv_morph"));
  m.h = canonical_action(*tg.xm, gi, el_inv(tg, kernel_part(a, "inv_morph")));
  m.g = gi;
  return m;
}

Morph compose(const TwoGroup& tg, const Morph& x, const Morph& y) {
  const SampledPath sx = source(tg, x);
  const double dev = max_deviation(sx, target(tg, y));
  if (dev > kGlueTol)
    throw NotComposable("source and target differ by " + format_g12(dev));
  return mul_morph(tg, mul_morph(tg, x, inv_morph(tg, identity_morph(tg, sx))), y);
}

Morph invert_morphism(const TwoGroup& tg, const Morph& x) {
  const Morph a = identity_morph(tg, source(tg, x));
  const Morph b = identity_morph(tg, target(tg, x));
  return mul_morph(tg, mul_morph(tg, a, inv_morph(tg, x)), b);
}

double morph_gap(const TwoGroup& tg, const Morph& a, const Morph& b) {
  if (tg.kind == TwoGroup::Kind::Semidirect) {
    const double dev = max_deviation(object_part(a, "morph_gap"), object_part(b, "morph_gap"));
    if (dev > kGlueTol)
      throw NotComparable("morphisms sit over different object paths (max deviation " +
                          format_g12(dev) + ")");
  }
  return el_gap(tg, kernel_part(a, "morph_gap"), kernel_part(b, "morph_gap"));
}

Morph counit(const TwoGroup& tg, const Morph& x) {
  const SampledPath sx = source(tg, x);
  const Morph k = mul_morph(tg, x, inv_morph(tg, identity_morph(tg, sx)));
  Morph m;
  m.h = kernel_part(k, "counit");
  m.g = sx;
  return m;
}

Morph counit_inv(const TwoGroup& tg, const Morph& m) {
  if (tg.kind == TwoGroup::Kind::Semidirect) {
    Morph out;
    out.h = kernel_part(m, "counit_inv");
    out.g = object_part(m, "counit_inv");
    return out;
  }
  Morph out;
  out.h = el_mul(tg, kernel_part(m, "counit_inv"), tg.ff->i(object_part(m, "counit_inv")));
  return out;
}

FibreProductGroup fibre_product_group(const TwoGroup& tg) { return FibreProductGroup{tg}; }

FibreTriple fibre_mul(const FibreProductGroup& fp, const FibreTriple& a, const FibreTriple& b) {
  const TwoGroup& tg = fp.tg;
  const Morph iz = identity_morph(tg, a.z);
  const Morph izi = inv_morph(tg, iz);
  // (x1 iz x2 iz^-1, y1 x1 iz y2 iz^-1 x1^-1, z1 z2)
  FibreTriple out{
      mul_morph(tg, a.x, mul_morph(tg, iz, mul_morph(tg, b.x, izi))),
      mul_morph(tg, a.y,
                mul_morph(tg, a.x,
                          mul_morph(tg, iz,
                                    mul_morph(tg, b.y,
                                              mul_morph(tg, izi, inv_morph(tg, a.x)))))),
      pointwise_mul(a.z, b.z)};
  return out;
}

Morph fibre_f(const FibreProductGroup& fp, const FibreTriple& t) {
  return mul_morph(fp.tg, t.x, identity_morph(fp.tg, t.z));
}

Morph fibre_g(const FibreProductGroup& fp, const FibreTriple& t) {
  const SampledPath tx = target(fp.tg, t.x);
  return mul_morph(fp.tg, t.y, identity_morph(fp.tg, pointwise_mul(tx, t.z)));
}

FibreTriple fibre_from_composable(const FibreProductGroup& fp, const Morph& w1,
                                  const Morph& w2) {
  const TwoGroup& tg = fp.tg;
  const SampledPath s1 = source(tg, w1);
  const SampledPath s2 = source(tg, w2);
  FibreTriple out{mul_morph(tg, w1, inv_morph(tg, identity_morph(tg, s1))),
                  mul_morph(tg, w2, inv_morph(tg, identity_morph(tg, s2))), s1};
  return out;
}

CextElement sigma_tilde(const PathModelExt& ext, const CextElement& phi) {
  (void)ext;
  if (phi.model != ExtModel::Path || !phi.sheet)
    throw ModelMismatch("sigma_tilde needs a path-model element");
  std::vector<SampledLoop> rows;
  rows.reserve(phi.sheet->rows.size());
  for (const SampledLoop& r : phi.sheet->rows) rows.push_back(flip(r));
  CextElement out;
  out.model = ExtModel::Path;
  out.sheet = make_sheet(std::move(rows));
  out.phase = -phi.phase;
  return out;
}

FusionFactorization build_fusion_factorization(const PathModelExt& ext) {
  FusionFactorization ff;
  ff.model = ExtModel::Path;
  ff.pm = ext;
  const PathModelExt m = ext;
  FusionKit kit;
  kit.lift_doubled = [m](const SampledPath& g) {
    return lift(m, cup(make_path_pair(g, g)), LiftStyle::Thin);
  };
  kit.flip_cover = [m](const CextElement& a) { return sigma_tilde(m, a); };
  kit.mul = [m](const CextElement& a, const CextElement& b) { return mul(m, a, b); };
  kit.inv = [m](const CextElement& a) { return inv(m, a); };
  kit.central = [m](const CextElement& a) { return phase_of_central(m, a); };
  ff.i = [kit](const SampledPath& g) { return fusion_lift(kit, g); };
  return ff;
}

FusionFactorization build_fusion_factorization(const CocycleModelExt& ext) {
  FusionFactorization ff;
  ff.model = ExtModel::Cocycle;
  ff.cm = ext;
  const CocycleModelExt m = ext;
  FusionKit kit;
  kit.lift_doubled = [m](const SampledPath& g) { return lift(m, cup(make_path_pair(g, g))); };
  kit.flip_cover = [m](const CextElement& a) {
    CextElement out;
    out.model = ExtModel::Cocycle;
    out.loop = flip(*a.loop);
    out.phase = -a.phase;
    if (m.labels) out.label = m.cl(*out.loop);
    return out;
  };
  kit.mul = [m](const CextElement& a, const CextElement& b) { return mul(m, a, b); };
  kit.inv = [m](const CextElement& a) { return inv(m, a); };
  kit.central = [m](const CextElement& a) { return phase_of_central(m, a); };
  ff.i = [kit](const SampledPath& g) { return fusion_lift(kit, g); };
  return ff;
}

TwoGroup two_group_from_fusion_factorization(const FusionFactorization& ff) {
  TwoGroup tg;
  tg.kind = TwoGroup::Kind::Fusion;
  tg.ff = ff;
  return tg;
}

Morph fusion_product(const TwoGroup& tg, const Morph& a, const Morph& b) {
  return compose(tg, a, b);
}

CextElement pullback_half(const PathModelExt& half, const CextElement& x) {
  if (x.model != ExtModel::Path || !x.sheet)
    throw ModelMismatch("pullback_half needs a path-model element");
  const Sheet& sh = *x.sheet;
  if (sh.N != 2 * half.N) throw GridMismatch("pullback grid must be half the element grid");
  std::vector<SampledLoop> rows;
  rows.reserve(sh.rows.size());
  for (const SampledLoop& r : sh.rows) rows.push_back(half_grid_loop(r));
  CextElement out;
  out.model = ExtModel::Path;
  out.sheet = make_sheet(std::move(rows));
  out.phase = x.phase;
  return out;
}

Report check_comparison_hom(const PathModelExt& full,
                            const std::vector<std::pair<SampledPath, CextElement>>& samples) {
  Report rep;
  rep.suite = "comparison-hom";
  const PathModelExt half = make_path_model(full.spec, full.lambda, full.M, full.N / 2);
  const CrossedModule xm = make_xmod(full, LiftStyle::Thin);
  const double m = std::min(full.M, full.N / 2);
  const double tol = 50.0 / (m * m);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SampledPath& g = samples[i].first;
    const CextElement& phi = samples[i].second;
    const CextElement act = canonical_action(xm, g, phi);
    // express the action result in the geodesic gauge over its base loop,
    // then pull that gauge back to the half grid
    const CextElement geo = lift(full, base_of(act), LiftStyle::Geodesic);
    const double theta = equivalence_angle(full, geo, act);
    const CextElement rhs = with_phase(pullback_half(half, geo), theta);
    // the half-grid action conjugates the pulled-back lift row by row
    const CextElement rphi = pullback_half(half, phi);
    std::vector<SampledLoop> rows;
    rows.reserve(rphi.sheet->rows.size());
    for (const SampledLoop& r : rphi.sheet->rows) {
      std::vector<Mat> s(std::size_t(half.N));
      for (int j = 0; j < half.N; ++j)
        s[std::size_t(j)] = (g.samples[std::size_t(j)] * r.samples[std::size_t(j)]) *
                            g.samples[std::size_t(j)].inverse();
      rows.push_back(make_loop(r.spec, std::move(s), r.based, std::nullopt, r.w));
    }
    CextElement lhs;
    lhs.model = ExtModel::Path;
    lhs.sheet = make_sheet(std::move(rows));
    lhs.phase = rphi.phase;
    char name[24];
    std::snprintf(name, sizeof name, "sample_%02zu", i);
    rep.add(name, std::abs(equivalence_angle(half, lhs, rhs)), tol);
  }
  return rep;
}

}  // namespace loopcx
