#include "loopcx/centralext.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <utility>

#include "loopcx/errors.hpp"

namespace loopcx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTopTol = 1e-10;
constexpr double kSampleTol = 1e-12;
constexpr int kPeriodProbe = 48;

void require_model(const CextElement& a, ExtModel m, const char* what) {
  if (a.model != m) throw ModelMismatch(std::string(what) + ": element from the other model");
  if (m == ExtModel::Cocycle && !a.loop)
    throw ModelMismatch(std::string(what) + ": element carries no loop");
  if (m == ExtModel::Path && !a.sheet)
    throw ModelMismatch(std::string(what) + ": element carries no sheet");
}

double dev_from_identity(const SampledLoop& g) {
  double d = 0.0;
  const Mat id = g.spec->identity();
  for (const Mat& m : g.samples) d = std::max(d, (m - id).cwiseAbs().maxCoeff());
  return d;
}

void check_disjoint(const SampledLoop& g, const SampledLoop& h) {
  if (!g.support || !h.support)
    throw SupportsOverlap("commutator pairing needs loops with declared supports");
  if (!(g.support->second <= h.support->first || h.support->second <= g.support->first))
    throw SupportsOverlap("declared supports overlap");
}

void check_domain(const std::optional<std::pair<double, double>>& dom, const SampledLoop& g,
                  const char* what) {
  if (!dom) return;
  if (dom->first == 0.0 && dom->second == kTwoPi) return;
  if (!g.support)
    throw SupportViolation(std::string(what) + ": restricted model needs a declared support");
  if (g.support->first < dom->first || g.support->second > dom->second)
    throw SupportViolation(std::string(what) + ": loop support escapes the model interval");
}

void check_interval(std::pair<double, double> iv, int grid) {
  if (!(iv.first >= 0.0 && iv.first < iv.second && iv.second <= kTwoPi))
    throw BadInterval("interval must sit inside [0, 2 pi]");
  const double dt = kTwoPi / grid;
  for (double x : {iv.first, iv.second}) {
    const double snapped = std::round(x / dt) * dt;
    if (std::abs(x - snapped) > 1e-12) throw BadInterval("interval ends must be grid-aligned");
  }
}

AbElem neg_label(const FinAbGroup& g, const AbElem& a) {
  AbElem r(a.size());
  for (int i = 0; i < g.rank(); ++i) r[i] = -a[i];
  return ab_reduce(g, r);
}

const AbElem& label_of(const CextElement& a, const char* what) {
  if (!a.label) throw NoLabels(std::string(what) + ": element carries no label");
  return *a.label;
}

// scalar diagonal positions of the U(1) factors
std::vector<int> u1_positions(const SpecPtr& spec) {
  std::vector<int> pos;
  if (spec->kind == GroupKind::U1) {
    pos.push_back(0);
  } else if (spec->kind == GroupKind::Product) {
    for (std::size_t k = 0; k < spec->factors.size(); ++k) {
      if (spec->factors[k]->kind != GroupKind::U1)
        throw GroupMismatch("winding labels need a product of U(1) factors");
      pos.push_back(spec->offsets[k]);
    }
  } else {
    throw GroupMismatch("winding labels need a product of U(1) factors");
  }
  return pos;
}

}  // namespace

double angle_wrap(double a) {
  double r = std::fmod(a + std::numbers::pi, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r - std::numbers::pi;
}

CocycleModelExt make_trivial_cocycle_model(const SpecPtr& spec) {
  CocycleModelExt ext;
  ext.spec = spec;
  ext.name = "trivial";
  ext.c = [](const SampledLoop&, const SampledLoop&) { return cplx(1.0, 0.0); };
  return ext;
}

CocycleModelExt make_rplus_model(double s, double t) {
  CocycleModelExt ext;
  ext.spec = MatrixGroupSpec::rplus();
  ext.name = "rplus(" + format_g12(s) + "," + format_g12(t) + ")";
  ext.c = [s, t](const SampledLoop& g, const SampledLoop& h) {
    const double dt_g = kTwoPi / g.N;
    const double dt_h = kTwoPi / h.N;
    const int si = static_cast<int>(std::llround(s / dt_g));
    const int ti = static_cast<int>(std::llround(t / dt_h));
    const double lg = std::log(g.at(si)(0, 0).real());
    const double lh = std::log(h.at(ti)(0, 0).real());
    return std::polar(1.0, lg * lh);
  };
  return ext;
}

CocycleModelExt make_label_bilinear_model(const SpecPtr& spec, FinAbGroup labels,
                                          Cocycle2 kappa) {
  const std::vector<int> pos = u1_positions(spec);
  if (static_cast<int>(pos.size()) != labels.rank())
    throw GroupMismatch("one label factor per U(1) factor required");
  if (!kappa.group.same(labels)) throw GroupMismatch("cocycle lives on a different label group");
  if (!kappa.normalized) throw NotNormalized("label cocycle must be normalized");
  CocycleModelExt ext;
  ext.spec = spec;
  ext.name = "label-bilinear";
  ext.labels = labels;
  ext.cl = [labels, pos](const SampledLoop& g) {
    AbElem e(labels.rank(), 0);
    for (int f = 0; f < labels.rank(); ++f) {
      double acc = 0.0;
      for (int j = 0; j < g.N; ++j) {
        const cplx a = g.samples[std::size_t(j)](pos[f], pos[f]);
        const cplx b = g.samples[std::size_t((j + 1) % g.N)](pos[f], pos[f]);
        acc += std::arg(b * std::conj(a));
      }
      e[f] = std::llround(acc / kTwoPi);
    }
    return ab_reduce(labels, e);
  };
  LabelFn cl = ext.cl;
  auto k = std::make_shared<const Cocycle2>(std::move(kappa));
  ext.c = [cl, k](const SampledLoop& g, const SampledLoop& h) {
    return cocycle_eval(*k, cl(g), cl(h)).value();
  };
  return ext;
}

CocycleModelExt with_labels(CocycleModelExt ext, FinAbGroup labels, LabelFn cl) {
  ext.labels = std::move(labels);
  ext.cl = std::move(cl);
  return ext;
}

PathModelExt make_path_model(const SpecPtr& spec, double lambda, int sheet_rows, int grid) {
  if (spec->kind != GroupKind::SU2 && spec->kind != GroupKind::SUn)
    throw GroupMismatch("path model needs a simply connected group");
  if (sheet_rows < 2) throw GridMismatch("path model needs at least two sheet rows");
  if (!power_of_two(grid) || grid < 8)
    throw GridMismatch("path model grid must be a power of two >= 8");
  PathModelExt pm;
  pm.spec = spec;
  pm.lambda = lambda;
  pm.M = sheet_rows;
  pm.N = grid;
  pm.w = make_lie_cocycle(spec, lambda);
  const double p =
      period_integral(basic_generator(spec, kPeriodProbe, kPeriodProbe, kPeriodProbe, true), pm.w);
  const double k = std::round(p / kTwoPi);
  const double rel = std::abs(p - kTwoPi * k) / (kTwoPi * std::max(1.0, std::abs(lambda)));
  if (rel > 0.01)
    throw PeriodMismatch("periods at this level land outside 2 pi Z (relative gap " +
                         format_g12(rel) + ")");
  return pm;
}

CextElement unit_element(const CocycleModelExt& ext) {
  CextElement e;
  e.model = ExtModel::Cocycle;
  e.loop = const_loop(ext.spec, 4);
  e.phase = 0.0;
  if (ext.labels) e.label = AbElem(ext.labels->rank(), 0);
  return e;
}

CextElement unit_element(const PathModelExt& ext) {
  CextElement e;
  e.model = ExtModel::Path;
  const SampledLoop c = const_loop(ext.spec, ext.N);
  e.sheet = make_sheet({c, c});
  e.phase = 0.0;
  return e;
}

CextElement lift(const CocycleModelExt& ext, const SampledLoop& g) {
  if (!g.based) throw NotBased("lift target must be based");
  check_domain(ext.domain, g, "lift");
  CextElement e;
  e.model = ExtModel::Cocycle;
  e.loop = g;
  e.phase = 0.0;
  if (ext.labels) e.label = ext.cl(g);
  return e;
}

CextElement lift(const PathModelExt& ext, const SampledLoop& g, LiftStyle style) {
  check_domain(ext.domain, g, "lift");
  if (g.N != ext.N) throw GridMismatch("lift target off the model grid");
  CextElement e;
  e.model = ExtModel::Path;
  switch (style) {
    case LiftStyle::Geodesic:
      e.sheet = geodesic_sheet(g, ext.M);
      break;
    case LiftStyle::Thin:
      e.sheet = thin_sheet(g, ext.M);
      break;
    case LiftStyle::Swept:
      e.sheet = swept_sheet(g, ext.M);
      break;
  }
  e.phase = 0.0;
  return e;
}

CextElement with_phase(CextElement a, double phase) {
  a.phase = phase;
  return a;
}

CextElement mul(const CocycleModelExt& ext, const CextElement& a, const CextElement& b) {
  require_model(a, ExtModel::Cocycle, "mul");
  require_model(b, ExtModel::Cocycle, "mul");
  CextElement r;
  r.model = ExtModel::Cocycle;
  r.loop = pointwise_mul(*a.loop, *b.loop);
  r.phase = a.phase + b.phase + std::arg(ext.c(*a.loop, *b.loop));
  if (ext.labels)
    r.label = ab_add(*ext.labels, label_of(a, "mul"), label_of(b, "mul"));
  return r;
}

CextElement mul(const PathModelExt& ext, const CextElement& a, const CextElement& b) {
  (void)ext;
  require_model(a, ExtModel::Path, "mul");
  require_model(b, ExtModel::Path, "mul");
  const Sheet& sa = *a.sheet;
  const Sheet& sb = *b.sheet;
  const SampledLoop& top = sa.top();
  std::vector<SampledLoop> rows;
  rows.reserve(sa.rows.size() + sb.rows.size());
  rows = sa.rows;
  for (const SampledLoop& r : sb.rows) rows.push_back(pointwise_mul(top, r));
  CextElement out;
  out.model = ExtModel::Path;
  out.sheet = make_sheet(std::move(rows));
  out.phase = a.phase + b.phase;
  return out;
}

CextElement inv(const CocycleModelExt& ext, const CextElement& a) {
  require_model(a, ExtModel::Cocycle, "inv");
  CextElement r;
  r.model = ExtModel::Cocycle;
  r.loop = pointwise_inv(*a.loop);
  r.phase = -a.phase - std::arg(ext.c(*a.loop, *r.loop));
  if (ext.labels) r.label = neg_label(*ext.labels, label_of(a, "inv"));
  return r;
}

CextElement inv(const PathModelExt& ext, const CextElement& a) {
  require_model(a, ExtModel::Path, "inv");
  const Sheet& sa = *a.sheet;
  std::vector<SampledLoop> irows;
  irows.reserve(sa.rows.size());
  for (const SampledLoop& r : sa.rows) irows.push_back(pointwise_inv(r));
  // phase is fixed by requiring mul(a, inv a) to sit over the unit: the
  // closing sheet below is exactly the sheet of that product
  const SampledLoop& top = sa.top();
  std::vector<SampledLoop> closing = sa.rows;
  closing.reserve(sa.rows.size() + irows.size());
  for (const SampledLoop& r : irows) closing.push_back(pointwise_mul(top, r));
  const double cang = c_holonomy_angle(make_sheet(std::move(closing)), ext.w);
  CextElement r;
  r.model = ExtModel::Path;
  r.sheet = make_sheet(std::move(irows));
  r.phase = -a.phase - cang;
  return r;
}

double equivalence_angle(const CocycleModelExt& ext, const CextElement& a, const CextElement& b) {
  (void)ext;
  require_model(a, ExtModel::Cocycle, "equivalent");
  require_model(b, ExtModel::Cocycle, "equivalent");
  if (max_deviation(*a.loop, *b.loop) > kSampleTol)
    throw NotComparable("elements sit over different loops");
  return angle_wrap(b.phase - a.phase);
}

double equivalence_angle(const PathModelExt& ext, const CextElement& a, const CextElement& b) {
  require_model(a, ExtModel::Path, "equivalent");
  require_model(b, ExtModel::Path, "equivalent");
  if (max_deviation(a.sheet->top(), b.sheet->top()) > kTopTol)
    throw EndpointMismatch("elements sit over different loops");
  const Sheet k = up_down(*a.sheet, *b.sheet);
  return angle_wrap(b.phase - a.phase - c_holonomy_angle(k, ext.w));
}

cplx equivalent(const CocycleModelExt& ext, const CextElement& a, const CextElement& b) {
  const double ang = equivalence_angle(ext, a, b);
  return cplx(std::cos(ang), std::sin(ang));
}

cplx equivalent(const PathModelExt& ext, const CextElement& a, const CextElement& b) {
  const double ang = equivalence_angle(ext, a, b);
  return cplx(std::cos(ang), std::sin(ang));
}

double phase_of_central(const CocycleModelExt& ext, const CextElement& a) {
  (void)ext;
  require_model(a, ExtModel::Cocycle, "phase_of_central");
  if (dev_from_identity(*a.loop) > kTopTol)
    throw NotCentral("element does not sit over the constant loop");
  return angle_wrap(a.phase);
}

double phase_of_central(const PathModelExt& ext, const CextElement& a) {
  require_model(a, ExtModel::Path, "phase_of_central");
  if (dev_from_identity(a.sheet->top()) > kTopTol)
    throw NotCentral("element does not sit over the constant loop");
  return angle_wrap(a.phase + c_holonomy_angle(*a.sheet, ext.w));
}

double commutator_pairing(const CocycleModelExt& ext, const SampledLoop& g,
                          const SampledLoop& h) {
  check_disjoint(g, h);
  check_domain(ext.domain, g, "commutator_pairing");
  check_domain(ext.domain, h, "commutator_pairing");
  auto arg_c = [&](const SampledLoop& x, const SampledLoop& y) { return std::arg(ext.c(x, y)); };
  const SampledLoop gi = pointwise_inv(g);
  const SampledLoop hi = pointwise_inv(h);
  const SampledLoop gh = pointwise_mul(g, h);
  const SampledLoop ghg = pointwise_mul(gh, gi);
  const double ang =
      arg_c(g, h) - arg_c(g, gi) + arg_c(gh, gi) - arg_c(h, hi) + arg_c(ghg, hi);
  return angle_wrap(ang);
}

double commutator_pairing(const PathModelExt& ext, const SampledLoop& g, const SampledLoop& h,
                          LiftStyle style) {
  check_disjoint(g, h);
  check_domain(ext.domain, g, "commutator_pairing");
  check_domain(ext.domain, h, "commutator_pairing");
  const CextElement a = lift(ext, g, style);
  const CextElement b = lift(ext, h, style);
  const CextElement k = mul(ext, mul(ext, mul(ext, a, b), inv(ext, a)), inv(ext, b));
  return phase_of_central(ext, k);
}

Report is_disjoint_commutative(const CocycleModelExt& ext,
                               const std::vector<std::pair<SampledLoop, SampledLoop>>& pairs,
                               double tol) {
  Report rep;
  rep.suite = "disjoint-commutativity";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double ang = commutator_pairing(ext, pairs[i].first, pairs[i].second);
    char name[16];
    std::snprintf(name, sizeof name, "pair_%02zu", i);
    rep.add(name, std::abs(ang), tol);
  }
  return rep;
}

Report is_disjoint_commutative(const PathModelExt& ext,
                               const std::vector<std::pair<SampledLoop, SampledLoop>>& pairs,
                               double tol, LiftStyle style) {
  Report rep;
  rep.suite = "disjoint-commutativity";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double ang = commutator_pairing(ext, pairs[i].first, pairs[i].second, style);
    char name[16];
    std::snprintf(name, sizeof name, "pair_%02zu", i);
    rep.add(name, std::abs(ang), tol);
  }
  return rep;
}

CocycleModelExt modify_product(const CocycleModelExt& ext, const Cocycle2& kappa) {
  if (!ext.labels) throw NoLabels("product modification needs a labeled extension");
  if (!kappa.group.same(*ext.labels))
    throw GroupMismatch("cocycle lives on a different label group");
  if (!kappa.normalized) throw NotNormalized("product modification needs a normalized cocycle");
  CocycleModelExt out = ext;
  out.name = ext.name + "*kappa";
  const LoopCocycleFn base = ext.c;
  const LabelFn cl = ext.cl;
  auto k = std::make_shared<const Cocycle2>(kappa);
  out.c = [base, cl, k](const SampledLoop& g, const SampledLoop& h) {
    return base(g, h) * cocycle_eval(*k, cl(g), cl(h)).value();
  };
  return out;
}

CocycleModelExt dual_extension(const CocycleModelExt& ext) {
  CocycleModelExt out = ext;
  out.name = "dual(" + ext.name + ")";
  const LoopCocycleFn base = ext.c;
  out.c = [base](const SampledLoop& g, const SampledLoop& h) { return std::conj(base(g, h)); };
  return out;
}

PathModelExt dual_extension(const PathModelExt& ext) {
  PathModelExt out = make_path_model(ext.spec, -ext.lambda, ext.M, ext.N);
  out.domain = ext.domain;
  return out;
}

std::function<CextElement(const CextElement&)> twist_automorphism(
    const CocycleModelExt& ext, std::vector<RootOfUnity> phi) {
  if (!ext.labels) throw NoLabels("twist needs a labeled extension");
  const FinAbGroup labels = *ext.labels;
  if (static_cast<int>(phi.size()) != labels.rank())
    throw GroupMismatch("one character value per label factor required");
  for (int i = 0; i < labels.rank(); ++i)
    if (!phi[std::size_t(i)].pow(labels.orders[std::size_t(i)]).is_one())
      throw BadRootOfUnity("character value incompatible with the factor order");
  return [phi, labels](const CextElement& a) {
    const AbElem& g = label_of(a, "twist");
    RootOfUnity v;
    for (int i = 0; i < labels.rank(); ++i) v = v * phi[std::size_t(i)].pow(g[std::size_t(i)]);
    CextElement r = a;
    r.phase = a.phase + v.angle();
    return r;
  };
}

CocycleModelExt restrict_model(const CocycleModelExt& ext, std::pair<double, double> interval,
                               int grid) {
  check_interval(interval, grid);
  CocycleModelExt out = ext;
  out.domain = interval;
  return out;
}

PathModelExt restrict_model(const PathModelExt& ext, std::pair<double, double> interval) {
  check_interval(interval, ext.N);
  PathModelExt out = ext;
  out.domain = interval;
  return out;
}

}  // namespace loopcx
