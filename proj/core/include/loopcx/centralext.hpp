#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopcx/abelcoh.hpp"
#include "loopcx/cocycles.hpp"
#include "loopcx/loopspace.hpp"
#include "loopcx/report.hpp"

namespace loopcx {

enum class ExtModel { Cocycle, Path };
enum class LiftStyle { Geodesic, Thin, Swept };

// unit-complex group 2-cocycle on sampled loops
using LoopCocycleFn = std::function<cplx(const SampledLoop&, const SampledLoop&)>;
// component label map standing for the class of a loop in pi1
using LabelFn = std::function<AbElem(const SampledLoop&)>;

// Central extension presented by an explicit cocycle: elements are
// (loop, phase) pairs and the product twists phases by c.
struct CocycleModelExt {
  SpecPtr spec;
  LoopCocycleFn c;
  std::string name;  // descriptor used in reports
  std::optional<FinAbGroup> labels;
  LabelFn cl;  // set iff labels
  std::optional<std::pair<double, double>> domain;  // restriction interval
};

// Central extension presented by contraction sheets with holonomy-corrected
// phases. The level lambda must have periods in 2 pi Z (gated at build).
struct PathModelExt {
  SpecPtr spec;
  double lambda = 1.0;
  int M = 0;  // sheet rows per lift
  int N = 0;  // loop grid
  LieCocycle w;
  std::optional<std::pair<double, double>> domain;
};

struct CextElement {
  ExtModel model = ExtModel::Cocycle;
  std::optional<SampledLoop> loop;  // cocycle model
  std::optional<Sheet> sheet;       // path model
  double phase = 0.0;               // angle, kept unwrapped
  std::optional<AbElem> label;
};

double angle_wrap(double a);  // into (-pi, pi]

// the loop an element sits over, whichever model presents it
inline const SampledLoop& base_of(const CextElement& a) {
  if (a.model == ExtModel::Cocycle) {
    if (!a.loop) throw ModelMismatch("element carries no loop");
    return *a.loop;
  }
  if (!a.sheet) throw ModelMismatch("element carries no sheet");
  return a.sheet->top();
}

// builders
CocycleModelExt make_trivial_cocycle_model(const SpecPtr& spec);
// c(g, h) = exp(i log g(s) log h(t)) with s, t snapped to the sample grid
CocycleModelExt make_rplus_model(double s, double t);
// c(g, h) = kappa(cl g, cl h) where cl takes winding numbers of the scalar
// factors mod the label orders; spec must be a product of U(1) factors
CocycleModelExt make_label_bilinear_model(const SpecPtr& spec, FinAbGroup labels,
                                          Cocycle2 kappa);
CocycleModelExt with_labels(CocycleModelExt ext, FinAbGroup labels, LabelFn cl);

// gates on a 48-cube period integral: |P - 2 pi k| / (2 pi max(1, |lambda|))
// must stay below 1 percent, else PeriodMismatch
PathModelExt make_path_model(const SpecPtr& spec, double lambda, int sheet_rows, int grid);

// elements
CextElement unit_element(const CocycleModelExt& ext);
CextElement unit_element(const PathModelExt& ext);
CextElement lift(const CocycleModelExt& ext, const SampledLoop& g);
CextElement lift(const PathModelExt& ext, const SampledLoop& g,
                 LiftStyle style = LiftStyle::Swept);
CextElement with_phase(CextElement a, double phase);  // replaces the phase

CextElement mul(const CocycleModelExt& ext, const CextElement& a, const CextElement& b);
CextElement mul(const PathModelExt& ext, const CextElement& a, const CextElement& b);
CextElement inv(const CocycleModelExt& ext, const CextElement& a);
CextElement inv(const PathModelExt& ext, const CextElement& a);

// unit-complex ratio detecting equivalence (1 iff equivalent)
cplx equivalent(const CocycleModelExt& ext, const CextElement& a, const CextElement& b);
cplx equivalent(const PathModelExt& ext, const CextElement& a, const CextElement& b);
double equivalence_angle(const CocycleModelExt& ext, const CextElement& a, const CextElement& b);
double equivalence_angle(const PathModelExt& ext, const CextElement& a, const CextElement& b);

// phase of an element over the constant loop (NotCentral otherwise)
double phase_of_central(const CocycleModelExt& ext, const CextElement& a);
double phase_of_central(const PathModelExt& ext, const CextElement& a);

// phase of the commutator of lifts of two loops with disjoint declared
// supports; computed with phase-zero lifts, which the phase independence of
// the commutator makes canonical
double commutator_pairing(const CocycleModelExt& ext, const SampledLoop& g,
                          const SampledLoop& h);
double commutator_pairing(const PathModelExt& ext, const SampledLoop& g, const SampledLoop& h,
                          LiftStyle style = LiftStyle::Swept);

Report is_disjoint_commutative(const CocycleModelExt& ext,
                               const std::vector<std::pair<SampledLoop, SampledLoop>>& pairs,
                               double tol);
Report is_disjoint_commutative(const PathModelExt& ext,
                               const std::vector<std::pair<SampledLoop, SampledLoop>>& pairs,
                               double tol, LiftStyle style = LiftStyle::Swept);

// product modification by a normalized cocycle on the label group
CocycleModelExt modify_product(const CocycleModelExt& ext, const Cocycle2& kappa);

CocycleModelExt dual_extension(const CocycleModelExt& ext);
PathModelExt dual_extension(const PathModelExt& ext);

// phase twist by a character of the label group, one root per factor
std::function<CextElement(const CextElement&)> twist_automorphism(
    const CocycleModelExt& ext, std::vector<RootOfUnity> phi);

// restriction to loops supported in a grid-aligned interval
CocycleModelExt restrict_model(const CocycleModelExt& ext, std::pair<double, double> interval,
                               int grid);
PathModelExt restrict_model(const PathModelExt& ext, std::pair<double, double> interval);

}  // namespace loopcx
