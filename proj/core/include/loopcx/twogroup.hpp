#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "loopcx/crossedmod.hpp"

namespace loopcx {

// Section i of the extension over doubled paths: pi(i(g)) = cup(g, g),
// i(const_e) = unit, and the flip cover fixes i. Realized as a canonical
// lift with a sign section chosen continuously along a contraction.
struct FusionFactorization {
  ExtModel model = ExtModel::Path;
  std::optional<CocycleModelExt> cm;
  std::optional<PathModelExt> pm;
  std::function<CextElement(const SampledPath&)> i;
};

// Morphism of a strict 2-group. Semidirect realization: kernel element h
// over loops supported in (0, pi) plus an object path g. Fusion
// realization: a single extension element over a doubled loop, stored in h
// with g empty.
struct Morph {
  std::optional<CextElement> h;
  std::optional<SampledPath> g;
};

struct TwoGroup {
  enum class Kind { Semidirect, Fusion };
  Kind kind = Kind::Semidirect;
  std::optional<CrossedModule> xm;       // Semidirect
  std::optional<FusionFactorization> ff; // Fusion
};

// triple (x, y, z) with x, y in ker(s) and z an object path
struct FibreTriple {
  Morph x;
  Morph y;
  SampledPath z;
};

struct FibreProductGroup {
  TwoGroup tg;
};

TwoGroup from_crossed_module(const CrossedModule& xm);
CrossedModule to_crossed_module(const TwoGroup& tg);

SampledPath source(const TwoGroup& tg, const Morph& x);
SampledPath target(const TwoGroup& tg, const Morph& x);
Morph identity_morph(const TwoGroup& tg, const SampledPath& g);
// group structure on morphisms
Morph mul_morph(const TwoGroup& tg, const Morph& a, const Morph& b);
Morph inv_morph(const TwoGroup& tg, const Morph& a);
// categorical structure: compose(x, y) = x i(s(x))^{-1} y, defined when
// s(x) = t(y); invert_morphism(x) = i(s(x)) x^{-1} i(t(x))
Morph compose(const TwoGroup& tg, const Morph& x, const Morph& y);
Morph invert_morphism(const TwoGroup& tg, const Morph& x);
// equality of morphisms through equivalence of their kernel parts
double morph_gap(const TwoGroup& tg, const Morph& a, const Morph& b);

// counit x -> (x i(s(x))^{-1}, s(x)) into the semidirect realization over
// to_crossed_module(tg), with inverse (h, g) -> h i(g)
Morph counit(const TwoGroup& tg, const Morph& x);
Morph counit_inv(const TwoGroup& tg, const Morph& m);

FibreProductGroup fibre_product_group(const TwoGroup& tg);
FibreTriple fibre_mul(const FibreProductGroup& fp, const FibreTriple& a, const FibreTriple& b);
Morph fibre_f(const FibreProductGroup& fp, const FibreTriple& t);  // x i(z)
Morph fibre_g(const FibreProductGroup& fp, const FibreTriple& t);  // y i(t(x) z)
FibreTriple fibre_from_composable(const FibreProductGroup& fp, const Morph& w1, const Morph& w2);

// flip cover: rows pulled back along t -> -t, phase conjugated
CextElement sigma_tilde(const PathModelExt& ext, const CextElement& phi);

// sign-section construction: i(g) is the canonical lift of cup(g, g) with
// the phase fixed by w(g, i(g)) = 1, branch chosen continuously along the
// contraction exp(s log g), s = 1/4, 1/2, 3/4, 1
FusionFactorization build_fusion_factorization(const PathModelExt& ext);
FusionFactorization build_fusion_factorization(const CocycleModelExt& ext);
TwoGroup two_group_from_fusion_factorization(const FusionFactorization& ff);
// the ternary phase map of the induced 2-group is plain composition
Morph fusion_product(const TwoGroup& tg, const Morph& a, const Morph& b);

// pullback along r = rep after res: every sheet row restricted to the half
// grid; defined for elements whose rows all sit over (0, pi)
CextElement pullback_half(const PathModelExt& half, const CextElement& x);
// alpha^{half}_{rep g}(pullback phi) vs pullback(alpha_g(phi)) over samples
Report check_comparison_hom(const PathModelExt& full,
                            const std::vector<std::pair<SampledPath, CextElement>>& samples);

}  // namespace loopcx
