#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "loopcx/loopspace.hpp"

namespace loopcx {

enum class QuadratureRule { Trapezoid };
enum class DerivStencil { Central2, Central4 };

// Lie-algebra 2-cocycle omega(X, Y) = lambda * int b1(X(t), Y'(t)) dt with
// b1 the level-one invariant form. lambda multiplies the result once at the
// end, so linearity in lambda is exact in floating point.
struct LieCocycle {
  SpecPtr spec;
  double lambda = 1.0;
  QuadratureRule rule = QuadratureRule::Trapezoid;
  DerivStencil stencil = DerivStencil::Central2;
};

LieCocycle make_lie_cocycle(const SpecPtr& spec);  // lambda = spec->level
LieCocycle make_lie_cocycle(const SpecPtr& spec, double lambda,
                            DerivStencil stencil = DerivStencil::Central2);

// Loop-algebra element: N samples of algebra vectors on the 2*pi grid.
struct LoopTangent {
  SpecPtr spec;
  int N = 0;
  std::vector<Mat> samples;
};

LoopTangent make_loop_tangent(const SpecPtr& spec, std::vector<Mat> samples);

double omega_eval(const LieCocycle& w, const LoopTangent& X, const LoopTangent& Y);

// Homotopy sheet: rows[0] = const_e, rows[s] a based loop for every s. A
// sheet is a discretized path in the based loop group starting at the
// constant loop; closed sheets (top row const_e as well) are loops there.
struct Sheet {
  SpecPtr spec;
  int M = 0;  // rows.size() - 1
  int N = 0;
  std::vector<SampledLoop> rows;

  const SampledLoop& top() const { return rows.back(); }
};

// validates: nonempty, equal grids, row 0 const to 1e-12, every row based
Sheet make_sheet(std::vector<SampledLoop> rows);
// vertical splice a then b; seam rows must agree to 1e-10 (EndpointMismatch)
Sheet concat_sheets(const Sheet& a, const Sheet& b);
// row reversal; defined for closed sheets only (NotClosed otherwise)
Sheet reverse_sheet(const Sheet& sh);
// up a, down b: the closed comparison sheet of two sheets with equal tops
Sheet up_down(const Sheet& a, const Sheet& b);
bool sheet_closed(const Sheet& sh, double tol = 1e-12);

// Generator-backed 2-parameter family of loops q(u, v): u = 0..U rows,
// v wraps mod V when v_periodic, else v = 0..V rows. loop_at writes the N
// samples of the loop at lattice site (u, v) into `out` (resized by caller).
struct LoopSurface {
  SpecPtr spec;
  std::size_t U = 0;
  std::size_t V = 0;
  int N = 0;
  bool v_periodic = true;
  std::function<void(std::size_t u, std::size_t v, std::vector<Mat>& out)> loop_at;
};

// Integral of the left-invariant 2-form over the family: per cell the two
// transition logs are averaged to the cell center and fed to omega. The
// 1/du, 1/dv, dt factors cancel exactly against the quadrature weights, so
// no step factors appear. DegenerateCell when a transition log sits on the
// branch cut.
double surface_integral(const LoopSurface& q, const LieCocycle& w);

// Integral over the geodesic cone disk of a closed sheet (radial contraction
// exp(r*log K); the radial tangent is exact). radial = 0 picks N steps.
// NotClosed unless top and bottom rows are const_e. A sample on the log
// branch cut is nudged once and flagged AntipodeDegenerate if it stays there.
double surface_integral(const Sheet& closed, const LieCocycle& w, int radial = 0);

// Holonomy of a closed sheet, oriented so that contracting the target loop
// (not growing it) is positive: angle = -surface_integral(cone).
double c_holonomy_angle(const Sheet& closed, const LieCocycle& w, int radial = 0);
cplx c_holonomy(const Sheet& closed, const LieCocycle& w, int radial = 0);

// Period of a closed 2-cycle presented as a v-periodic family whose u-end
// rows are constant in v. NotClosed if the caps fail to degenerate.
double period_integral(const LoopSurface& q, const LieCocycle& w);

// Degree-one 2-sphere of based loops sweeping the group (SU(2) block for
// SU(n)); oriented so the level-1 period is +2*pi.
LoopSurface basic_generator(const SpecPtr& spec, std::size_t P, std::size_t Q, int N,
                            bool reversed = true);

// Independent filling of the same closed sheet: the cone composed with an
// r-dependent inner twist that returns to zero at r = 1. SU(2) only.
LoopSurface twisted_cone_surface(const Sheet& closed, double wind = 1.0, std::size_t radial = 0);

// second-order Richardson limit from values at h and h/2
double richardson2(double coarse, double fine);

// Group 2-cocycle evaluated on loops, returned as a phase angle.
using GroupCocycleFn = std::function<double(const SampledLoop&, const SampledLoop&)>;

// Mixed second derivative at 0 of arg c(exp(sX), exp(tY)) - arg c(exp(tY), exp(sX))
// by central differences; antisymmetric in (X, Y) by construction.
double lie_cocycle_from_group_cocycle(const GroupCocycleFn& c, const LoopTangent& X,
                                      const LoopTangent& Y, double step = 1e-3);

inline constexpr double kDefaultSwing = 1.5707963267948966;  // pi/2

// Lift homotopies from the constant loop to a target loop.
// geodesic: rows exp(s * log target); preserves declared supports.
Sheet geodesic_sheet(const SampledLoop& target, int M);
// thin: target must be flip-symmetric; rows are shrunk half paths doubled,
// so every row stays a thin loop. NotBased if the symmetry fails.
Sheet thin_sheet(const SampledLoop& thin, int M);
// swept: geodesic with a time reparametrization that sweeps back and forth
// (gated to vanish near t = 0, so rows stay based); rows of two loops with
// disjoint supports genuinely overlap, which makes commutator estimates
// honest instead of structurally zero.
Sheet swept_sheet(const SampledLoop& target, int M, double swing = kDefaultSwing);

// binary row-major stack with a one-line JSON header {M, N, group}
void sheet_save(const Sheet& sh, const std::string& path);
Sheet sheet_load(const SpecPtr& spec, const std::string& path);

}  // namespace loopcx
