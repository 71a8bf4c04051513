#include "loopcx/cocycles.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <utility>

#include "loopcx/errors.hpp"
#include "loopcx/parallel.hpp"

namespace loopcx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
constexpr double kConstRowTol = 1e-12;
constexpr double kSeamTol = 1e-10;
constexpr double kCapTol = 1e-9;
constexpr double kEngineMargin = 1e-3;
constexpr double kApexMargin = 1e-6;
constexpr double kNudgeSize = 1e-5;
constexpr double kFlipTol = 1e-12;

// invariant: stencil sums carry no grid-step factors; the steps cancel
// between the transition logs (no division) and the quadrature weights
template <class M>
double cell_sum(const std::vector<M>& u, const std::vector<M>& v, DerivStencil st) {
  const int n = static_cast<int>(u.size());
  double s = 0.0;
  if (st == DerivStencil::Central2) {
    for (int j = 0; j < n; ++j) {
      M d = (v[(j + 1) % n] - v[(j - 1 + n) % n]) * 0.5;
      s -= (u[j] * d).trace().real();
    }
  } else {
    for (int j = 0; j < n; ++j) {
      M d = (-v[(j + 2) % n] + 8.0 * v[(j + 1) % n] - 8.0 * v[(j - 1 + n) % n] +
             v[(j - 2 + 2 * n) % n]) /
            12.0;
      s -= (u[j] * d).trace().real();
    }
  }
  return s;
}

struct Su2Kern {
  using M = Eigen::Matrix2cd;
  static M convert(const Mat& g) { return M(g); }
  static M zero(int) { return M::Zero(); }
  static M exp_of(const M& x) { return su2_exp(x); }
  static M log_of(const M& g, double margin) { return su2_log(g, margin); }
  static M transition(const M& a, const M& b, double margin) {
    return su2_log(M(a.adjoint() * b), margin);
  }
  static Mat widen(const M& g) { return Mat(g); }
};

struct GenKern {
  using M = Mat;
  static M convert(const Mat& g) { return g; }
  static M zero(int dim) { return Mat::Zero(dim, dim); }
  static M exp_of(const M& x) { return mexp(x); }
  static M log_of(const M& g, double margin) { return mlog(g, margin); }
  static M transition(const M& a, const M& b, double margin) {
    return mlog(a.inverse() * b, margin);
  }
  static Mat widen(const M& g) { return g; }
};

template <class K>
double engine_raw(const LoopSurface& q, DerivStencil st) {
  using M = typename K::M;
  const std::size_t nu = q.U;
  const std::size_t nv = q.V;
  const int n = q.N;
  if (nu < 1 || nv < 2 || n < 4) throw GridMismatch("surface lattice too small");
  const std::size_t vr = q.v_periodic ? nv : nv + 1;
  const int dim = q.spec->dim;
  std::vector<double> slots(nu * nv, 0.0);

  parallel_for(nu, [&](std::size_t lo, std::size_t hi) {
    std::vector<Mat> raw(n);
    std::vector<std::vector<M>> cur(vr, std::vector<M>(n, K::zero(dim)));
    std::vector<std::vector<M>> nxt = cur;
    std::vector<std::vector<M>> vcur(nv, std::vector<M>(n, K::zero(dim)));
    std::vector<std::vector<M>> vnxt = vcur;
    std::vector<std::vector<M>> uu(vr, std::vector<M>(n, K::zero(dim)));
    std::vector<M> uc(n, K::zero(dim)), vc(n, K::zero(dim));

    auto load_row = [&](std::size_t ui, std::vector<std::vector<M>>& rows) {
      for (std::size_t v = 0; v < vr; ++v) {
        q.loop_at(ui, v, raw);
        for (int j = 0; j < n; ++j) rows[v][j] = K::convert(raw[j]);
      }
    };
    auto v_logs = [&](std::size_t ui, const std::vector<std::vector<M>>& rows,
                      std::vector<std::vector<M>>& out) {
      for (std::size_t v = 0; v < nv; ++v) {
        const auto& a = rows[v];
        const auto& b = rows[q.v_periodic ? (v + 1) % nv : v + 1];
        for (int j = 0; j < n; ++j) {
          try {
            out[v][j] = K::transition(a[j], b[j], kEngineMargin);
          } catch (const BranchCutProximity& e) {
            throw DegenerateCell(ui, v, e.what());
          }
        }
      }
    };

    load_row(lo, cur);
    v_logs(lo, cur, vcur);
    for (std::size_t i = lo; i < hi; ++i) {
      load_row(i + 1, nxt);
      v_logs(i + 1, nxt, vnxt);
      for (std::size_t v = 0; v < vr; ++v) {
        for (int j = 0; j < n; ++j) {
          try {
            uu[v][j] = K::transition(cur[v][j], nxt[v][j], kEngineMargin);
          } catch (const BranchCutProximity& e) {
            throw DegenerateCell(i, v, e.what());
          }
        }
      }
      for (std::size_t v = 0; v < nv; ++v) {
        const auto& ua = uu[v];
        const auto& ub = uu[q.v_periodic ? (v + 1) % nv : v + 1];
        for (int j = 0; j < n; ++j) {
          uc[j] = (ua[j] + ub[j]) * 0.5;
          vc[j] = (vcur[v][j] + vnxt[v][j]) * 0.5;
        }
        slots[i * nv + v] = cell_sum(uc, vc, st);
      }
      std::swap(cur, nxt);
      std::swap(vcur, vnxt);
    }
  });
  return pairwise_sum(slots);
}

// sheet row logs with a one-shot nudge off the branch cut
template <class K>
std::vector<std::vector<typename K::M>> apex_logs(const Sheet& sh) {
  using M = typename K::M;
  const int rows = sh.M + 1;
  const int n = sh.N;
  const Mat nudge = mexp(kNudgeSize * sh.spec->algebra_basis()[0]);
  std::vector<std::vector<M>> out(rows, std::vector<M>(n, K::zero(sh.spec->dim)));
  parallel_for(rows, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      for (int j = 0; j < n; ++j) {
        M g = K::convert(sh.rows[s].samples[j]);
        try {
          out[s][j] = K::log_of(g, kApexMargin);
        } catch (const BranchCutProximity&) {
          M g2 = K::convert(K::widen(g) * nudge);
          try {
            out[s][j] = K::log_of(g2, kApexMargin);
          } catch (const BranchCutProximity&) {
            throw AntipodeDegenerate("sheet sample pinned at the branch cut");
          }
        }
      }
    }
  });
  return out;
}

// cone over a closed sheet: radial tangents are exact (the radial log of
// exp(r L) is L), so only the s-transition logs are finite differences
template <class K>
double cone_raw(const Sheet& sh, DerivStencil st, int radial) {
  using M = typename K::M;
  const int ns = sh.M;
  const int n = sh.N;
  const int nr = radial;
  const int dim = sh.spec->dim;
  auto logs = apex_logs<K>(sh);
  std::vector<std::vector<M>> umid(ns, std::vector<M>(n, K::zero(dim)));
  for (int s = 0; s < ns; ++s)
    for (int j = 0; j < n; ++j) umid[s][j] = (logs[s][j] + logs[s + 1][j]) * 0.5;

  const double dr = 1.0 / nr;
  std::vector<double> slots(std::size_t(nr) * ns, 0.0);
  parallel_for(std::size_t(nr), [&](std::size_t lo, std::size_t hi) {
    std::vector<std::vector<M>> vprev(ns, std::vector<M>(n, K::zero(dim)));
    std::vector<std::vector<M>> vcur = vprev;
    std::vector<M> qa(n, K::zero(dim)), qb(n, K::zero(dim)), vc(n, K::zero(dim));

    auto level_logs = [&](std::size_t level, std::vector<std::vector<M>>& out) {
      const double r = double(level) * dr;
      for (int j = 0; j < n; ++j) qa[j] = K::exp_of(M(r * logs[0][j]));
      for (int s = 0; s < ns; ++s) {
        for (int j = 0; j < n; ++j) qb[j] = K::exp_of(M(r * logs[s + 1][j]));
        for (int j = 0; j < n; ++j) {
          try {
            out[s][j] = K::transition(qa[j], qb[j], kEngineMargin);
          } catch (const BranchCutProximity& e) {
            throw DegenerateCell(level, s, e.what());
          }
        }
        std::swap(qa, qb);
      }
    };

    if (lo > 0) level_logs(lo, vprev);
    for (std::size_t k = lo; k < hi; ++k) {
      level_logs(k + 1, vcur);
      for (int s = 0; s < ns; ++s) {
        for (int j = 0; j < n; ++j) vc[j] = (vprev[s][j] + vcur[s][j]) * 0.5;
        slots[k * ns + s] = cell_sum(umid[s], vc, st);
      }
      std::swap(vprev, vcur);
    }
  });
  return pairwise_sum(slots) * dr;
}

double dev_from_identity(const SampledLoop& g) {
  double d = 0.0;
  const Mat id = g.spec->identity();
  for (const Mat& m : g.samples) d = std::max(d, (m - id).cwiseAbs().maxCoeff());
  return d;
}

double smoothstep01(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// reparametrization gate: zero near t = 0 and t = 2 pi so swept rows stay
// based, one on the middle of the circle
double sweep_gate(double t) {
  constexpr double c0 = 0.45;
  constexpr double c1 = 0.90;
  double up = smoothstep01((t - c0) / (c1 - c0));
  double dn = smoothstep01((kTwoPi - t - c0) / (c1 - c0));
  return std::min(up, dn);
}

Mat safe_log_sample(const SpecPtr& spec, const Mat& g) {
  try {
    return mlog(g, kApexMargin);
  } catch (const BranchCutProximity&) {
    Mat nudged = g * mexp(kNudgeSize * spec->algebra_basis()[0]);
    try {
      return mlog(nudged, kApexMargin);
    } catch (const BranchCutProximity&) {
      throw AntipodeDegenerate("lift target sample pinned at the branch cut");
    }
  }
}

}  // namespace

LieCocycle make_lie_cocycle(const SpecPtr& spec) {
  return LieCocycle{spec, spec->level, QuadratureRule::Trapezoid, DerivStencil::Central2};
}

LieCocycle make_lie_cocycle(const SpecPtr& spec, double lambda, DerivStencil stencil) {
  return LieCocycle{spec, lambda, QuadratureRule::Trapezoid, stencil};
}

LoopTangent make_loop_tangent(const SpecPtr& spec, std::vector<Mat> samples) {
  const int n = static_cast<int>(samples.size());
  if (!power_of_two(n) || n < 4) throw GridMismatch("tangent grid must be a power of two >= 4");
  for (const Mat& x : samples)
    if (!spec->contains_tangent(x)) throw NotInAlgebra("tangent sample outside the algebra");
  return LoopTangent{spec, n, std::move(samples)};
}

double omega_eval(const LieCocycle& w, const LoopTangent& x, const LoopTangent& y) {
  if (!w.spec->same(*x.spec) || !w.spec->same(*y.spec))
    throw TagMismatch("omega operands over different specs");
  if (x.N != y.N) throw GridMismatch("omega operands on different grids");
  const int n = x.N;
  std::vector<double> slots(n, 0.0);
  for (int j = 0; j < n; ++j) {
    Mat d;
    if (w.stencil == DerivStencil::Central2) {
      d = (y.samples[(j + 1) % n] - y.samples[(j - 1 + n) % n]) * 0.5;
    } else {
      d = (-y.samples[(j + 2) % n] + 8.0 * y.samples[(j + 1) % n] -
           8.0 * y.samples[(j - 1 + n) % n] + y.samples[(j - 2 + 2 * n) % n]) /
          12.0;
    }
    slots[j] = -(x.samples[j] * d).trace().real();
  }
  return w.lambda * pairwise_sum(slots) / kTwoPi;
}

Sheet make_sheet(std::vector<SampledLoop> rows) {
  if (rows.size() < 2) throw GridMismatch("sheet needs at least two rows");
  const SpecPtr spec = rows[0].spec;
  const int n = rows[0].N;
  for (const SampledLoop& r : rows) {
    if (!r.spec->same(*spec)) throw TagMismatch("sheet rows over different specs");
    if (r.N != n) throw GridMismatch("sheet rows on different grids");
    if (!r.based) throw NotBased("sheet rows must be based loops");
  }
  if (dev_from_identity(rows[0]) > kConstRowTol)
    throw NotBased("sheet must start at the constant loop");
  Sheet sh;
  sh.spec = spec;
  sh.M = static_cast<int>(rows.size()) - 1;
  sh.N = n;
  sh.rows = std::move(rows);
  return sh;
}

Sheet concat_sheets(const Sheet& a, const Sheet& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("sheets over different specs");
  if (a.N != b.N) throw GridMismatch("sheets on different grids");
  if (max_deviation(a.top(), b.rows.front()) > kSeamTol)
    throw EndpointMismatch("sheet seam rows disagree");
  Sheet sh;
  sh.spec = a.spec;
  sh.N = a.N;
  sh.rows = a.rows;
  sh.rows.insert(sh.rows.end(), b.rows.begin(), b.rows.end());
  sh.M = static_cast<int>(sh.rows.size()) - 1;
  return sh;
}

Sheet reverse_sheet(const Sheet& sh) {
  if (!sheet_closed(sh, kSeamTol)) throw NotClosed("row reversal needs a closed sheet");
  Sheet out;
  out.spec = sh.spec;
  out.M = sh.M;
  out.N = sh.N;
  out.rows.assign(sh.rows.rbegin(), sh.rows.rend());
  return out;
}

Sheet up_down(const Sheet& a, const Sheet& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("sheets over different specs");
  if (a.N != b.N) throw GridMismatch("sheets on different grids");
  if (max_deviation(a.top(), b.top()) > kSeamTol)
    throw EndpointMismatch("sheets do not share their top row");
  Sheet out;
  out.spec = a.spec;
  out.N = a.N;
  out.rows = a.rows;
  out.rows.insert(out.rows.end(), b.rows.rbegin(), b.rows.rend());
  out.M = static_cast<int>(out.rows.size()) - 1;
  return out;
}

bool sheet_closed(const Sheet& sh, double tol) {
  return dev_from_identity(sh.rows.front()) <= tol && dev_from_identity(sh.top()) <= tol;
}

double surface_integral(const LoopSurface& q, const LieCocycle& w) {
  if (!w.spec->same(*q.spec)) throw TagMismatch("cocycle and surface over different specs");
  const double raw = q.spec->kind == GroupKind::SU2 ? engine_raw<Su2Kern>(q, w.stencil)
                                                    : engine_raw<GenKern>(q, w.stencil);
  return w.lambda * raw / kTwoPi;
}

double surface_integral(const Sheet& closed, const LieCocycle& w, int radial) {
  if (!w.spec->same(*closed.spec)) throw TagMismatch("cocycle and sheet over different specs");
  if (!sheet_closed(closed, kSeamTol)) throw NotClosed("cone needs a closed sheet");
  const int nr = radial > 0 ? radial : closed.N;
  const double raw = closed.spec->kind == GroupKind::SU2
                         ? cone_raw<Su2Kern>(closed, w.stencil, nr)
                         : cone_raw<GenKern>(closed, w.stencil, nr);
  return w.lambda * raw / kTwoPi;
}

double c_holonomy_angle(const Sheet& closed, const LieCocycle& w, int radial) {
  return -surface_integral(closed, w, radial);
}

cplx c_holonomy(const Sheet& closed, const LieCocycle& w, int radial) {
  const double a = c_holonomy_angle(closed, w, radial);
  return cplx(std::cos(a), std::sin(a));
}

double period_integral(const LoopSurface& q, const LieCocycle& w) {
  if (!q.v_periodic) throw NotClosed("period needs a family closed up in v");
  std::vector<Mat> a(q.N), b(q.N);
  for (int side = 0; side < 2; ++side) {
    const std::size_t u = side == 0 ? 0 : q.U;
    q.loop_at(u, 0, a);
    for (std::size_t v = 1; v < q.V; ++v) {
      q.loop_at(u, v, b);
      for (int j = 0; j < q.N; ++j)
        if ((a[j] - b[j]).cwiseAbs().maxCoeff() > kCapTol)
          throw NotClosed("family cap varies with v");
    }
  }
  return surface_integral(q, w);
}

LoopSurface basic_generator(const SpecPtr& spec, std::size_t np, std::size_t nq, int n,
                            bool reversed) {
  if (spec->kind != GroupKind::SU2 && spec->kind != GroupKind::SUn)
    throw GroupMismatch("basic generator needs a special unitary group");
  if (np < 2 || nq < 2 || n < 4) throw GridMismatch("generator lattice too small");
  const int dim = spec->dim;
  LoopSurface q;
  q.spec = spec;
  q.U = np;
  q.V = nq;
  q.N = n;
  q.v_periodic = true;
  q.loop_at = [spec, np, nq, n, reversed, dim](std::size_t ui, std::size_t vi,
                                               std::vector<Mat>& out) {
    out.assign(std::size_t(n), spec->identity());
    const double u = double(ui) / double(np);
    const std::size_t vv = reversed ? (nq - (vi % nq)) % nq : vi % nq;
    const double v = kTwoPi * double(vv) / double(nq);
    const cplx im(0.0, 1.0);
    Eigen::Matrix2cd m;
    if (u <= 0.5) {
      // polar cap: v-independent contraction of the equator circle
      const double r = 2.0 * u;
      const double s = std::sqrt(std::max(0.0, 1.0 - r * r));
      Eigen::Matrix2cd g0;
      g0 << r, -s, s, r;
      const Eigen::Matrix2cd g0a = g0.adjoint();
      for (int j = 0; j < n; ++j) {
        const double t = kTwoPi * j / n;
        m << r * std::exp(-im * t), -s, s, r * std::exp(im * t);
        out[j].block(0, 0, 2, 2) = m * g0a;
      }
    } else {
      const double chi = (u - 0.5) * kPi;
      const double z1 = std::sin(chi);
      const double z2 = std::cos(chi);
      Eigen::Matrix2cd f0;
      f0 << z1 * std::exp(im * v), -z2, z2, z1 * std::exp(-im * v);
      const Eigen::Matrix2cd f0a = f0.adjoint();
      for (int j = 0; j < n; ++j) {
        const double t = kTwoPi * j / n;
        m << z1 * std::exp(im * v), -z2 * std::exp(-im * t), z2 * std::exp(im * t),
            z1 * std::exp(-im * v);
        out[j].block(0, 0, 2, 2) = m * f0a;
      }
    }
  };
  return q;
}

LoopSurface twisted_cone_surface(const Sheet& closed, double wind, std::size_t radial) {
  if (closed.spec->kind != GroupKind::SU2)
    throw GroupMismatch("twisted cone is defined over su2 only");
  if (!sheet_closed(closed, kSeamTol)) throw NotClosed("twisted cone needs a closed sheet");
  const std::size_t nr = radial ? radial : std::size_t(closed.N);
  auto logs = std::make_shared<const std::vector<std::vector<Eigen::Matrix2cd>>>(
      apex_logs<Su2Kern>(closed));
  LoopSurface q;
  q.spec = closed.spec;
  q.U = nr;
  q.V = std::size_t(closed.M);
  q.N = closed.N;
  q.v_periodic = false;
  q.loop_at = [logs, nr, wind](std::size_t ui, std::size_t vi, std::vector<Mat>& out) {
    const auto& rows = *logs;
    const int n = static_cast<int>(rows[0].size());
    const double r = double(ui) / double(nr);
    const double phi = kTwoPi * wind * r * (1.0 - r);
    // inner twist exp(phi * (-i/2) sigma3), trivial at both radial ends
    Eigen::Matrix2cd tw = Eigen::Matrix2cd::Zero();
    tw(0, 0) = std::polar(1.0, -0.5 * phi);
    tw(1, 1) = std::polar(1.0, 0.5 * phi);
    const Eigen::Matrix2cd twa = tw.adjoint();
    out.assign(std::size_t(n), Mat());
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix2cd lr = tw * rows[vi][j] * twa;
      out[j] = Mat(su2_exp(Eigen::Matrix2cd(r * lr)));
    }
  };
  return q;
}

double richardson2(double coarse, double fine) { return fine + (fine - coarse) / 3.0; }

double lie_cocycle_from_group_cocycle(const GroupCocycleFn& c, const LoopTangent& x,
                                      const LoopTangent& y, double step) {
  if (step < 1e-8) throw StepUnderflow("difference step below 1e-8");
  if (!x.spec->same(*y.spec)) throw TagMismatch("tangents over different specs");
  if (x.N != y.N) throw GridMismatch("tangents on different grids");
  auto at = [&](const LoopTangent& z, double s) {
    std::vector<Mat> smp(z.samples.size());
    for (std::size_t j = 0; j < smp.size(); ++j) smp[j] = mexp(s * z.samples[j]);
    return make_loop(z.spec, std::move(smp));
  };
  const SampledLoop ap = at(x, step), am = at(x, -step);
  const SampledLoop bp = at(y, step), bm = at(y, -step);
  auto f = [&](const SampledLoop& a, const SampledLoop& b) { return c(a, b) - c(b, a); };
  const double num = f(ap, bp) - f(ap, bm) - f(am, bp) + f(am, bm);
  return num / (4.0 * step * step);
}

Sheet geodesic_sheet(const SampledLoop& target, int steps) {
  if (steps < 1) throw GridMismatch("lift needs at least one row step");
  if (!target.based) throw NotBased("lift target must be based");
  const int n = target.N;
  std::vector<Mat> logs(n);
  for (int j = 0; j < n; ++j) logs[j] = safe_log_sample(target.spec, target.samples[j]);
  std::vector<SampledLoop> rows;
  rows.reserve(steps + 1);
  rows.push_back(const_loop(target.spec, n));
  for (int s = 1; s < steps; ++s) {
    const double f = double(s) / steps;
    std::vector<Mat> smp(n);
    for (int j = 0; j < n; ++j) smp[j] = mexp(f * logs[j]);
    rows.push_back(make_loop(target.spec, std::move(smp), true, target.support, target.w));
  }
  rows.push_back(target);
  return make_sheet(std::move(rows));
}

Sheet thin_sheet(const SampledLoop& thin, int steps) {
  if (steps < 1) throw GridMismatch("lift needs at least one row step");
  if (!thin.based) throw NotBased("lift target must be based");
  const int n = thin.N;
  const int h = n / 2;
  for (int j = 1; j < h; ++j)
    if ((thin.samples[j] - thin.samples[n - j]).cwiseAbs().maxCoeff() > kFlipTol)
      throw ModelMismatch("thin lift target must be flip-symmetric");
  std::vector<SampledLoop> rows;
  rows.reserve(steps + 1);
  rows.push_back(const_loop(thin.spec, n));
  std::vector<Mat> ph(h + 1), smp(n);
  for (int s = 1; s < steps; ++s) {
    const double f = double(s) / steps;
    // shrink the half path toward the basepoint by fractional-index
    // geodesic interpolation, then mirror: rows stay thin loops
    for (int k = 0; k <= h; ++k) {
      const double pos = f * k;
      const int k0 = static_cast<int>(std::floor(pos));
      const int k1 = std::min(k0 + 1, h);
      const double fr = pos - k0;
      if (fr == 0.0 || k0 == k1) {
        ph[k] = thin.samples[k0];
      } else {
        const Mat step_log = mlog(Mat(thin.samples[k0].inverse() * thin.samples[k1]));
        ph[k] = thin.samples[k0] * mexp(fr * step_log);
      }
    }
    for (int k = 0; k <= h; ++k) smp[k] = ph[k];
    for (int k = 1; k < h; ++k) smp[n - k] = ph[k];
    rows.push_back(make_loop(thin.spec, smp, true, thin.support, thin.w));
  }
  rows.push_back(thin);
  return make_sheet(std::move(rows));
}

Sheet swept_sheet(const SampledLoop& target, int steps, double swing) {
  if (steps < 1) throw GridMismatch("lift needs at least one row step");
  if (!target.based) throw NotBased("lift target must be based");
  const int n = target.N;
  const double dt = kTwoPi / n;
  std::vector<Mat> logs(n);
  for (int j = 0; j < n; ++j) logs[j] = safe_log_sample(target.spec, target.samples[j]);
  std::vector<double> gate(n);
  for (int j = 0; j < n; ++j) gate[j] = sweep_gate(dt * j);
  std::vector<SampledLoop> rows;
  rows.reserve(steps + 1);
  rows.push_back(const_loop(target.spec, n));
  std::vector<Mat> smp(n);
  for (int s = 1; s < steps; ++s) {
    const double f = double(s) / steps;
    const double sw = std::sin(kPi * f);
    const double d = swing * sw * sw;
    for (int j = 0; j < n; ++j) {
      double pos = std::fmod(j + d * gate[j] / dt, double(n));
      const int k0 = static_cast<int>(std::floor(pos)) % n;
      const double fr = pos - std::floor(pos);
      const int k1 = (k0 + 1) % n;
      const Mat lv = (1.0 - fr) * logs[k0] + fr * logs[k1];
      smp[j] = mexp(f * lv);
    }
    rows.push_back(make_loop(target.spec, smp, true, std::nullopt, target.w));
  }
  rows.push_back(target);
  return make_sheet(std::move(rows));
}

void sheet_save(const Sheet& sh, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  nlohmann::json h;
  h["M"] = sh.M;
  h["N"] = sh.N;
  h["group"] = sh.spec->name;
  h["w"] = sh.rows[0].w;
  const std::string line = h.dump();
  os.write(line.data(), std::streamsize(line.size()));
  os.put('\n');
  const int d = sh.spec->dim;
  std::vector<double> buf(std::size_t(2) * d * d);
  for (const SampledLoop& row : sh.rows) {
    for (const Mat& m : row.samples) {
      std::size_t k = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          buf[k++] = m(i, j).real();
          buf[k++] = m(i, j).imag();
        }
      os.write(reinterpret_cast<const char*>(buf.data()),
               std::streamsize(buf.size() * sizeof(double)));
    }
  }
  if (!os) throw ConfigError("short write to " + path);
}

Sheet sheet_load(const SpecPtr& spec, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("missing sheet header in " + path);
  const nlohmann::json h = nlohmann::json::parse(line);
  const std::string group = h.at("group").get<std::string>();
  if (group != spec->name)
    throw ModelMismatch("sheet stored over " + group + ", requested " + spec->name);
  const int rows = h.at("M").get<int>() + 1;
  const int n = h.at("N").get<int>();
  const int w = h.value("w", -1);
  const int d = spec->dim;
  std::vector<double> buf(std::size_t(2) * d * d);
  std::vector<SampledLoop> stack;
  stack.reserve(rows);
  for (int s = 0; s < rows; ++s) {
    std::vector<Mat> smp(n, Mat(d, d));
    for (int jj = 0; jj < n; ++jj) {
      is.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * sizeof(double)));
      if (!is) throw ConfigError("truncated sheet file " + path);
      std::size_t k = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          smp[jj](i, j) = cplx(buf[k], buf[k + 1]);
          k += 2;
        }
    }
    stack.push_back(make_loop(spec, std::move(smp), true, std::nullopt, w));
  }
  return make_sheet(std::move(stack));
}

}  // namespace loopcx
