#include "loopcx/liegroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <utility>

namespace loopcx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpecPtr make_spec(GroupKind kind, int dim, double level, std::string name,
                  std::vector<SpecPtr> factors = {}) {
  auto s = std::make_shared<MatrixGroupSpec>();
  s->kind = kind;
  s->dim = dim;
  s->level = level;
  s->name = std::move(name);
  s->factors = std::move(factors);
  s->offsets.assign(1, 0);
  for (const auto& f : s->factors) s->offsets.push_back(s->offsets.back() + f->dim);
  return s;
}

bool is_unitary(const Mat& g, double tol) {
  int n = static_cast<int>(g.rows());
  return (g.adjoint() * g - Mat::Identity(n, n)).norm() < tol * std::sqrt(double(n));
}

}  // namespace

SpecPtr MatrixGroupSpec::su2(double level) { return make_spec(GroupKind::SU2, 2, level, "su2"); }

SpecPtr MatrixGroupSpec::sun(int n, double level) {
  if (n < 2) throw ConfigError("sun needs n >= 2");
  if (n == 2) return su2(level);
  return make_spec(GroupKind::SUn, n, level, "su" + std::to_string(n));
}

SpecPtr MatrixGroupSpec::son(int n, double level) {
  if (n < 2) throw ConfigError("son needs n >= 2");
  return make_spec(GroupKind::SOn, n, level, "so" + std::to_string(n));
}

SpecPtr MatrixGroupSpec::u1(double level) { return make_spec(GroupKind::U1, 1, level, "u1"); }

SpecPtr MatrixGroupSpec::rplus(double level) {
  return make_spec(GroupKind::RPlus, 1, level, "rplus");
}

SpecPtr MatrixGroupSpec::product(std::vector<SpecPtr> parts, double level) {
  if (parts.empty()) throw ConfigError("product needs at least one factor");
  int dim = 0;
  std::string name;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    dim += parts[i]->dim;
    if (i) name += " x ";
    name += parts[i]->name;
  }
  return make_spec(GroupKind::Product, dim, level, std::move(name), std::move(parts));
}

Mat MatrixGroupSpec::identity() const { return Mat::Identity(dim, dim); }

bool MatrixGroupSpec::contains_point(const Mat& g, double tol) const {
  if (g.rows() != dim || g.cols() != dim) return false;
  switch (kind) {
    case GroupKind::SU2:
    case GroupKind::SUn:
      return is_unitary(g, tol) && std::abs(g.determinant() - cplx(1.0)) < tol;
    case GroupKind::SOn:
      return g.imag().norm() < tol &&
             (g.transpose() * g - identity()).norm() < tol * std::sqrt(double(dim)) &&
             std::abs(g.determinant() - cplx(1.0)) < tol;
    case GroupKind::U1:
      return std::abs(std::abs(g(0, 0)) - 1.0) < tol;
    case GroupKind::RPlus:
      return std::abs(g(0, 0).imag()) < tol && g(0, 0).real() > 0.0;
    case GroupKind::Product: {
      for (std::size_t k = 0; k < factors.size(); ++k) {
        int o = offsets[k], d = factors[k]->dim;
        if (!factors[k]->contains_point(g.block(o, o, d, d), tol)) return false;
      }
      Mat off = g;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        int o = offsets[k], d = factors[k]->dim;
        off.block(o, o, d, d).setZero();
      }
      return off.norm() < tol;
    }
  }
  return false;
}

bool MatrixGroupSpec::contains_tangent(const Mat& x, double tol) const {
  if (x.rows() != dim || x.cols() != dim) return false;
  switch (kind) {
    case GroupKind::SU2:
    case GroupKind::SUn:
      return (x + x.adjoint()).norm() < tol && std::abs(x.trace()) < tol;
    case GroupKind::SOn:
      return x.imag().norm() < tol && (x + x.transpose()).norm() < tol;
    case GroupKind::U1:
      return std::abs(x(0, 0).real()) < tol;
    case GroupKind::RPlus:
      return std::abs(x(0, 0).imag()) < tol;
    case GroupKind::Product: {
      for (std::size_t k = 0; k < factors.size(); ++k) {
        int o = offsets[k], d = factors[k]->dim;
        if (!factors[k]->contains_tangent(x.block(o, o, d, d), tol)) return false;
      }
      Mat off = x;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        int o = offsets[k], d = factors[k]->dim;
        off.block(o, o, d, d).setZero();
      }
      return off.norm() < tol;
    }
  }
  return false;
}

std::vector<Mat> MatrixGroupSpec::algebra_basis() const {
  std::vector<Mat> out;
  const cplx im(0.0, 1.0);
  switch (kind) {
    case GroupKind::SU2:
    case GroupKind::SUn: {
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          Mat a = Mat::Zero(dim, dim);
          a(i, j) = 1.0;
          a(j, i) = -1.0;
          out.push_back(a);
          Mat b = Mat::Zero(dim, dim);
          b(i, j) = im;
          b(j, i) = im;
          out.push_back(b);
        }
      for (int k = 0; k + 1 < dim; ++k) {
        Mat d = Mat::Zero(dim, dim);
        d(k, k) = im;
        d(k + 1, k + 1) = -im;
        out.push_back(d);
      }
      break;
    }
    case GroupKind::SOn: {
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          Mat a = Mat::Zero(dim, dim);
          a(i, j) = 1.0;
          a(j, i) = -1.0;
          out.push_back(a);
        }
      break;
    }
    case GroupKind::U1: {
      Mat a = Mat::Zero(1, 1);
      a(0, 0) = im;
      out.push_back(a);
      break;
    }
    case GroupKind::RPlus: {
      Mat a = Mat::Zero(1, 1);
      a(0, 0) = 1.0;
      out.push_back(a);
      break;
    }
    case GroupKind::Product: {
      for (std::size_t k = 0; k < factors.size(); ++k) {
        int o = offsets[k], d = factors[k]->dim;
        for (const Mat& fb : factors[k]->algebra_basis()) {
          Mat a = Mat::Zero(dim, dim);
          a.block(o, o, d, d) = fb;
          out.push_back(a);
        }
      }
      break;
    }
  }
  return out;
}

bool MatrixGroupSpec::same(const MatrixGroupSpec& other) const {
  if (kind != other.kind || dim != other.dim || level != other.level) return false;
  if (factors.size() != other.factors.size()) return false;
  for (std::size_t k = 0; k < factors.size(); ++k)
    if (!factors[k]->same(*other.factors[k])) return false;
  return true;
}

GroupPoint make_point(const SpecPtr& spec, Mat m, double tol) {
  if (!spec->contains_point(m, tol))
    throw NotInGroup("sample is not a point of " + spec->name);
  return GroupPoint{spec, std::move(m)};
}

AlgebraVector make_tangent(const SpecPtr& spec, Mat m, double tol) {
  if (!spec->contains_tangent(m, tol))
    throw NotInAlgebra("datum is not tangent to " + spec->name);
  return AlgebraVector{spec, std::move(m)};
}

Eigen::Matrix2cd su2_exp(const Eigen::Matrix2cd& x) {
  double a = x(0, 0).imag();
  double th2 = a * a + std::norm(x(0, 1));
  double th = std::sqrt(th2);
  double c = std::cos(th);
  double s = th < 1e-8 ? 1.0 - th2 / 6.0 : std::sin(th) / th;
  Eigen::Matrix2cd r = s * x;
  r(0, 0) += c;
  r(1, 1) += c;
  return r;
}

Eigen::Matrix2cd su2_log(const Eigen::Matrix2cd& u, double margin) {
  double w = 0.5 * (u(0, 0).real() + u(1, 1).real());
  w = std::clamp(w, -1.0, 1.0);
  double th = std::acos(w);
  // distance of the spectrum {e^{i th}, e^{-i th}} to -1
  if (2.0 * std::cos(0.5 * th) < margin)
    throw BranchCutProximity("su2 log: spectrum within margin of -1");
  double fac = th < 1e-6 ? 1.0 + th * th / 6.0 : th / std::sin(th);
  Eigen::Matrix2cd r = u;
  r(0, 0) -= w;
  r(1, 1) -= w;
  return fac * r;
}

Mat mexp(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  if (n == 1) {
    Mat r(1, 1);
    r(0, 0) = std::exp(x(0, 0));
    return r;
  }
  if (n == 2 && std::abs(x(0, 0) + x(1, 1)) < 1e-12 &&
      (x + x.adjoint()).norm() < 1e-12) {
    Eigen::Matrix2cd fx = x;
    return su2_exp(fx);
  }
  return x.exp();
}

Mat mlog(const Mat& g, double margin) {
  const int n = static_cast<int>(g.rows());
  if (n == 1) {
    cplx z = g(0, 0);
    if (std::abs(z + 1.0) < margin)
      throw BranchCutProximity("scalar log: value within margin of -1");
    Mat r(1, 1);
    r(0, 0) = std::log(z);
    return r;
  }
  if (n == 2 && is_unitary(g, 1e-10) && std::abs(g.determinant() - cplx(1.0)) < 1e-10 &&
      std::abs(g.trace().imag()) < 1e-10) {
    Eigen::Matrix2cd fg = g;
    return su2_log(fg, margin);
  }
  Eigen::VectorXcd ev = g.eigenvalues();
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i) + 1.0) < margin)
      throw BranchCutProximity("matrix log: eigenvalue within margin of -1");
  return g.log();
}

GroupPoint exp_of(const AlgebraVector& x) { return GroupPoint{x.spec, mexp(x.m)}; }

AlgebraVector log_of(const GroupPoint& g, double margin) {
  return AlgebraVector{g.spec, mlog(g.m, margin)};
}

GroupPoint group_mul(const GroupPoint& a, const GroupPoint& b) {
  if (!a.spec->same(*b.spec)) throw TagMismatch("group_mul operands over different specs");
  return GroupPoint{a.spec, a.m * b.m};
}

GroupPoint group_inv(const GroupPoint& a) { return GroupPoint{a.spec, a.m.inverse()}; }

AlgebraVector ad_action(const GroupPoint& g, const AlgebraVector& x) {
  if (!g.spec->same(*x.spec)) throw TagMismatch("ad_action operands over different specs");
  return AlgebraVector{x.spec, g.m * x.m * g.m.inverse()};
}

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
  if (!x.spec->same(*y.spec)) throw TagMismatch("bracket operands over different specs");
  return AlgebraVector{x.spec, x.m * y.m - y.m * x.m};
}

double bform_basic(const Mat& x, const Mat& y) {
  return -(x * y).trace().real() / kTwoPi;
}

double bform(const AlgebraVector& x, const AlgebraVector& y) {
  if (!x.spec->same(*y.spec)) throw TagMismatch("bform operands over different specs");
  return x.spec->level * bform_basic(x.m, y.m);
}

double wz_three_form(const AlgebraVector& x, const AlgebraVector& y, const AlgebraVector& z) {
  if (!x.spec->same(*y.spec) || !x.spec->same(*z.spec))
    throw TagMismatch("wz_three_form operands over different specs");
  return x.spec->level * bform_basic(x.m * y.m - y.m * x.m, z.m);
}

Mat random_tangent(const SpecPtr& spec, SplitMix64& rng, double amp) {
  Mat acc = Mat::Zero(spec->dim, spec->dim);
  for (const Mat& b : spec->algebra_basis()) acc += rng.uniform(-amp, amp) * b;
  return acc;
}

}  // namespace loopcx
