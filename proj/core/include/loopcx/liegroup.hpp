#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "loopcx/errors.hpp"
#include "loopcx/rng.hpp"

namespace loopcx {

using Mat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

enum class GroupKind { SU2, SUn, SOn, U1, RPlus, Product };

class MatrixGroupSpec;
using SpecPtr = std::shared_ptr<const MatrixGroupSpec>;

// Immutable description of a compact (or scalar) matrix group together with
// the level used by the invariant bilinear form. Shared by reference; two
// data carry "the same group" when same() holds.
class MatrixGroupSpec {
 public:
  GroupKind kind;
  int dim;       // matrix size n
  double level;  // scale of the bilinear form
  std::string name;
  std::vector<SpecPtr> factors;  // Product only
  std::vector<int> offsets;      // Product block offsets, size factors+1

  static SpecPtr su2(double level = 1.0);
  static SpecPtr sun(int n, double level = 1.0);
  static SpecPtr son(int n, double level = 1.0);
  static SpecPtr u1(double level = 1.0);
  static SpecPtr rplus(double level = 1.0);
  static SpecPtr product(std::vector<SpecPtr> parts, double level = 1.0);

  bool scalar() const { return kind == GroupKind::U1 || kind == GroupKind::RPlus; }
  Mat identity() const;

  bool contains_point(const Mat& g, double tol = 1e-9) const;
  bool contains_tangent(const Mat& x, double tol = 1e-9) const;

  // basis of the (real) Lie algebra as complex matrices
  std::vector<Mat> algebra_basis() const;

  bool same(const MatrixGroupSpec& other) const;
};

struct GroupPoint {
  SpecPtr spec;
  Mat m;
};

struct AlgebraVector {
  SpecPtr spec;
  Mat m;
};

// validated constructors
GroupPoint make_point(const SpecPtr& spec, Mat m, double tol = 1e-9);
AlgebraVector make_tangent(const SpecPtr& spec, Mat m, double tol = 1e-9);

// Matrix exponential. 2x2 anti-Hermitian traceless input takes a closed
// form; everything else goes through a dense Pade/scaling implementation.
Mat mexp(const Mat& x);

// Principal matrix logarithm. Throws BranchCutProximity when some
// eigenvalue lies within `margin` of -1 (distance in the plane), where the
// principal branch stops being trustworthy for group data.
Mat mlog(const Mat& g, double margin = 1e-3);

GroupPoint exp_of(const AlgebraVector& x);
AlgebraVector log_of(const GroupPoint& g, double margin = 1e-3);

GroupPoint group_mul(const GroupPoint& a, const GroupPoint& b);
GroupPoint group_inv(const GroupPoint& a);
AlgebraVector ad_action(const GroupPoint& g, const AlgebraVector& x);  // g x g^-1
AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y);

// Invariant bilinear form b(x, y) = -(level / 2pi) Re tr(xy). The 1/2pi is
// calibrated so the basic degree-one generator integrates to one full
// period per unit level (see cocycles). TagMismatch on different specs.
double bform(const AlgebraVector& x, const AlgebraVector& y);
double bform_basic(const Mat& x, const Mat& y);  // level-1 kernel on raw data

// nu(x, y, z) = b([x, y], z); totally antisymmetric, Ad-invariant.
double wz_three_form(const AlgebraVector& x, const AlgebraVector& y, const AlgebraVector& z);

// Closed forms on 2x2 data for hot loops. su2_exp needs anti-Hermitian
// traceless input; su2_log needs special unitary input.
Eigen::Matrix2cd su2_exp(const Eigen::Matrix2cd& x);
Eigen::Matrix2cd su2_log(const Eigen::Matrix2cd& u, double margin = 1e-3);

// Random tangent: coefficients uniform in [-amp, amp] over algebra_basis().
Mat random_tangent(const SpecPtr& spec, SplitMix64& rng, double amp = 1.0);

}  // namespace loopcx
