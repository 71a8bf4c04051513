#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace loopcx {

// Finite abelian group as a fixed product of cyclic factors. Elements are
// integer vectors reduced componentwise mod the orders.
struct FinAbGroup {
  std::vector<std::int64_t> orders;

  int rank() const { return static_cast<int>(orders.size()); }
  std::int64_t order() const;
  bool same(const FinAbGroup& other) const { return orders == other.orders; }
};

using AbElem = std::vector<std::int64_t>;

FinAbGroup make_fin_ab_group(std::vector<std::int64_t> orders);
FinAbGroup fin_ab_group_from_string(const std::string& csv);  // "2,4,6"

AbElem ab_reduce(const FinAbGroup& g, AbElem e);
AbElem ab_add(const FinAbGroup& g, const AbElem& a, const AbElem& b);
std::int64_t ab_index(const FinAbGroup& g, const AbElem& e);
AbElem ab_element(const FinAbGroup& g, std::int64_t index);

// exact point of U(1): e^{2 pi i p / q} with 0 <= p < q and gcd(p, q) = 1
class RootOfUnity {
 public:
  RootOfUnity() : p_(0), q_(1) {}
  static RootOfUnity make(std::int64_t p, std::int64_t q);

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }
  bool is_one() const { return p_ == 0; }
  bool operator==(const RootOfUnity& o) const { return p_ == o.p_ && q_ == o.q_; }
  bool operator!=(const RootOfUnity& o) const { return !(*this == o); }

  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inverse() const;
  RootOfUnity pow(std::int64_t k) const;

  std::complex<double> value() const;
  double angle() const;  // 2 pi p / q
  std::string str() const;

 private:
  std::int64_t p_, q_;
};

// bilinear pairing K x K -> U(1), stored by its values on the generators
struct Bihom {
  FinAbGroup group;
  std::vector<std::vector<RootOfUnity>> z;  // rank x rank
};

Bihom make_bihom(FinAbGroup group, std::vector<std::vector<RootOfUnity>> z);
Bihom trivial_bihom(const FinAbGroup& group);
RootOfUnity bihom_eval(const Bihom& b, const AbElem& g, const AbElem& h);
Bihom bihom_mul(const Bihom& a, const Bihom& b);
Bihom bihom_inv(const Bihom& a);
Bihom bihom_pow(const Bihom& a, std::int64_t k);
bool bihom_equal(const Bihom& a, const Bihom& b);
bool bihom_trivial(const Bihom& a);

bool is_skew(const Bihom& b);         // b(g,h) b(h,g) = 1, exhaustive
bool is_alternating(const Bihom& b);  // b(g,g) = 1, exhaustive

// U(1)-valued 2-cocycle: bilinear form on generators, or a full value table
struct Cocycle2 {
  FinAbGroup group;
  bool bilinear = true;
  std::vector<std::vector<RootOfUnity>> z;  // bilinear form
  std::vector<RootOfUnity> table;           // row-major over (index g, index h)
  bool normalized = false;
};

Cocycle2 bilinear_cocycle(FinAbGroup group, std::vector<std::vector<RootOfUnity>> z);
Cocycle2 table_cocycle(FinAbGroup group, std::vector<RootOfUnity> table);  // NotACocycle
Cocycle2 trivial_cocycle(const FinAbGroup& group);
// coboundary of a U(1) chain rho indexed by element index
Cocycle2 coboundary(const FinAbGroup& group, const std::vector<RootOfUnity>& rho);

RootOfUnity cocycle_eval(const Cocycle2& k, const AbElem& g, const AbElem& h);
Cocycle2 cocycle_mul(const Cocycle2& a, const Cocycle2& b);
bool cocycle_equal(const Cocycle2& a, const Cocycle2& b);
bool cocycle_identity_check(const Cocycle2& k);  // exhaustive triples
Cocycle2 normalize(const Cocycle2& k);           // coboundary shift, same skew

// skew kappa(g, h) = kappa(g, h) kappa(h, g)^-1; the result is verified to
// be a bihomomorphism exhaustively (NotACocycle when the fit fails)
Bihom skew(const Cocycle2& k);

// section of skew on alternating bihoms: strict-upper-triangle bilinear form
Cocycle2 lift_alt_to_cocycle(const Bihom& b);  // NotAlternating

// b'(g, h) = b(g, h) skew(kappa)(g, h)^-1
Bihom modified_obstruction(const Bihom& b, const Cocycle2& kappa);  // GroupMismatch

// skew bihoms modulo alternating ones: one Z2 per even-order factor, with
// diagonal sign bihomomorphisms as coset generators
struct TorsionQuotient {
  FinAbGroup quotient;
  std::vector<Bihom> generators;
};
TorsionQuotient two_torsion_quotient(const FinAbGroup& k);

// skew = alternating x diagonal-sign representative, exactly
struct SkewDecomposition {
  Bihom alternating;
  Bihom diagonal;
};
SkewDecomposition decompose_skew(const Bihom& b);

// exhaustive enumeration, guarded by OrderTooLarge above order 1000
std::vector<AbElem> enumerate_elements(const FinAbGroup& g);
std::vector<Bihom> enumerate_skew_bihoms(const FinAbGroup& g);
std::vector<Bihom> enumerate_alternating_bihoms(const FinAbGroup& g);

std::string bihom_to_json(const Bihom& b);
Bihom bihom_from_json(const FinAbGroup& group, const std::string& text);

}  // namespace loopcx
