#include "loopcx/abelcoh.hpp"

#include <nlohmann/json.hpp>

#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

#include "loopcx/errors.hpp"

namespace loopcx {

namespace {

constexpr std::int64_t kOrderGuard = 1000;

void guard_order(const FinAbGroup& g, const char* what) {
  if (g.order() > kOrderGuard)
    throw OrderTooLarge(std::string(what) + ": group order above the enumeration bound");
}

std::int64_t imod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

void check_same_group(const FinAbGroup& a, const FinAbGroup& b, const char* what) {
  if (!a.same(b)) throw GroupMismatch(std::string(what) + ": operands over different groups");
}

void check_elem(const FinAbGroup& g, const AbElem& e, const char* what) {
  if (static_cast<int>(e.size()) != g.rank())
    throw GroupMismatch(std::string(what) + ": element rank mismatch");
}

std::vector<RootOfUnity> tabulate(const Cocycle2& k) {
  const std::int64_t n = k.group.order();
  std::vector<RootOfUnity> t(std::size_t(n) * std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const AbElem g = ab_element(k.group, i);
    for (std::int64_t j = 0; j < n; ++j)
      t[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
          cocycle_eval(k, g, ab_element(k.group, j));
  }
  return t;
}

}  // namespace

std::int64_t FinAbGroup::order() const {
  std::int64_t n = 1;
  for (std::int64_t o : orders) n *= o;
  return n;
}

FinAbGroup make_fin_ab_group(std::vector<std::int64_t> orders) {
  if (orders.empty()) throw ConfigError("group needs at least one cyclic factor");
  for (std::int64_t o : orders)
    if (o < 1) throw ConfigError("cyclic orders must be positive");
  return FinAbGroup{std::move(orders)};
}

FinAbGroup fin_ab_group_from_string(const std::string& csv) {
  std::vector<std::int64_t> orders;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      orders.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw ConfigError("bad cyclic order '" + item + "'");
    }
  }
  return make_fin_ab_group(std::move(orders));
}

AbElem ab_reduce(const FinAbGroup& g, AbElem e) {
  check_elem(g, e, "ab_reduce");
  for (int i = 0; i < g.rank(); ++i) e[i] = imod(e[i], g.orders[i]);
  return e;
}

AbElem ab_add(const FinAbGroup& g, const AbElem& a, const AbElem& b) {
  check_elem(g, a, "ab_add");
  check_elem(g, b, "ab_add");
  AbElem r(a.size());
  for (int i = 0; i < g.rank(); ++i) r[i] = imod(a[i] + b[i], g.orders[i]);
  return r;
}

std::int64_t ab_index(const FinAbGroup& g, const AbElem& e) {
  check_elem(g, e, "ab_index");
  std::int64_t idx = 0;
  for (int i = 0; i < g.rank(); ++i) idx = idx * g.orders[i] + imod(e[i], g.orders[i]);
  return idx;
}

AbElem ab_element(const FinAbGroup& g, std::int64_t index) {
  AbElem e(g.rank());
  for (int i = g.rank() - 1; i >= 0; --i) {
    e[i] = imod(index, g.orders[i]);
    index /= g.orders[i];
  }
  return e;
}

RootOfUnity RootOfUnity::make(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw BadRootOfUnity("denominator must be positive");
  p = imod(p, q);
  const std::int64_t g = std::gcd(p, q);
  RootOfUnity r;
  r.p_ = p / g;
  r.q_ = q / g;
  return r;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  return make(p_ * o.q_ + o.p_ * q_, q_ * o.q_);
}

RootOfUnity RootOfUnity::inverse() const { return make(-p_, q_); }

RootOfUnity RootOfUnity::pow(std::int64_t k) const { return make(imod(k, q_) * p_, q_); }

std::complex<double> RootOfUnity::value() const {
  return std::polar(1.0, angle());
}

double RootOfUnity::angle() const {
  return 2.0 * std::numbers::pi * double(p_) / double(q_);
}

std::string RootOfUnity::str() const {
  return std::to_string(p_) + "/" + std::to_string(q_);
}

Bihom make_bihom(FinAbGroup group, std::vector<std::vector<RootOfUnity>> z) {
  const int r = group.rank();
  if (static_cast<int>(z.size()) != r) throw GroupMismatch("bihom matrix rank mismatch");
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(z[i].size()) != r) throw GroupMismatch("bihom matrix rank mismatch");
    for (int j = 0; j < r; ++j) {
      if (!z[i][j].pow(group.orders[i]).is_one() || !z[i][j].pow(group.orders[j]).is_one())
        throw BadRootOfUnity("bihom entry order incompatible with the group");
    }
  }
  return Bihom{std::move(group), std::move(z)};
}

Bihom trivial_bihom(const FinAbGroup& group) {
  const int r = group.rank();
  return Bihom{group, std::vector<std::vector<RootOfUnity>>(r, std::vector<RootOfUnity>(r))};
}

RootOfUnity bihom_eval(const Bihom& b, const AbElem& g, const AbElem& h) {
  check_elem(b.group, g, "bihom_eval");
  check_elem(b.group, h, "bihom_eval");
  RootOfUnity acc;
  for (int i = 0; i < b.group.rank(); ++i)
    for (int j = 0; j < b.group.rank(); ++j) acc = acc * b.z[i][j].pow(g[i] * h[j]);
  return acc;
}

Bihom bihom_mul(const Bihom& a, const Bihom& b) {
  check_same_group(a.group, b.group, "bihom_mul");
  Bihom r = a;
  for (int i = 0; i < a.group.rank(); ++i)
    for (int j = 0; j < a.group.rank(); ++j) r.z[i][j] = a.z[i][j] * b.z[i][j];
  return r;
}

Bihom bihom_inv(const Bihom& a) {
  Bihom r = a;
  for (auto& row : r.z)
    for (auto& v : row) v = v.inverse();
  return r;
}

Bihom bihom_pow(const Bihom& a, std::int64_t k) {
  Bihom r = a;
  for (auto& row : r.z)
    for (auto& v : row) v = v.pow(k);
  return r;
}

bool bihom_equal(const Bihom& a, const Bihom& b) {
  return a.group.same(b.group) && a.z == b.z;
}

bool bihom_trivial(const Bihom& a) {
  for (const auto& row : a.z)
    for (const auto& v : row)
      if (!v.is_one()) return false;
  return true;
}

bool is_skew(const Bihom& b) {
  guard_order(b.group, "is_skew");
  const auto elems = enumerate_elements(b.group);
  for (const AbElem& g : elems)
    for (const AbElem& h : elems)
      if (!(bihom_eval(b, g, h) * bihom_eval(b, h, g)).is_one()) return false;
  return true;
}

bool is_alternating(const Bihom& b) {
  guard_order(b.group, "is_alternating");
  for (const AbElem& g : enumerate_elements(b.group))
    if (!bihom_eval(b, g, g).is_one()) return false;
  return true;
}

Cocycle2 bilinear_cocycle(FinAbGroup group, std::vector<std::vector<RootOfUnity>> z) {
  // reuse the bihom entry validation; a bilinear form always satisfies the
  // cocycle identity
  Bihom b = make_bihom(std::move(group), std::move(z));
  Cocycle2 k;
  k.group = std::move(b.group);
  k.bilinear = true;
  k.z = std::move(b.z);
  k.normalized = true;
  return k;
}

Cocycle2 table_cocycle(FinAbGroup group, std::vector<RootOfUnity> table) {
  const std::int64_t n = group.order();
  if (static_cast<std::int64_t>(table.size()) != n * n)
    throw GroupMismatch("cocycle table size mismatch");
  Cocycle2 k;
  k.group = std::move(group);
  k.bilinear = false;
  k.table = std::move(table);
  if (!cocycle_identity_check(k)) throw NotACocycle("table violates the cocycle identity");
  const AbElem e(k.group.rank(), 0);
  k.normalized = cocycle_eval(k, e, e).is_one();
  return k;
}

Cocycle2 trivial_cocycle(const FinAbGroup& group) {
  const int r = group.rank();
  Cocycle2 k;
  k.group = group;
  k.bilinear = true;
  k.z.assign(r, std::vector<RootOfUnity>(r));
  k.normalized = true;
  return k;
}

Cocycle2 coboundary(const FinAbGroup& group, const std::vector<RootOfUnity>& rho) {
  guard_order(group, "coboundary");
  const std::int64_t n = group.order();
  if (static_cast<std::int64_t>(rho.size()) != n)
    throw GroupMismatch("chain must have one value per group element");
  std::vector<RootOfUnity> t(std::size_t(n) * std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const AbElem g = ab_element(group, i);
    for (std::int64_t j = 0; j < n; ++j) {
      const AbElem h = ab_element(group, j);
      const std::int64_t s = ab_index(group, ab_add(group, g, h));
      t[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
          rho[std::size_t(i)] * rho[std::size_t(j)] * rho[std::size_t(s)].inverse();
    }
  }
  return table_cocycle(group, std::move(t));
}

RootOfUnity cocycle_eval(const Cocycle2& k, const AbElem& g, const AbElem& h) {
  check_elem(k.group, g, "cocycle_eval");
  check_elem(k.group, h, "cocycle_eval");
  if (k.bilinear) {
    RootOfUnity acc;
    for (int i = 0; i < k.group.rank(); ++i)
      for (int j = 0; j < k.group.rank(); ++j) acc = acc * k.z[i][j].pow(g[i] * h[j]);
    return acc;
  }
  const std::int64_t n = k.group.order();
  const AbElem gr = ab_reduce(k.group, g);
  const AbElem hr = ab_reduce(k.group, h);
  return k.table[std::size_t(ab_index(k.group, gr)) * std::size_t(n) +
                 std::size_t(ab_index(k.group, hr))];
}

Cocycle2 cocycle_mul(const Cocycle2& a, const Cocycle2& b) {
  check_same_group(a.group, b.group, "cocycle_mul");
  if (a.bilinear && b.bilinear) {
    Cocycle2 r = a;
    for (int i = 0; i < a.group.rank(); ++i)
      for (int j = 0; j < a.group.rank(); ++j) r.z[i][j] = a.z[i][j] * b.z[i][j];
    r.normalized = a.normalized && b.normalized;
    return r;
  }
  guard_order(a.group, "cocycle_mul");
  std::vector<RootOfUnity> ta = tabulate(a), tb = tabulate(b);
  for (std::size_t i = 0; i < ta.size(); ++i) ta[i] = ta[i] * tb[i];
  Cocycle2 r;
  r.group = a.group;
  r.bilinear = false;
  r.table = std::move(ta);
  const AbElem e(a.group.rank(), 0);
  r.normalized = cocycle_eval(r, e, e).is_one();
  return r;
}

bool cocycle_equal(const Cocycle2& a, const Cocycle2& b) {
  if (!a.group.same(b.group)) return false;
  guard_order(a.group, "cocycle_equal");
  return tabulate(a) == tabulate(b);
}

bool cocycle_identity_check(const Cocycle2& k) {
  guard_order(k.group, "cocycle_identity_check");
  const auto elems = enumerate_elements(k.group);
  for (const AbElem& g : elems)
    for (const AbElem& h : elems) {
      const AbElem gh = ab_add(k.group, g, h);
      for (const AbElem& l : elems) {
        const AbElem hl = ab_add(k.group, h, l);
        const RootOfUnity lhs = cocycle_eval(k, g, h) * cocycle_eval(k, gh, l);
        const RootOfUnity rhs = cocycle_eval(k, h, l) * cocycle_eval(k, g, hl);
        if (lhs != rhs) return false;
      }
    }
  return true;
}

Cocycle2 normalize(const Cocycle2& k) {
  if (k.bilinear) {
    Cocycle2 r = k;
    r.normalized = true;
    return r;
  }
  // kappa(g, e) = kappa(e, g) = kappa(e, e) for any cocycle, so dividing by
  // the constant kappa(e, e) normalizes while shifting by a coboundary
  const AbElem e(k.group.rank(), 0);
  const RootOfUnity c = cocycle_eval(k, e, e);
  Cocycle2 r = k;
  for (auto& v : r.table) v = v * c.inverse();
  r.normalized = true;
  return r;
}

Bihom skew(const Cocycle2& k) {
  const int r = k.group.rank();
  if (k.bilinear) {
    std::vector<std::vector<RootOfUnity>> z(r, std::vector<RootOfUnity>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) z[i][j] = k.z[i][j] * k.z[j][i].inverse();
    return make_bihom(k.group, std::move(z));
  }
  guard_order(k.group, "skew");
  // fit the generator matrix, then verify the fit exhaustively
  std::vector<std::vector<RootOfUnity>> z(r, std::vector<RootOfUnity>(r));
  for (int i = 0; i < r; ++i) {
    AbElem gi(r, 0);
    gi[i] = 1;
    for (int j = 0; j < r; ++j) {
      AbElem gj(r, 0);
      gj[j] = 1;
      z[i][j] = cocycle_eval(k, gi, gj) * cocycle_eval(k, gj, gi).inverse();
    }
  }
  Bihom b;
  try {
    b = make_bihom(k.group, std::move(z));
  } catch (const BadRootOfUnity&) {
    throw NotACocycle("skew values are not a bihomomorphism");
  }
  const auto elems = enumerate_elements(k.group);
  for (const AbElem& g : elems)
    for (const AbElem& h : elems) {
      const RootOfUnity direct = cocycle_eval(k, g, h) * cocycle_eval(k, h, g).inverse();
      if (direct != bihom_eval(b, g, h))
        throw NotACocycle("skew values are not a bihomomorphism");
    }
  return b;
}

Cocycle2 lift_alt_to_cocycle(const Bihom& b) {
  if (!is_alternating(b)) throw NotAlternating("lift needs an alternating bihomomorphism");
  const int r = b.group.rank();
  std::vector<std::vector<RootOfUnity>> z(r, std::vector<RootOfUnity>(r));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) z[i][j] = b.z[i][j];
  return bilinear_cocycle(b.group, std::move(z));
}

Bihom modified_obstruction(const Bihom& b, const Cocycle2& kappa) {
  check_same_group(b.group, kappa.group, "modified_obstruction");
  return bihom_mul(b, bihom_inv(skew(kappa)));
}

TorsionQuotient two_torsion_quotient(const FinAbGroup& k) {
  TorsionQuotient q;
  std::vector<std::int64_t> orders;
  for (int i = 0; i < k.rank(); ++i) {
    if (k.orders[i] % 2 != 0) continue;
    orders.push_back(2);
    Bihom d = trivial_bihom(k);
    d.z[i][i] = RootOfUnity::make(1, 2);
    q.generators.push_back(std::move(d));
  }
  if (orders.empty()) orders.push_back(1);
  q.quotient = make_fin_ab_group(std::move(orders));
  return q;
}

SkewDecomposition decompose_skew(const Bihom& b) {
  if (!is_skew(b)) throw NotAlternating("decomposition needs a skew bihomomorphism");
  Bihom diag = trivial_bihom(b.group);
  for (int i = 0; i < b.group.rank(); ++i) diag.z[i][i] = b.z[i][i];
  return SkewDecomposition{bihom_mul(b, bihom_inv(diag)), std::move(diag)};
}

std::vector<AbElem> enumerate_elements(const FinAbGroup& g) {
  guard_order(g, "enumerate_elements");
  const std::int64_t n = g.order();
  std::vector<AbElem> out;
  out.reserve(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(ab_element(g, i));
  return out;
}

namespace {

// all skew matrices: free strict upper triangle of order gcd(n_i, n_j),
// forced lower triangle, diagonal signs on even factors
std::vector<Bihom> enumerate_with_diag(const FinAbGroup& g, bool diag_signs) {
  guard_order(g, "bihom enumeration");
  const int r = g.rank();
  struct Slot {
    int i, j;
    std::int64_t count;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      slots.push_back({i, j, std::gcd(g.orders[i], g.orders[j])});
  if (diag_signs)
    for (int i = 0; i < r; ++i)
      if (g.orders[i] % 2 == 0) slots.push_back({i, i, 2});
  std::int64_t total = 1;
  for (const Slot& s : slots) {
    total *= s.count;
    if (total > kOrderGuard * kOrderGuard)
      throw OrderTooLarge("bihom enumeration: family too large");
  }
  std::vector<Bihom> out;
  out.reserve(std::size_t(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    Bihom b = trivial_bihom(g);
    std::int64_t rest = idx;
    for (const Slot& s : slots) {
      const std::int64_t pick = rest % s.count;
      rest /= s.count;
      const RootOfUnity v = RootOfUnity::make(pick, s.count);
      b.z[s.i][s.j] = v;
      if (s.i != s.j) b.z[s.j][s.i] = v.inverse();
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

std::vector<Bihom> enumerate_skew_bihoms(const FinAbGroup& g) {
  return enumerate_with_diag(g, true);
}

std::vector<Bihom> enumerate_alternating_bihoms(const FinAbGroup& g) {
  return enumerate_with_diag(g, false);
}

std::string bihom_to_json(const Bihom& b) {
  nlohmann::json j;
  j["orders"] = b.group.orders;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : b.z) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(v.str());
    rows.push_back(std::move(r));
  }
  j["z"] = std::move(rows);
  return j.dump();
}

Bihom bihom_from_json(const FinAbGroup& group, const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto orders = j.at("orders").get<std::vector<std::int64_t>>();
  if (orders != group.orders) throw GroupMismatch("stored bihom over a different group");
  std::vector<std::vector<RootOfUnity>> z;
  for (const auto& row : j.at("z")) {
    std::vector<RootOfUnity> zr;
    for (const auto& cell : row) {
      const std::string s = cell.get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) throw BadRootOfUnity("expected 'p/q', got '" + s + "'");
      try {
        zr.push_back(RootOfUnity::make(std::stoll(s.substr(0, slash)),
                                       std::stoll(s.substr(slash + 1))));
      } catch (const std::invalid_argument&) {
        throw BadRootOfUnity("expected 'p/q', got '" + s + "'");
      }
    }
    z.push_back(std::move(zr));
  }
  return make_bihom(group, std::move(z));
}

}  // namespace loopcx
