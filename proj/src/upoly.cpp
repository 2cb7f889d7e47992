#include "fdcalc/upoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fdc {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::from_poly(const Poly& p, std::size_t var) {
  std::vector<Rational> c(p.degree(var) + 1);
  for (const auto& [e, v] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != var && e[i] != 0) throw std::invalid_argument("UPoly::from_poly: polynomial is not univariate");
    c[e[var]] += v;
  }
  return UPoly(std::move(c));
}

Poly UPoly::to_poly(std::size_t nvars, std::size_t var) const {
  Poly r(nvars);
  Exponents e(nvars, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    e[var] = static_cast<std::uint32_t>(i);
    r.add_term(e, c_[i]);
  }
  return r;
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const Rational& s) {
  std::vector<Rational> c = a.c_;
  for (auto& v : c) v *= s;
  return UPoly(std::move(c));
}

Rational UPoly::evaluate(const Rational& x) const {
  Rational r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<long>(i);
  return UPoly(std::move(c));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return *this * (Rational(1) / lc());
}

UPoly UPoly::primitive() const {
  if (is_zero()) return *this;
  Integer g = 0, l = 1;
  for (const auto& c : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational s(l, g);
  s.canonicalize();
  if (lc() < 0) s = -s;
  return *this * s;
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.is_zero()) throw std::domain_error("UPoly division by zero");
  std::vector<Rational> rem = a.c_;
  int db = b.degree();
  std::vector<Rational> quo(std::max(0, a.degree() - db + 1));
  Rational inv = Rational(1) / b.lc();
  for (int i = a.degree(); i >= db; --i) {
    Rational f = rem[i] * inv;
    if (f == 0) continue;
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c_[j];
  }
  rem.resize(std::max(0, db));
  q = UPoly(std::move(quo));
  r = UPoly(std::move(rem));
}

UPoly operator%(const UPoly& a, const UPoly& b) {
  UPoly q, r;
  UPoly::divmod(a, b, q, r);
  return r;
}

UPoly operator/(const UPoly& a, const UPoly& b) {
  UPoly q, r;
  UPoly::divmod(a, b, q, r);
  return q;
}

std::string UPoly::to_string(const std::string& var) const {
  std::vector<std::string> names{var};
  return to_poly(1, 0).to_string(names);
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = x % y;
    x = std::move(y);
    y = r.primitive();
  }
  return x.is_zero() ? x : x.primitive();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.primitive();
  UPoly g = gcd(p, p.derivative());
  return (p / g).primitive();
}

Rational root_bound(const UPoly& p) {
  if (p.degree() <= 0) return Rational(1);
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeffs()[i] / p.lc())));
  return m + 1;
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    UPoly r = chain[chain.size() - 2] % chain.back();
    if (r.is_zero()) break;
    // Positive rescaling preserves sign sequences.
    UPoly n = -r;
    Rational s = abs(n.lc());
    chain.push_back(n * (Rational(1) / s));
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

namespace {

int variations(const std::vector<UPoly>& chain, const Rational& x) {
  int v = 0, last = 0;
  for (const auto& s : chain) {
    int sg = s.sign_at(x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++v;
    last = sg;
  }
  return v;
}

}  // namespace

int sturm_count(const std::vector<UPoly>& chain, const Rational& a, const Rational& b) {
  return variations(chain, a) - variations(chain, b);
}

void IsolatingInterval::refine() {
  if (exact()) return;
  Rational m = midpoint();
  int sm = poly.sign_at(m);
  if (sm == 0) {
    lo = hi = m;
    return;
  }
  int sl = poly.sign_at(lo);
  if (sl == sm)
    lo = m;
  else
    hi = m;
}

void IsolatingInterval::refine_to(const Rational& width) {
  while (!exact() && hi - lo > width) refine();
}

namespace {

// Tests whether the isolated root is rational using the fact that for a
// primitive integer polynomial with leading coefficient a_n, a rational root
// r satisfies a_n * r in Z.
void detect_rational(IsolatingInterval& iv) {
  if (iv.exact()) return;
  UPoly prim = iv.poly.primitive();
  Rational an = abs(prim.lc());
  iv.refine_to(Rational(1) / (an * 2));
  if (iv.exact()) return;
  Integer k = ceil(iv.lo * an);
  Rational cand = Rational(k) / an;
  if (cand > iv.lo && cand < iv.hi && iv.poly.sign_at(cand) == 0) iv.lo = iv.hi = cand;
}

void isolate(const std::vector<UPoly>& chain, const UPoly& p, Rational lo, Rational hi, int count,
             std::vector<IsolatingInterval>& out) {
  // Invariant: count roots in (lo, hi), neither endpoint a root.
  if (count == 0) return;
  if (count == 1) {
    out.push_back({lo, hi, p});
    return;
  }
  Rational mid = (lo + hi) / 2;
  if (p.sign_at(mid) == 0) {
    int left = sturm_count(chain, lo, mid) - 1;
    // Shrink around the rational root so it gets its own exact entry.
    Rational eps = (hi - lo) / 4;
    Rational a = mid - eps, b = mid + eps;
    while (true) {
      if (p.sign_at(a) != 0 && p.sign_at(b) != 0 && sturm_count(chain, a, b) == 1) break;
      eps /= 2;
      a = mid - eps;
      b = mid + eps;
    }
    int l = sturm_count(chain, lo, a);
    isolate(chain, p, lo, a, l, out);
    out.push_back({mid, mid, p});
    isolate(chain, p, b, hi, count - l - 1, out);
    (void)left;
    return;
  }
  int l = sturm_count(chain, lo, mid);
  isolate(chain, p, lo, mid, l, out);
  isolate(chain, p, mid, hi, count - l, out);
}

}  // namespace

std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p) {
  if (p.is_zero()) throw std::domain_error("isolate_real_roots: zero polynomial");
  std::vector<IsolatingInterval> out;
  if (p.degree() == 0) return out;
  UPoly q = squarefree_part(p);
  if (q.degree() == 1) {
    Rational r = -q[0] / q[1];
    out.push_back({r, r, q});
    return out;
  }
  auto chain = sturm_chain(q);
  Rational b = root_bound(q) + 1;
  int n = sturm_count(chain, -b, b);
  isolate(chain, q, -b, b, n, out);
  for (auto& iv : out) detect_rational(iv);
  return out;
}

int compare_root(IsolatingInterval& a, const Rational& x) {
  while (true) {
    if (a.exact()) return sgn(a.lo - x);
    if (x <= a.lo) return 1;
    if (x >= a.hi) return -1;
    if (a.poly.sign_at(x) == 0) return 0;
    a.refine();
  }
}

int compare_roots(IsolatingInterval& a, IsolatingInterval& b) {
  if (a.exact()) return -compare_root(b, a.lo);
  if (b.exact()) return compare_root(a, b.lo);
  UPoly g = gcd(a.poly, b.poly);
  if (g.degree() > 0) {
    Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo < hi) {
      auto chain = sturm_chain(g);
      if (sturm_count(chain, lo, hi) > 0) return 0;
    }
  }
  while (true) {
    if (a.hi <= b.lo) return -1;
    if (b.hi <= a.lo) return 1;
    a.refine();
    b.refine();
    if (a.exact() || b.exact()) return compare_roots(a, b);
  }
}

}  // namespace fdc
