#include "fdcalc/realpoint.hpp"

#include "fdcalc/polyalg.hpp"
#include "fdcalc/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fdc {

namespace {

Interval imul(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval ipow(const Interval& a, std::uint32_t e) {
  if (e == 0) return {1, 1};
  Interval r = a;
  for (std::uint32_t i = 1; i < e; ++i) r = imul(r, a);
  if (e % 2 == 0 && a.lo < 0 && a.hi > 0) r.lo = 0;
  return r;
}

// Scales by a positive rational so the integer coefficients are primitive.
Poly shrink(const Poly& p) {
  if (p.is_zero()) return p;
  Poly q = p.normalized();
  if ((q.leading_coefficient() > 0) != (p.leading_coefficient() > 0)) q = -q;
  return q;
}

}  // namespace

struct Coord {
  bool exact = true;
  Rational value;
  Poly def;  // in x_0..x_i, leading coefficient nonzero at the point, squarefree there
  Rational lo, hi;
  int sign_lo = 0;
};

struct RealPoint::Impl {
  std::vector<Coord> c;
  mutable std::recursive_mutex mu;

  std::size_t dim() const { return c.size(); }

  Poly lift(const Poly& p, std::size_t n) const { return p.with_nvars(n); }

  // Substitutes exact coordinates below k and reduces by the defining
  // polynomials of algebraic ones (pseudo-remainders, so only zero-ness is kept).
  Poly reduce(Poly p, std::size_t k) {
    for (std::size_t i = k; i-- > 0;) {
      if (!p.involves(i)) continue;
      if (c[i].exact) {
        p = p.substitute(i, c[i].value);
      } else if (p.degree(i) >= c[i].def.degree(i)) {
        p = prem(p, lift(c[i].def, p.nvars()), i);
      }
    }
    return shrink(p);
  }

  // Like reduce, but keeps track of the sign factor introduced by the
  // pseudo-remainders so that sign(result) = factor * sign(p) at the point.
  Poly reduce_signed(Poly p, std::size_t k, int& factor) {
    for (std::size_t i = k; i-- > 0;) {
      if (!p.involves(i)) continue;
      if (c[i].exact) {
        p = p.substitute(i, c[i].value);
      } else if (p.degree(i) >= c[i].def.degree(i)) {
        std::uint32_t m = p.degree(i) - c[i].def.degree(i) + 1;
        if (m % 2 == 1) factor *= sign(c[i].def.leading_coefficient_in(i), i);
        p = prem(p, lift(c[i].def, p.nvars()), i);
      }
    }
    return shrink(p);
  }

  // Removes leading terms in x_j whose coefficients vanish at the point.
  Poly trim(Poly p, std::size_t j) {
    while (!p.is_zero() && p.involves(j)) {
      Poly lc = p.leading_coefficient_in(j);
      if (!is_zero(lc, j)) break;
      p = reductum(p, j);
    }
    if (!p.is_zero() && !p.involves(j) && is_zero(p, j)) p = Poly(p.nvars());
    return p;
  }

  // gcd in K_j[x_j] of a and b, where K_j is generated by coordinates below j.
  Poly tower_gcd(Poly a, Poly b, std::size_t j) {
    a = trim(reduce(a, j), j);
    b = trim(reduce(b, j), j);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree(j) < b.degree(j)) std::swap(a, b);
    while (!b.is_zero()) {
      if (!b.involves(j)) return Poly::constant(a.nvars(), 1);
      Poly r = trim(reduce(prem(a, b, j), j), j);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  // Exact division a / g in K_j[x_j] when g divides a there.
  Poly tower_quotient(const Poly& a, const Poly& g, std::size_t j) {
    return trim(reduce(pquo(a, g, j), j), j);
  }

  bool is_zero(const Poly& p0, std::size_t k) {
    while (true) {
      Poly p = reduce(p0, k);
      if (p.is_zero()) return true;
      int mv = p.main_variable();
      if (mv < 0) return false;
      auto j = static_cast<std::size_t>(mv);
      Coord& cj = c[j];
      Poly def = lift(cj.def, p.nvars());
      Poly g = tower_gcd(p, def, j);
      if (!g.involves(j)) return false;
      Poly cof = tower_quotient(def, g, j);
      int slo = sign(g.substitute(j, cj.lo), j);
      int shi = sign(g.substitute(j, cj.hi), j);
      if (slo != shi) {
        cj.def = g.with_nvars(j + 1);
        cj.sign_lo = slo;
        return true;
      }
      if (!cof.involves(j)) throw std::logic_error("tower split lost the isolated root");
      cj.def = cof.with_nvars(j + 1);
      cj.sign_lo = sign(cof.substitute(j, cj.lo), j);
      // The split shrank the tower; loop so the reduction uses the new factor.
    }
  }

  Interval eval(const Poly& p, std::size_t k) const {
    std::vector<Interval> box(k);
    for (std::size_t i = 0; i < k; ++i)
      box[i] = c[i].exact ? Interval{c[i].value, c[i].value} : Interval{c[i].lo, c[i].hi};
    Interval sum{0, 0};
    for (const auto& [e, coef] : p.terms()) {
      Interval t{coef, coef};
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) {
          if (i >= k) throw std::invalid_argument("RealPoint: polynomial involves a variable beyond the point");
          t = imul(t, ipow(box[i], e[i]));
        }
      sum.lo += t.lo;
      sum.hi += t.hi;
    }
    return sum;
  }

  void bisect(std::size_t i) {
    Coord& ci = c[i];
    if (ci.exact) return;
    Rational m = (ci.lo + ci.hi) / 2;
    int s = sign(ci.def.substitute(i, m), i);
    if (s == 0) {
      ci.exact = true;
      ci.value = m;
      return;
    }
    if (s == ci.sign_lo)
      ci.lo = m;
    else
      ci.hi = m;
  }

  int sign(const Poly& p0, std::size_t k) {
    Poly p = p0;
    for (std::size_t i = 0; i < k; ++i)
      if (c[i].exact && p.involves(i)) p = p.substitute(i, c[i].value);
    if (p.is_constant()) return sgn(p.constant_value());
    // Interval evaluation settles most nonzero signs; the exact zero test is
    // only run once a few refinements have failed.
    for (int round = 0;; ++round) {
      if (round == 6 && is_zero(p, k)) return 0;
      for (std::size_t i = 0; i < k; ++i)
        if (c[i].exact && p.involves(i)) p = p.substitute(i, c[i].value);
      if (p.is_constant()) return sgn(p.constant_value());
      Interval v = eval(p, k);
      if (v.lo > 0) return 1;
      if (v.hi < 0) return -1;
      for (std::size_t i = 0; i < k; ++i)
        if (p.involves(i)) bisect(i);
    }
  }
};

RealPoint::RealPoint() : impl_(std::make_unique<Impl>()) {}

RealPoint::RealPoint(const std::vector<Rational>& coords) : impl_(std::make_unique<Impl>()) {
  for (const auto& v : coords) {
    Coord c;
    c.value = v;
    impl_->c.push_back(std::move(c));
  }
}

RealPoint::RealPoint(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

RealPoint::RealPoint(const RealPoint& o) : impl_(std::make_unique<Impl>()) {
  std::lock_guard lock(o.impl_->mu);
  impl_->c = o.impl_->c;
}

RealPoint& RealPoint::operator=(const RealPoint& o) {
  if (this == &o) return *this;
  std::vector<Coord> copy;
  {
    std::lock_guard lock(o.impl_->mu);
    copy = o.impl_->c;
  }
  if (!impl_) impl_ = std::make_unique<Impl>();
  std::lock_guard lock(impl_->mu);
  impl_->c = std::move(copy);
  return *this;
}

RealPoint::RealPoint(RealPoint&&) noexcept = default;
RealPoint& RealPoint::operator=(RealPoint&&) noexcept = default;
RealPoint::~RealPoint() = default;

std::size_t RealPoint::dim() const { return impl_->c.size(); }

bool RealPoint::is_rational(std::size_t i) const {
  std::lock_guard lock(impl_->mu);
  return impl_->c.at(i).exact;
}

bool RealPoint::all_rational() const {
  std::lock_guard lock(impl_->mu);
  return std::all_of(impl_->c.begin(), impl_->c.end(), [](const Coord& c) { return c.exact; });
}

Rational RealPoint::rational(std::size_t i) const {
  std::lock_guard lock(impl_->mu);
  const Coord& c = impl_->c.at(i);
  if (!c.exact) throw std::logic_error("RealPoint: coordinate is not rational");
  return c.value;
}

std::vector<Rational> RealPoint::rationals() const {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(rational(i));
  return out;
}

Interval RealPoint::bounds(std::size_t i) const {
  std::lock_guard lock(impl_->mu);
  const Coord& c = impl_->c.at(i);
  if (c.exact) return {c.value, c.value};
  return {c.lo, c.hi};
}

void RealPoint::refine(std::size_t i, const Rational& width) const {
  std::lock_guard lock(impl_->mu);
  Coord& c = impl_->c.at(i);
  while (!c.exact && c.hi - c.lo > width) impl_->bisect(i);
}

Poly RealPoint::defining_poly(std::size_t i) const {
  std::lock_guard lock(impl_->mu);
  const Coord& c = impl_->c.at(i);
  if (c.exact) return Poly::variable(i + 1, i) - Poly::constant(i + 1, c.value);
  return c.def;
}

int RealPoint::sign(const Poly& p) const {
  std::lock_guard lock(impl_->mu);
  return impl_->sign(p.with_nvars(std::max<std::size_t>(p.nvars(), dim())), dim());
}

RealPoint RealPoint::prefix(std::size_t k) const {
  auto impl = std::make_unique<Impl>();
  std::lock_guard lock(impl_->mu);
  impl->c.assign(impl_->c.begin(), impl_->c.begin() + static_cast<std::ptrdiff_t>(std::min(k, dim())));
  return RealPoint(std::move(impl));
}

RealPoint RealPoint::extended(const Rational& v) const {
  RealPoint r(*this);
  Coord c;
  c.value = v;
  r.impl_->c.push_back(std::move(c));
  return r;
}

std::string RealPoint::to_string(int digits) const {
  Rational w = 1;
  for (int i = 0; i < digits + 1; ++i) w /= 10;
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) os << ", ";
    if (is_rational(i)) {
      os << fdc::to_string(rational(i));
    } else {
      refine(i, w);
      Interval b = bounds(i);
      os << "~" << to_decimal((b.lo + b.hi) / 2, digits);
    }
  }
  os << ")";
  return os.str();
}

std::vector<double> RealPoint::approx() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < dim(); ++i) {
    refine(i, Rational(1, 1000000000));
    Interval b = bounds(i);
    out.push_back(to_double((b.lo + b.hi) / 2));
  }
  return out;
}


namespace {

// Compares coordinate k of p with a rational: -1, 0, 1.
int compare_coord(const RealPoint& p, std::size_t k, const Rational& v) {
  RealPoint base = p.prefix(k);
  Poly def = p.defining_poly(k);
  while (true) {
    Interval b = p.bounds(k);
    if (b.lo == b.hi) return sgn(b.lo - v);
    if (v <= b.lo) return 1;
    if (v >= b.hi) return -1;
    if (base.sign(def.substitute(k, v)) == 0) return 0;
    p.refine(k, (b.hi - b.lo) / 2);
  }
}

int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

std::vector<std::pair<Rational, Rational>> sturm_isolate(RealPoint::Impl& I, const Poly& Q, std::size_t k);

// Eliminates the coordinates below k from Q by resultants with their defining
// polynomials. Empty when the result vanishes identically.
std::optional<UPoly> norm_poly(RealPoint::Impl& I, Poly N, std::size_t k) {
  for (std::size_t i = k; i-- > 0;) {
    if (!N.involves(i)) continue;
    const Coord& ci = I.c[i];
    N = ci.exact ? N.substitute(i, ci.value) : shrink(resultant(ci.def.with_nvars(N.nvars()), N, i));
    if (N.is_zero()) return std::nullopt;
  }
  return UPoly::from_poly(N, k);
}

}  // namespace

Fiber::Fiber(const RealPoint& base, const std::vector<Poly>& polys) : base_(base) {
  const std::size_t k = base_.dim();
  const std::size_t n = k + 1;
  std::vector<Poly> ps;
  for (const auto& p : polys) ps.push_back(p.with_nvars(n));

  auto push_algebraic = [&](const Poly& def, const Rational& lo, const Rational& hi, int sign_lo) {
    RealPoint r(base_);
    Coord c;
    c.exact = false;
    c.def = def;
    c.lo = lo;
    c.hi = hi;
    c.sign_lo = sign_lo;
    r.impl_->c.push_back(std::move(c));
    roots_.push_back(std::move(r));
  };

  if (base_.all_rational()) {
    auto pt = base_.rationals();
    UPoly prod(std::vector<Rational>{1});
    std::vector<UPoly> parts;
    for (auto q : ps) {
      for (std::size_t i = 0; i < k; ++i)
        if (q.involves(i)) q = q.substitute(i, pt[i]);
      UPoly u = UPoly::from_poly(q, k);
      if (u.is_zero()) {
        nullified_ = true;
        continue;
      }
      if (u.degree() <= 0) continue;
      parts.push_back(squarefree_part(u));
      prod = prod * parts.back();
    }
    if (prod.degree() <= 0) return;
    std::sort(parts.begin(), parts.end(), [](const UPoly& a, const UPoly& b) { return a.degree() < b.degree(); });
    for (const auto& iv : isolate_real_roots(prod)) {
      if (iv.exact()) {
        roots_.push_back(base_.extended(iv.lo));
        continue;
      }
      // Define the root by the smallest input factor that has it, so later
      // towers work modulo a low-degree polynomial.
      const UPoly* def = &iv.poly;
      for (const auto& u : parts)
        if (u.sign_at(iv.lo) * u.sign_at(iv.hi) < 0) {
          def = &u;
          break;
        }
      push_algebraic(def->to_poly(n, k), iv.lo, iv.hi, def->sign_at(iv.lo));
    }
    return;
  }

  RealPoint::Impl& I = *base_.impl_;
  std::lock_guard lock(I.mu);
  Poly Q = Poly::constant(n, 1);
  std::vector<Poly> parts;
  for (const auto& p : ps) {
    Poly q = I.trim(I.reduce(p, k), k);
    if (q.is_zero()) {
      nullified_ = true;
      continue;
    }
    if (!q.involves(k)) continue;
    Poly g = I.tower_gcd(q, q.derivative(k), k);
    if (g.involves(k)) q = I.tower_quotient(q, g, k);
    Q = shrink(Q * q);
    parts.push_back(q);
  }
  std::sort(parts.begin(), parts.end(), [k](const Poly& a, const Poly& b) { return a.degree(k) < b.degree(k); });
  Q = I.trim(I.reduce(Q, k), k);
  if (Q.is_zero() || !Q.involves(k)) return;
  {
    Poly g = I.tower_gcd(Q, Q.derivative(k), k);
    if (g.involves(k)) Q = I.tower_quotient(Q, g, k);
  }

  std::vector<std::pair<Rational, Rational>> found;  // (lo, hi), lo == hi for exact
  if (auto N = norm_poly(I, Q, k)) {
    // Every root of Q over the point is a root of the norm. Q is squarefree
    // there, so an isolating interval of the norm holds a root of Q exactly
    // when Q changes sign across it.
    for (const auto& iv : isolate_real_roots(squarefree_part(*N))) {
      if (iv.exact()) {
        if (I.sign(Q.substitute(k, iv.lo), k) == 0) found.emplace_back(iv.lo, iv.lo);
      } else if (I.sign(Q.substitute(k, iv.lo), k) * I.sign(Q.substitute(k, iv.hi), k) < 0) {
        found.emplace_back(iv.lo, iv.hi);
      }
    }
  } else {
    found = sturm_isolate(I, Q, k);
  }
  Poly def = Q.with_nvars(n);
  for (const auto& [lo, h] : found) {
    if (lo == h) {
      roots_.push_back(base_.extended(lo));
      continue;
    }
    Poly d = def;
    for (const auto& q : parts)
      if (I.sign(q.substitute(k, lo), k) * I.sign(q.substitute(k, h), k) < 0) {
        d = q.with_nvars(n);
        break;
      }
    push_algebraic(d, lo, h, I.sign(d.substitute(k, lo), k));
  }
}

namespace {

// Sturm-chain root isolation of Q in x_k directly over the tower.
std::vector<std::pair<Rational, Rational>> sturm_isolate(RealPoint::Impl& I, const Poly& Q, std::size_t k) {
  // Elements are kept so that their signs at the point agree with the true
  // (field) remainders up to positive factors.
  std::vector<Poly> chain{Q};
  {
    int f = 1;
    Poly d = I.trim(I.reduce_signed(Q.derivative(k), k, f), k);
    chain.push_back(f < 0 ? -d : d);
  }
  while (chain.back().involves(k)) {
    const Poly& A = chain[chain.size() - 2];
    const Poly& B = chain.back();
    std::uint32_t d = A.degree(k) - B.degree(k) + 1;
    int s = I.sign(B.leading_coefficient_in(k), k);
    Poly r = prem(A, B, k);
    if (s < 0 && d % 2 == 1) r = -r;
    int f = 1;
    r = I.trim(I.reduce_signed(-r, k, f), k);
    if (f < 0) r = -r;
    if (r.is_zero()) break;
    chain.push_back(std::move(r));
  }

  auto count_var = [&](const Rational& x) {
    std::vector<int> signs;
    for (const auto& s : chain) signs.push_back(I.sign(s.substitute(k, x), k));
    return variations(signs);
  };

  // Cauchy bound from interval enclosures of the coefficients.
  auto coeffs = Q.coefficients(k);
  Interval lc = I.eval(coeffs.back(), k);
  while (lc.lo <= 0 && lc.hi >= 0) {
    for (std::size_t i = 0; i < k; ++i) I.bisect(i);
    lc = I.eval(coeffs.back(), k);
  }
  Rational lcmin = std::min(abs(lc.lo), abs(lc.hi));
  Rational cmax = 0;
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    Interval ci = I.eval(coeffs[i], k);
    cmax = std::max(cmax, Rational(std::max(abs(ci.lo), abs(ci.hi))));
  }
  Rational bound = Rational(ceil(cmax / lcmin) + 2);

  struct Task {
    Rational lo, hi;
    int count;
  };
  std::vector<Task> stack;
  int total = count_var(-bound) - count_var(bound);
  std::vector<std::pair<Rational, Rational>> found;
  stack.push_back({-bound, bound, total});
  while (!stack.empty()) {
    Task t = stack.back();
    stack.pop_back();
    if (t.count == 0) continue;
    if (t.count == 1) {
      found.emplace_back(t.lo, t.hi);
      continue;
    }
    Rational mid = (t.lo + t.hi) / 2;
    if (I.sign(Q.substitute(k, mid), k) == 0) {
      found.emplace_back(mid, mid);
      Rational eps = (t.hi - t.lo) / 4;
      while (true) {
        Rational a = mid - eps, b = mid + eps;
        if (I.sign(Q.substitute(k, a), k) != 0 && I.sign(Q.substitute(k, b), k) != 0 &&
            count_var(a) - count_var(b) == 1) {
          int left = count_var(t.lo) - count_var(a);
          stack.push_back({t.lo, a, left});
          stack.push_back({b, t.hi, t.count - left - 1});
          break;
        }
        eps /= 2;
      }
      continue;
    }
    int left = count_var(t.lo) - count_var(mid);
    stack.push_back({t.lo, mid, left});
    stack.push_back({mid, t.hi, t.count - left});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [lo, hi] : found) {
    if (lo == hi) continue;
    // The interval (lo, hi] might end on a root of Q; that root would have
    // been reported separately, so shrink away from it.
    if (I.sign(Q.substitute(k, hi), k) == 0) {
      Rational eps = (hi - lo) / 2;
      while (I.sign(Q.substitute(k, hi - eps), k) == 0 || count_var(lo) - count_var(hi - eps) != 1) eps /= 2;
      hi = hi - eps;
    }
  }
  return found;
}

}  // namespace

std::pair<std::optional<Rational>, std::optional<Rational>> Fiber::gap_bounds(std::size_t i) const {
  const std::size_t k = base_.dim();
  std::optional<Rational> L, U;
  auto upper_of = [&](const RealPoint& r) { return r.bounds(k).hi; };
  auto lower_of = [&](const RealPoint& r) { return r.bounds(k).lo; };
  while (true) {
    L.reset();
    U.reset();
    if (i > 0) L = upper_of(roots_[i - 1]);
    if (i < roots_.size()) U = lower_of(roots_[i]);
    if (!L || !U || *L < *U) break;
    for (std::size_t j : {i - 1, i}) {
      Interval b = roots_[j].bounds(k);
      roots_[j].refine(k, (b.hi - b.lo) / 2);
    }
  }
  return {L, U};
}

Rational Fiber::gap_point(std::size_t i) const {
  auto [L, U] = gap_bounds(i);
  return simplest_between(L, U);
}

Rational Fiber::gap_random(std::size_t i, double u) const {
  auto [L, U] = gap_bounds(i);
  const long res = 1 << 20;
  long step = std::clamp(static_cast<long>(u * res), 0L, res - 1);
  Rational t(step + 1, res + 1);
  t.canonicalize();
  // Target point, then the simplest rational near it: small denominators keep
  // the fibers lifted over the point cheap.
  Rational x, w;
  if (L && U) {
    x = *L + (*U - *L) * t;
    w = (*U - *L) / 4096;
  } else {
    if (L) x = *L + t * 8;
    else if (U) x = *U - t * 8;
    else x = t * 8 - 4;
    w = Rational(1, 512);
  }
  std::optional<Rational> lo = x - w, hi = x + w;
  if (L && *lo < *L) lo = L;
  if (U && *hi > *U) hi = U;
  return simplest_between(lo, hi);
}

std::size_t Fiber::locate(const Rational& v) const {
  const std::size_t k = base_.dim();
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    int c = compare_coord(roots_[i], k, v);
    if (c > 0) return 2 * i + 1;
    if (c == 0) return 2 * i + 2;
  }
  return 2 * roots_.size() + 1;
}

int compare_coordinate(const RealPoint& a, const RealPoint& b, std::size_t k) {
  if (b.is_rational(k)) return compare_coord(a, k, b.rational(k));
  if (a.is_rational(k)) return -compare_coord(b, k, a.rational(k));
  // b's interval isolates one root of its defining polynomial over the shared base.
  bool on = a.sign(b.defining_poly(k)) == 0;
  while (true) {
    Interval ia = a.bounds(k), ib = b.bounds(k);
    if (ia.hi <= ib.lo) return -1;
    if (ib.hi <= ia.lo) return 1;
    if (on && ib.lo <= ia.lo && ia.hi <= ib.hi) return 0;
    a.refine(k, (ia.hi - ia.lo) / 2);
    b.refine(k, (ib.hi - ib.lo) / 2);
  }
}

}  // namespace fdc
