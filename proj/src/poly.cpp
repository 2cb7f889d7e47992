#include "fdcalc/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fdc {

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  if (c != 0) p.terms_.emplace(Exponents(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("Poly::variable: index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  Poly p(nvars);
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

Poly Poly::monomial(const Exponents& e, const Rational& c) {
  Poly p(e.size());
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

std::uint32_t Poly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), std::uint32_t{0}));
  return d;
}

std::uint32_t Poly::degree(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

int Poly::main_variable() const {
  int best = -1;
  for (const auto& [e, c] : terms_)
    for (std::size_t i = e.size(); i-- > 0;)
      if (e[i] > 0) {
        best = std::max(best, static_cast<int>(i));
        break;
      }
  return best;
}

const Rational& Poly::leading_coefficient() const {
  if (terms_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

const Exponents& Poly::leading_exponents() const {
  if (terms_.empty()) throw std::domain_error("leading exponents of zero polynomial");
  return terms_.begin()->first;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("Poly: variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("Poly: variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

namespace {

// Packs exponent vectors into 64-bit keys when every product exponent fits;
// larger keys compare like ReverseLex-smaller monomials.
int packing_bits(const Poly& a, const Poly& b) {
  std::size_t n = a.nvars();
  if (n == 0) return 0;
  int bits = static_cast<int>(std::min<std::size_t>(64 / n, 32));
  for (std::size_t i = 0; i < n; ++i)
    if ((std::uint64_t{a.degree(i)} + b.degree(i)) >> bits) return -1;
  return bits;
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("Poly: variable count mismatch");
  Poly r(a.nvars_);
  if (a.is_zero() || b.is_zero()) return r;
  int bits = a.size() * b.size() > 16 ? packing_bits(a, b) : -1;
  if (bits <= 0) {
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  auto pack = [&](const Exponents& e) {
    std::uint64_t k = 0;
    for (std::size_t i = e.size(); i-- > 0;) k = (k << bits) | e[i];
    return k;
  };
  std::vector<std::pair<std::uint64_t, const Rational*>> pb;
  for (const auto& [eb, cb] : b.terms_) pb.emplace_back(pack(eb), &cb);
  std::unordered_map<std::uint64_t, Rational> acc;
  acc.reserve(a.size() * b.size());
  Rational t;
  for (const auto& [ea, ca] : a.terms_) {
    std::uint64_t ka = pack(ea);
    for (const auto& [kb, cb] : pb) {
      mpq_mul(t.get_mpq_t(), ca.get_mpq_t(), cb->get_mpq_t());
      auto [it, fresh] = acc.try_emplace(ka + kb);
      if (fresh)
        it->second = t;
      else
        it->second += t;
    }
  }
  std::vector<std::pair<std::uint64_t, Rational*>> out;
  out.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (c != 0) out.emplace_back(k, &c);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  Exponents e(a.nvars_);
  for (const auto& [k, c] : out) {
    std::uint64_t key = k;
    for (std::size_t i = 0; i < e.size(); ++i, key >>= bits) e[i] = static_cast<std::uint32_t>(key & mask);
    r.terms_.emplace_hint(r.terms_.end(), e, std::move(*c));
  }
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

bool operator<(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  ReverseLex less;
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return less(ia->first, ib->first);
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms_.end() && ib != b.terms_.end();
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(nvars_, 1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

std::vector<Poly> Poly::coefficients(std::size_t var) const {
  std::vector<Poly> out(degree(var) + 1, Poly(nvars_));
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[var] = 0;
    out[e[var]].terms_.emplace(std::move(f), c);
  }
  return out;
}

Poly Poly::from_coefficients(const std::vector<Poly>& coeffs, std::size_t var) {
  std::size_t n = coeffs.empty() ? 0 : coeffs.front().nvars();
  Poly r(n);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (const auto& [e, c] : coeffs[i].terms_) {
      Exponents f = e;
      f[var] += static_cast<std::uint32_t>(i);
      r.add_term(f, c);
    }
  return r;
}

Poly Poly::leading_coefficient_in(std::size_t var) const {
  if (is_zero()) return *this;
  return coefficients(var).back();
}

Poly Poly::derivative(std::size_t var) const {
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    r.add_term(f, c * e[var]);
  }
  return r;
}

Poly Poly::substitute(std::size_t var, const Rational& value) const {
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[var] = 0;
    Rational v;
    mpz_pow_ui(v.get_num_mpz_t(), value.get_num_mpz_t(), e[var]);
    mpz_pow_ui(v.get_den_mpz_t(), value.get_den_mpz_t(), e[var]);
    r.add_term(f, c * v);
  }
  return r;
}

Poly Poly::compose(std::size_t var, const Poly& q) const {
  auto cs = coefficients(var);
  Poly r(nvars_);
  for (std::size_t i = cs.size(); i-- > 0;) {
    r = r * q;
    r += cs[i];
  }
  return r;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() < nvars_) throw std::invalid_argument("Poly::evaluate: point too short");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      Rational v;
      mpz_pow_ui(v.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(v.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
      t *= v;
    }
    sum += t;
  }
  return sum;
}

Poly Poly::remap(std::size_t nvars, std::span<const std::size_t> map) const {
  Poly r(nvars);
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars, 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (i >= map.size() || map[i] >= nvars) throw std::out_of_range("Poly::remap: variable not mapped");
      f[map[i]] += e[i];
    }
    r.add_term(f, c);
  }
  return r;
}

Poly Poly::with_nvars(std::size_t nvars) const {
  std::vector<std::size_t> map(nvars_);
  std::iota(map.begin(), map.end(), std::size_t{0});
  return remap(nvars, map);
}

Poly Poly::normalized() const {
  if (is_zero()) return *this;
  Integer g = 0, l = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  if (leading_coefficient() < 0) scale = -scale;
  Poly r = *this;
  r *= scale;
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  r *= Rational(1) / leading_coefficient();
  return r;
}

std::string Poly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  // Print in descending total degree, then by ReverseLex.
  std::vector<std::pair<const Exponents*, const Rational*>> order;
  for (const auto& [e, c] : terms_) order.emplace_back(&e, &c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    auto da = std::accumulate(a.first->begin(), a.first->end(), 0u);
    auto db = std::accumulate(b.first->begin(), b.first->end(), 0u);
    return da > db;
  });
  std::ostringstream os;
  bool first = true;
  for (auto [ep, cp] : order) {
    const Exponents& e = *ep;
    Rational c = *cp;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool is_const = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    bool wrote = false;
    if (c != 1 || is_const) {
      os << fdc::to_string(c);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << (i < names.size() ? names[i] : "x" + std::to_string(i));
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

std::string Poly::to_string() const { return to_string(std::span<const std::string>{}); }

bool try_divide(const Poly& a, const Poly& b, Poly& q) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  q = Poly(a.nvars());
  Poly r = a;
  const Exponents& lb = b.leading_exponents();
  const Rational& cb = b.leading_coefficient();
  Exponents e(a.nvars());
  while (!r.is_zero()) {
    const Exponents& lr = r.leading_exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (lr[i] < lb[i]) return false;
      e[i] = lr[i] - lb[i];
    }
    Poly t = Poly::monomial(e, r.leading_coefficient() / cb);
    q += t;
    r -= t * b;
  }
  return true;
}

Poly divide_exact(const Poly& a, const Poly& b) {
  Poly q;
  if (!try_divide(a, b, q)) throw std::domain_error("divide_exact: division is not exact");
  return q;
}

}  // namespace fdc
