#include "fdcalc/rational.hpp"

#include <stdexcept>

namespace fdc {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string s(text);
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-')
    throw std::invalid_argument("malformed rational: '" + s + "'");
  Integer n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

int sign(const Rational& q) { return sgn(q); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

namespace {

// Simplest rational in (lo, hi) with 0 <= lo; hi absent means +infinity.
Rational simplest_nonneg(const Rational& lo, const std::optional<Rational>& hi) {
  Integer n = floor(lo) + 1;
  if (!hi || Rational(n) < *hi) {
    // Smallest integer above lo; prefer the floor when lo itself lies strictly inside.
    return Rational(n);
  }
  Integer k = floor(lo);
  // (lo - k, hi - k) lies in [0, 1); invert.
  Rational a = lo - k;
  Rational b = *hi - k;
  std::optional<Rational> inv_hi;
  if (a != 0) inv_hi = 1 / a;
  Rational inner = simplest_nonneg(1 / b, inv_hi);
  return Rational(k) + 1 / inner;
}

}  // namespace

Rational simplest_between(const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  if (lo && hi && !(*lo < *hi)) throw std::invalid_argument("simplest_between: empty interval");
  if ((!lo || *lo < 0) && (!hi || *hi > 0)) return Rational(0);
  if (hi && *hi <= 0) {
    std::optional<Rational> nlo = -*hi;
    std::optional<Rational> nhi;
    if (lo) nhi = -*lo;
    Rational r = simplest_nonneg(*nlo, nhi);
    return -r;
  }
  return simplest_nonneg(*lo, hi);
}

std::string to_decimal(const Rational& q, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(q) * scale;
  Integer t = floor(scaled);
  std::string s = t.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (q < 0) s.insert(0, "-");
  return s;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace fdc
