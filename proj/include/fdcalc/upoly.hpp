#pragma once

#include "fdcalc/poly.hpp"
#include "fdcalc/rational.hpp"

#include <optional>
#include <vector>

namespace fdc {

/// Dense univariate polynomial over the rationals; coeffs[i] multiplies x^i.
/// The coefficient vector never has a trailing zero.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly from_poly(const Poly& p, std::size_t var);
  Poly to_poly(std::size_t nvars, std::size_t var) const;

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& lc() const { return c_.back(); }
  Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  UPoly operator-() const;
  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const Rational& c);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  Rational evaluate(const Rational& x) const;
  int sign_at(const Rational& x) const { return sgn(evaluate(x)); }
  UPoly derivative() const;
  UPoly monic() const;
  /// Integer primitive form with positive leading coefficient.
  UPoly primitive() const;

  static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
  friend UPoly operator%(const UPoly& a, const UPoly& b);
  friend UPoly operator/(const UPoly& a, const UPoly& b);

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);

/// Upper bound on the absolute value of every real root (Cauchy).
Rational root_bound(const UPoly& p);

/// Sturm chain of a squarefree polynomial.
std::vector<UPoly> sturm_chain(const UPoly& p);
/// Number of distinct real roots of the chain's polynomial in (a, b].
int sturm_count(const std::vector<UPoly>& chain, const Rational& a, const Rational& b);

/// Isolating interval for one real root of a squarefree polynomial. Either an
/// exact rational root (lo == hi) or an open interval (lo, hi) containing
/// exactly one root, with neither endpoint a root.
struct IsolatingInterval {
  Rational lo, hi;
  UPoly poly;  // squarefree
  bool exact() const { return lo == hi; }
  /// Halves the interval, possibly landing on the root exactly.
  void refine();
  /// Refines until hi - lo <= width.
  void refine_to(const Rational& width);
  Rational midpoint() const { return (lo + hi) / 2; }
};

/// One interval per distinct real root of p, increasing. Rational roots come
/// back as exact points. Throws std::domain_error on the zero polynomial.
std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p);

/// Compares the roots isolated by two intervals: -1, 0, 1.
int compare_roots(IsolatingInterval& a, IsolatingInterval& b);
/// Compares the isolated root with a rational.
int compare_root(IsolatingInterval& a, const Rational& x);

}  // namespace fdc
