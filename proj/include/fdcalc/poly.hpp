#pragma once

#include "fdcalc/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fdc {

using Exponents = std::vector<std::uint32_t>;

/// Orders monomials lexicographically with the highest-index variable most
/// significant, so the leading term of a polynomial carries the largest power
/// of its last variable.
struct ReverseLex {
  bool operator()(const Exponents& a, const Exponents& b) const {
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
  }
};

/// Sparse multivariate polynomial over the rationals in a fixed number of
/// indexed variables x_0, ..., x_{n-1}. Zero coefficients are never stored.
class Poly {
 public:
  using Terms = std::map<Exponents, Rational, ReverseLex>;

  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t index);
  static Poly monomial(const Exponents& e, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  std::size_t size() const { return terms_.size(); }

  /// Total degree; 0 for the zero polynomial.
  std::uint32_t total_degree() const;
  std::uint32_t degree(std::size_t var) const;
  bool involves(std::size_t var) const { return degree(var) > 0; }
  /// Highest-index variable present, or -1 for constants.
  int main_variable() const;

  const Rational& leading_coefficient() const;  // in ReverseLex order
  const Exponents& leading_exponents() const;

  void add_term(const Exponents& e, const Rational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  /// Total order used for canonical sets of polynomials.
  friend bool operator<(const Poly& a, const Poly& b);

  Poly pow(unsigned k) const;

  /// Coefficients with respect to `var`: result[i] multiplies var^i. The
  /// returned polynomials keep the same variable count with var absent.
  std::vector<Poly> coefficients(std::size_t var) const;
  static Poly from_coefficients(const std::vector<Poly>& coeffs, std::size_t var);
  Poly leading_coefficient_in(std::size_t var) const;

  Poly derivative(std::size_t var) const;
  Poly substitute(std::size_t var, const Rational& value) const;
  /// Replaces x_var by the polynomial q (same variable count).
  Poly compose(std::size_t var, const Poly& q) const;
  Rational evaluate(std::span<const Rational> point) const;

  /// Renames variables: variable i becomes map[i]; requires map[i] < nvars
  /// for every variable actually present.
  Poly remap(std::size_t nvars, std::span<const std::size_t> map) const;
  Poly with_nvars(std::size_t nvars) const;

  /// Scales to an integer-coefficient primitive polynomial with positive
  /// leading coefficient. The zero polynomial is returned unchanged.
  Poly normalized() const;
  /// Makes the leading coefficient 1.
  Poly monic() const;

  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const;

 private:
  std::size_t nvars_;
  Terms terms_;
};

/// Exact multivariate division; throws std::domain_error when b does not divide a.
Poly divide_exact(const Poly& a, const Poly& b);
/// Returns true and sets q when b divides a.
bool try_divide(const Poly& a, const Poly& b, Poly& q);

}  // namespace fdc
