#pragma once

#include "fdcalc/poly.hpp"
#include "fdcalc/rational.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fdc {

struct Interval {
  Rational lo, hi;
};

/// A point of R^k whose coordinates are real algebraic numbers, stored as a
/// triangular tower: coordinate i is either an exact rational or a root of a
/// polynomial in x_0..x_i, isolated by an open interval in x_i. The tower is
/// refined lazily (dynamic evaluation): zero tests may split a defining
/// polynomial into the factor that actually vanishes at the point.
///
/// Operations are exact. Refinement mutates internal state behind a lock, so
/// a RealPoint may be shared between threads.
class RealPoint {
 public:
  RealPoint();
  explicit RealPoint(const std::vector<Rational>& coords);
  RealPoint(const RealPoint& o);
  RealPoint& operator=(const RealPoint& o);
  RealPoint(RealPoint&&) noexcept;
  RealPoint& operator=(RealPoint&&) noexcept;
  ~RealPoint();

  std::size_t dim() const;
  bool is_rational(std::size_t i) const;
  bool all_rational() const;
  /// Requires is_rational(i).
  Rational rational(std::size_t i) const;
  /// Rational coordinates of the whole point; requires all_rational().
  std::vector<Rational> rationals() const;

  /// Current enclosing interval (degenerate for rational coordinates).
  Interval bounds(std::size_t i) const;
  /// Shrinks coordinate i until its enclosing interval is no wider than width.
  void refine(std::size_t i, const Rational& width) const;
  /// Defining polynomial of coordinate i (in x_0..x_i); for rationals x_i - v.
  Poly defining_poly(std::size_t i) const;

  /// Exact sign of p at the point. p may have any number of variables but
  /// must only involve x_0..x_{dim-1}.
  int sign(const Poly& p) const;

  RealPoint prefix(std::size_t k) const;
  RealPoint extended(const Rational& v) const;

  /// Decimal rendering with the given number of fractional digits.
  std::string to_string(int digits = 6) const;
  std::vector<double> approx() const;

  struct Impl;

 private:
  explicit RealPoint(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
  friend class Fiber;
};

/// Compares coordinate k of two points that agree on coordinates 0..k-1: -1, 0, 1.
int compare_coordinate(const RealPoint& a, const RealPoint& b, std::size_t k);

/// Real roots in x_k of a set of polynomials over a base point of dimension k.
class Fiber {
 public:
  /// polys may involve x_0..x_k where k = base.dim().
  Fiber(const RealPoint& base, const std::vector<Poly>& polys);

  /// True when some input polynomial vanishes identically on the fiber.
  bool nullified() const { return nullified_; }
  std::size_t size() const { return roots_.size(); }
  /// The base point extended by the i-th root (increasing order).
  const RealPoint& root(std::size_t i) const { return roots_[i]; }
  /// A rational strictly inside the i-th gap; gap 0 is below the first root
  /// and gap size() above the last.
  Rational gap_point(std::size_t i) const;
  /// A uniformly chosen rational with the given denominator resolution inside
  /// the i-th gap; `u` in [0,1) selects the position.
  Rational gap_random(std::size_t i, double u) const;
  /// Index of the cell of the fiber containing value v: 2i+1 for gap i, 2i+2
  /// for root i (so odd means sector and even means section, 1-based).
  std::size_t locate(const Rational& v) const;

 private:
  std::pair<std::optional<Rational>, std::optional<Rational>> gap_bounds(std::size_t i) const;
  RealPoint base_;
  std::vector<RealPoint> roots_;
  bool nullified_ = false;
};

}  // namespace fdc
