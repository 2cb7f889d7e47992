#pragma once

#include <algorithm>
#include <string>

namespace fdc {

/// A (format, degree) pair. Pairs are ordered componentwise.
struct FDPair {
  unsigned format = 0;
  unsigned degree = 1;

  friend bool operator==(const FDPair&, const FDPair&) = default;
  /// Componentwise order (a partial order).
  bool leq(const FDPair& o) const { return format <= o.format && degree <= o.degree; }
  std::string to_string() const { return "(" + std::to_string(format) + ", " + std::to_string(degree) + ")"; }
};

inline FDPair join(const FDPair& a, const FDPair& b) {
  return {std::max(a.format, b.format), std::max(a.degree, b.degree)};
}

}  // namespace fdc
