#pragma once

#include "fdcalc/poly.hpp"

#include <vector>

namespace fdc {

enum class ProjectionKind { McCallum, Collins };

/// One projection step: polys all have main variable `var`; the result holds
/// polynomials in x_0..x_{var-1} (same nvars), unfactored and possibly constant.
///
/// McCallum: coefficients from the leading one down to the first nonzero
/// constant, discriminants, pairwise resultants.
/// Collins (Hong's variant): for every reductum r of f, lc(r) and the psc
/// sequence of (r, r'); psc sequences of (r, g) for pairs f < g.
std::vector<Poly> project_polys(const std::vector<Poly>& polys, std::size_t var, ProjectionKind kind);

/// Projection factors sorted by level: levels[k] is a coprime basis of
/// squarefree primitive polynomials with main variable k.
struct ProjectionSet {
  std::size_t nvars = 0;
  ProjectionKind kind = ProjectionKind::McCallum;
  std::vector<std::vector<Poly>> levels;
  /// Set when a factor budget stopped the projection early; the lower
  /// levels are then incomplete.
  bool truncated = false;
};

struct ProjectionBudget {
  std::size_t max_factors_per_level = 0;  // 0 = unlimited
  std::uint32_t max_degree = 0;           // 0 = unlimited
};

/// Projects the input down to level `stop` (levels below stop are left empty).
ProjectionSet projection_factors(const std::vector<Poly>& polys, std::size_t nvars, ProjectionKind kind,
                                 std::size_t stop = 0, ProjectionBudget budget = {});

/// Squarefree basis factors of a polynomial, grouped by main variable.
void add_factors(const Poly& p, std::vector<std::vector<Poly>>& levels);

}  // namespace fdc
