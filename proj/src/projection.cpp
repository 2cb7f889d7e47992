#include "fdcalc/projection.hpp"

#include "fdcalc/polyalg.hpp"

#include <algorithm>

namespace fdc {

namespace {

// Nonzero reducta of f in var, stopping after the first one with a constant leading coefficient.
std::vector<Poly> reducta(const Poly& f, std::size_t var) {
  std::vector<Poly> out;
  Poly r = f;
  while (!r.is_zero()) {
    out.push_back(r);
    if (!r.involves(var) || r.leading_coefficient_in(var).is_constant()) break;
    r = reductum(r, var);
  }
  return out;
}

void push_nonconstant(std::vector<Poly>& out, const Poly& p) {
  if (!p.is_constant()) out.push_back(p);
}

}  // namespace

std::vector<Poly> project_polys(const std::vector<Poly>& polys, std::size_t var, ProjectionKind kind) {
  std::vector<Poly> out;
  if (kind == ProjectionKind::McCallum) {
    for (const auto& f : polys) {
      auto cs = f.coefficients(var);
      for (std::size_t i = cs.size(); i-- > 0;) {
        if (cs[i].is_zero()) continue;
        if (cs[i].is_constant()) break;
        out.push_back(cs[i]);
      }
      if (f.degree(var) >= 2) push_nonconstant(out, discriminant(f, var));
    }
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (std::size_t j = i + 1; j < polys.size(); ++j) push_nonconstant(out, resultant(polys[i], polys[j], var));
    return out;
  }
  std::vector<std::vector<Poly>> red;
  for (const auto& f : polys) red.push_back(reducta(f, var));
  for (const auto& rs : red)
    for (const auto& r : rs) {
      push_nonconstant(out, r.leading_coefficient_in(var));
      Poly d = r.derivative(var);
      std::size_t m = r.degree(var);
      for (std::size_t j = 0; j + 1 < m; ++j) push_nonconstant(out, psc(r, d, var, j));
    }
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t k = i + 1; k < polys.size(); ++k) {
      const Poly& g = polys[k];
      for (const auto& r : red[i]) {
        std::size_t m = std::min(r.degree(var), g.degree(var));
        for (std::size_t j = 0; j < m; ++j) push_nonconstant(out, psc(r, g, var, j));
      }
    }
  return out;
}

void add_factors(const Poly& p, std::vector<std::vector<Poly>>& levels) {
  if (p.is_zero() || p.is_constant()) return;
  auto k = static_cast<std::size_t>(p.main_variable());
  Poly c = content(p, k);
  Poly pp = primitive_part(p, k);
  levels[k].push_back(squarefree_part(pp));
  add_factors(c, levels);
}

ProjectionSet projection_factors(const std::vector<Poly>& polys, std::size_t nvars, ProjectionKind kind,
                                 std::size_t stop, ProjectionBudget budget) {
  ProjectionSet ps;
  ps.nvars = nvars;
  ps.kind = kind;
  ps.levels.assign(nvars, {});
  for (const auto& p : polys) add_factors(p.with_nvars(nvars), ps.levels);
  for (std::size_t k = nvars; k-- > 0;) {
    auto& lv = ps.levels[k];
    lv = coprime_basis(lv);
    if (budget.max_degree) {
      auto too_big = [&](const Poly& p) { return p.total_degree() > budget.max_degree; };
      if (std::any_of(lv.begin(), lv.end(), too_big)) {
        ps.truncated = true;
        lv.erase(std::remove_if(lv.begin(), lv.end(), too_big), lv.end());
      }
    }
    if (budget.max_factors_per_level && lv.size() > budget.max_factors_per_level) {
      ps.truncated = true;
      std::stable_sort(lv.begin(), lv.end(),
                       [](const Poly& a, const Poly& b) { return a.total_degree() < b.total_degree(); });
      lv.resize(budget.max_factors_per_level);
      std::sort(lv.begin(), lv.end());
    }
    if (k <= stop) continue;
    for (const auto& q : project_polys(lv, k, kind)) add_factors(q, ps.levels);
  }
  return ps;
}

}  // namespace fdc
