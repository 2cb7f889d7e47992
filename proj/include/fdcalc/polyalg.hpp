#pragma once

#include "fdcalc/poly.hpp"

#include <vector>

namespace fdc {

/// Pseudo-remainder of a by b with respect to var: lc(b)^k * a mod b with
/// k = max(deg a - deg b + 1, 0).
Poly prem(const Poly& a, const Poly& b, std::size_t var);
/// Pseudo-quotient matching prem: lc(b)^k * a = q * b + prem(a, b).
Poly pquo(const Poly& a, const Poly& b, std::size_t var);

/// Content with respect to var (gcd of the coefficients), normalized.
Poly content(const Poly& p, std::size_t var);
Poly primitive_part(const Poly& p, std::size_t var);

/// Multivariate gcd over Q, normalized (integer primitive, positive leading coefficient).
Poly gcd(const Poly& a, const Poly& b);

/// Squarefree part (product of distinct irreducible factors), normalized.
Poly squarefree_part(const Poly& p);

/// Pairwise coprime squarefree non-constant polynomials with the same zero set
/// as the product of the inputs. Output is sorted and normalized.
std::vector<Poly> coprime_basis(const std::vector<Poly>& polys);

/// Determinant by fraction-free Bareiss elimination.
Poly determinant(std::vector<std::vector<Poly>> m);

/// j-th principal subresultant coefficient of f and g in var.
Poly psc(const Poly& f, const Poly& g, std::size_t var, std::size_t j);
Poly resultant(const Poly& f, const Poly& g, std::size_t var);
/// res(f, f') / lc(f), up to sign.
Poly discriminant(const Poly& f, std::size_t var);

/// Drops the leading coefficient (in var) and returns the remaining polynomial.
Poly reductum(const Poly& p, std::size_t var);

}  // namespace fdc
