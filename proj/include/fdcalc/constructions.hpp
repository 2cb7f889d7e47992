#pragma once

#include "fdcalc/environment.hpp"
#include "fdcalc/formula.hpp"

#include <utility>
#include <vector>

namespace fdc {

/// Set of points where every coordinate of a function is differentiable.
/// `graph` has l + k free variables: the first l are the arguments, the
/// last k the values. Each coordinate contributes the epsilon-delta
/// condition with an l-block of slope variables.
Formula diff_locus_formula(const Formula& graph, std::size_t k);

/// Local maxima of the linear functional sum c_i x_i restricted to X.
Formula local_maxima_formula(const Formula& X, const std::vector<Rational>& functional);

/// For X_a, X_b in R^l: the pair (points (x, y) of X_a x X_b with
/// x_i = y_i for i < n, the same with x_n = y_n added). n is 1-based.
std::pair<Formula, Formula> diagonal_formulas(const Formula& Xa, const Formula& Xb, std::size_t n);

/// Preimage of X in (0,1)^l under x -> (x - 1/2) / (x - x^2) in each free
/// coordinate. Denominators are cleared with even powers of 2x(1 - x).
Formula rescale_to_unit(const Formula& X, const Environment* env = nullptr);

/// The coordinate map used by rescale_to_unit, on a rational in (0,1).
Rational unit_to_real(const Rational& t);

}  // namespace fdc
