#pragma once

#include "fdcalc/environment.hpp"
#include "fdcalc/fdpair.hpp"
#include "fdcalc/formula.hpp"

namespace fdc {

/// Number of distinct variable names of the formula, free (declared) or
/// bound. A name bound by several quantifiers counts once.
std::size_t variable_count(const Formula& psi);

/// Format: max of the atom formats and the variable count. Degree: sum over
/// atom occurrences of the atom degrees. References use the environment's FD.
FDPair fd_of_formula(const Formula& psi, const Environment* env = nullptr);

/// Parse-tree depth: atoms and references 0, every other node adds 1.
unsigned parse_depth(const NodePtr& n);

/// max(format, parse-tree depth).
unsigned pformat_of_formula(const Formula& psi, const Environment* env = nullptr);

}  // namespace fdc
