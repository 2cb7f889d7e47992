#pragma once

#include "fdcalc/environment.hpp"
#include "fdcalc/formula.hpp"
#include "fdcalc/realpoint.hpp"

#include <string>
#include <vector>

namespace fdc {

/// A formula in prenex form: prefix quantifiers (outermost first) over a
/// quantifier-free matrix in negation normal form.
struct Prenex {
  std::vector<std::string> free_vars;
  std::vector<std::pair<Kind, std::string>> prefix;  // Kind::Exists or Kind::Forall
  NodePtr matrix;

  /// free_vars followed by the bound variables in prefix order.
  std::vector<std::string> all_vars() const;
};

/// Negation normal form: negations are pushed into atoms (so no Not nodes remain).
NodePtr nnf(const NodePtr& n);
/// Prenex form of a reference-free formula; bound variables are renamed apart.
Prenex prenex(const Formula& phi);

/// Truth of a quantifier-free node at a point whose coordinates are named by `names`.
bool eval_qf(const NodePtr& n, const std::vector<std::string>& names, const RealPoint& pt);

enum class Certainty { Exact, Sampled };

struct Verdict {
  bool value = false;
  Certainty certainty = Certainty::Exact;
};

struct EvalOptions {
  /// Quantifier blocks with more bound variables than this are decided on a
  /// budgeted projection and reported as Sampled.
  std::size_t exact_bound_vars = 3;
  std::size_t max_factors_per_level = 24;
  /// Total-degree caps on projection factors for exact and sampled blocks.
  std::uint32_t max_degree = 24;
  std::uint32_t sampled_max_degree = 6;
};

/// Membership of a point in the set defined by phi (references expanded
/// through env). Quantified subformulas are decided by a cylindrical
/// decomposition of their bound variables over the point.
Verdict evaluate(const Formula& phi, const RealPoint& pt, const Environment* env = nullptr,
                 const EvalOptions& opts = {});
Verdict evaluate(const Formula& phi, const std::vector<Rational>& pt, const Environment* env = nullptr,
                 const EvalOptions& opts = {});

}  // namespace fdc
