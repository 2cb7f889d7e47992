#pragma once

#include "fdcalc/poly.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fdc {

enum class Rel { Eq, Gt, Lt };

/// A polynomial sign condition `poly rel 0`. The polynomial is expressed over
/// the atom's own variable list, which holds exactly the variables occurring
/// in it, sorted by name.
struct Atom {
  std::vector<std::string> vars;
  Poly poly;
  Rel rel = Rel::Eq;

  /// Builds a canonical atom from a polynomial over an arbitrary name list.
  static Atom make(const Poly& p, const std::vector<std::string>& names, Rel rel);
  /// Ambient dimension of the atom (number of variables).
  std::size_t dimension() const { return vars.size(); }
  /// max(total degree, 1).
  std::uint32_t degree() const;
  /// The polynomial re-expressed over `names` (must contain every atom variable).
  Poly over(const std::vector<std::string>& names) const;
  bool holds(int sign) const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.rel == b.rel && a.vars == b.vars && a.poly == b.poly;
  }
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind { Atom, And, Or, Not, Exists, Forall, Ref };

/// Immutable formula node.
struct Node {
  Kind kind;
  Atom atom;                       // Kind::Atom
  std::vector<NodePtr> children;   // And/Or (>= 1), Not/Exists/Forall (1)
  std::string var;                 // Exists/Forall
  std::string ref;                 // Ref: registered set name
  std::vector<std::string> args;   // Ref: argument variables
};

bool equal(const NodePtr& a, const NodePtr& b);

/// A formula together with its ordered free-variable list: it defines a
/// subset of R^n with n = free_vars.size().
struct Formula {
  std::vector<std::string> free_vars;
  NodePtr root;

  std::size_t dimension() const { return free_vars.size(); }
  friend bool operator==(const Formula& a, const Formula& b) {
    return a.free_vars == b.free_vars && equal(a.root, b.root);
  }
};

namespace f {

NodePtr atom(const Poly& p, const std::vector<std::string>& names, Rel rel);
NodePtr atom(Atom a);
NodePtr conj(std::vector<NodePtr> children);
NodePtr disj(std::vector<NodePtr> children);
NodePtr neg(NodePtr child);
NodePtr exists(const std::string& var, NodePtr child);
NodePtr forall(const std::string& var, NodePtr child);
NodePtr ref(const std::string& name, std::vector<std::string> args);
/// a -> b, written as (not a) or b.
NodePtr implies(NodePtr a, NodePtr b);
/// The tautology 0 = 0.
NodePtr truth();
/// The contradiction 1 = 0.
NodePtr falsity();
/// p >= 0 as (p > 0) or (p = 0).
NodePtr nonneg(const Poly& p, const std::vector<std::string>& names);

}  // namespace f

/// Variable names bound anywhere in the node.
std::vector<std::string> bound_variables(const NodePtr& n);
/// Variable names occurring free in the node, in first-occurrence order.
std::vector<std::string> free_variables(const NodePtr& n);
/// All atoms of the node (references excluded), in traversal order.
std::vector<const Atom*> atoms(const NodePtr& n);

/// Renames free occurrences of variables according to the map.
NodePtr rename_free(const NodePtr& n, const std::vector<std::pair<std::string, std::string>>& map);
/// Replaces bound variable names by fresh ones that avoid `taken`; the fresh
/// names are added to `taken`.
NodePtr freshen_bound(const NodePtr& n, std::vector<std::string>& taken);

/// A name of the form base, base_1, base_2, ... not in `taken`.
std::string fresh_name(const std::string& base, const std::vector<std::string>& taken);

}  // namespace fdc
