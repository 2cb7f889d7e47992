#include "fdcalc/evaluate.hpp"

#include "fdcalc/projection.hpp"

#include <map>
#include <stdexcept>

namespace fdc {

std::vector<std::string> Prenex::all_vars() const {
  auto out = free_vars;
  for (const auto& [k, v] : prefix) out.push_back(v);
  return out;
}

namespace {

NodePtr nnf_impl(const NodePtr& n, bool negate) {
  switch (n->kind) {
    case Kind::Atom: {
      if (!negate) return n;
      Atom a = n->atom, b = n->atom;
      switch (n->atom.rel) {
        case Rel::Eq: a.rel = Rel::Gt; b.rel = Rel::Lt; break;
        case Rel::Gt: a.rel = Rel::Eq; b.rel = Rel::Lt; break;
        case Rel::Lt: a.rel = Rel::Eq; b.rel = Rel::Gt; break;
      }
      return f::disj({f::atom(a), f::atom(b)});
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(nnf_impl(c, negate));
      return (n->kind == Kind::And) != negate ? f::conj(ch) : f::disj(ch);
    }
    case Kind::Not: return nnf_impl(n->children[0], !negate);
    case Kind::Exists:
    case Kind::Forall: {
      NodePtr body = nnf_impl(n->children[0], negate);
      return (n->kind == Kind::Exists) != negate ? f::exists(n->var, body) : f::forall(n->var, body);
    }
    case Kind::Ref: break;
  }
  throw std::invalid_argument("nnf: unexpanded reference @" + n->ref);
}

NodePtr pull(const NodePtr& n, std::vector<std::pair<Kind, std::string>>& prefix) {
  switch (n->kind) {
    case Kind::Exists:
    case Kind::Forall:
      prefix.emplace_back(n->kind, n->var);
      return pull(n->children[0], prefix);
    case Kind::And:
    case Kind::Or: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(pull(c, prefix));
      return n->kind == Kind::And ? f::conj(ch) : f::disj(ch);
    }
    default: return n;
  }
}

}  // namespace

NodePtr nnf(const NodePtr& n) { return nnf_impl(n, false); }

Prenex prenex(const Formula& phi) {
  Prenex p;
  p.free_vars = phi.free_vars;
  std::vector<std::string> taken = phi.free_vars;
  NodePtr root = freshen_bound(nnf(phi.root), taken);
  p.matrix = pull(root, p.prefix);
  return p;
}

bool eval_qf(const NodePtr& n, const std::vector<std::string>& names, const RealPoint& pt) {
  switch (n->kind) {
    case Kind::Atom: return n->atom.holds(pt.sign(n->atom.over(names)));
    case Kind::And:
      for (const auto& c : n->children)
        if (!eval_qf(c, names, pt)) return false;
      return true;
    case Kind::Or:
      for (const auto& c : n->children)
        if (eval_qf(c, names, pt)) return true;
      return false;
    case Kind::Not: return !eval_qf(n->children[0], names, pt);
    default: break;
  }
  throw std::invalid_argument("eval_qf: formula is not quantifier-free");
}

namespace {

struct Block {
  Prenex pre;
  std::vector<std::string> names;
  ProjectionSet proj;
  bool sampled = false;
  // Matrix atoms over `names` with the highest variable they involve.
  std::map<const Atom*, std::pair<Poly, int>> polys;
};

// Three-valued evaluation of the matrix with only the first `level`
// coordinates known: 1 true, 0 false, -1 undetermined.
int partial(const Block& b, const NodePtr& n, const RealPoint& pt, std::size_t level) {
  switch (n->kind) {
    case Kind::Atom: {
      const auto& [p, top] = b.polys.at(&n->atom);
      if (top >= static_cast<int>(level)) return -1;
      return n->atom.holds(pt.sign(p)) ? 1 : 0;
    }
    case Kind::And:
    case Kind::Or: {
      int decisive = n->kind == Kind::Or ? 1 : 0;
      int out = 1 - decisive;
      for (const auto& c : n->children) {
        int v = partial(b, c, pt, level);
        if (v == decisive) return v;
        if (v < 0) out = -1;
      }
      return out;
    }
    default: break;
  }
  throw std::logic_error("partial: matrix is not in negation normal form");
}

bool lift(const Block& b, std::size_t level, const RealPoint& pt) {
  std::size_t n = b.pre.free_vars.size();
  int known = partial(b, b.pre.matrix, pt, level);
  if (known >= 0) return known == 1;
  bool exists = b.pre.prefix[level - n].first == Kind::Exists;
  std::vector<Poly> polys;
  for (const auto& p : b.proj.levels[level]) polys.push_back(p.with_nvars(level + 1));
  Fiber fb(pt, polys);
  auto decide = [&](const RealPoint& q) { return lift(b, level + 1, q) == exists; };
  for (std::size_t i = 0; i <= fb.size(); ++i)
    if (decide(pt.extended(fb.gap_point(i)))) return exists;
  for (std::size_t i = 0; i < fb.size(); ++i)
    if (decide(fb.root(i))) return exists;
  if (b.sampled)
    for (std::size_t i = 0; i <= fb.size(); ++i)
      for (double u : {0.125, 0.875})
        if (decide(pt.extended(fb.gap_random(i, u)))) return exists;
  return !exists;
}

Verdict decide_quantified(const NodePtr& n, const std::vector<std::string>& names, const RealPoint& pt,
                          const EvalOptions& opts) {
  Block b;
  b.pre = prenex(Formula{names, n});
  b.names = b.pre.all_vars();
  std::size_t nf = names.size(), m = b.pre.prefix.size();
  std::vector<Poly> polys;
  for (const Atom* a : atoms(b.pre.matrix)) {
    Poly p = a->over(b.names);
    b.polys.emplace(a, std::make_pair(p, p.main_variable()));
    for (std::size_t i = 0; i < nf; ++i)
      if (p.involves(i) && pt.is_rational(i)) p = p.substitute(i, pt.rational(i));
    polys.push_back(p);
  }
  ProjectionBudget budget{opts.max_factors_per_level, opts.max_degree};
  if (m <= opts.exact_bound_vars) {
    b.proj = projection_factors(polys, nf + m, ProjectionKind::Collins, nf, budget);
    b.sampled = b.proj.truncated;
  } else {
    budget.max_degree = opts.sampled_max_degree;
    b.proj = projection_factors(polys, nf + m, ProjectionKind::McCallum, nf, budget);
    b.sampled = true;
  }
  bool v = lift(b, nf, pt.prefix(nf));
  return {v, b.sampled ? Certainty::Sampled : Certainty::Exact};
}

Verdict eval_node(const NodePtr& n, const std::vector<std::string>& names, const RealPoint& pt,
                  const EvalOptions& opts) {
  switch (n->kind) {
    case Kind::Atom: return {n->atom.holds(pt.sign(n->atom.over(names))), Certainty::Exact};
    case Kind::Not: {
      Verdict v = eval_node(n->children[0], names, pt, opts);
      v.value = !v.value;
      return v;
    }
    case Kind::And:
    case Kind::Or: {
      // An exact decisive child settles the node; sampled ones only taint it.
      bool decisive = n->kind == Kind::Or;
      Verdict out{!decisive, Certainty::Exact};
      for (const auto& c : n->children) {
        Verdict v = eval_node(c, names, pt, opts);
        if (v.value == decisive) {
          if (v.certainty == Certainty::Exact) return v;
          out.value = decisive;
        }
        if (v.certainty == Certainty::Sampled) out.certainty = Certainty::Sampled;
      }
      return out;
    }
    case Kind::Exists:
    case Kind::Forall: return decide_quantified(n, names, pt, opts);
    case Kind::Ref: break;
  }
  throw std::invalid_argument("evaluate: unexpanded reference @" + n->ref);
}

}  // namespace

Verdict evaluate(const Formula& phi, const RealPoint& pt, const Environment* env, const EvalOptions& opts) {
  if (pt.dim() != phi.dimension()) throw std::invalid_argument("evaluate: point has the wrong dimension");
  Formula ex = env ? env->expand(phi) : phi;
  return eval_node(ex.root, ex.free_vars, pt, opts);
}

Verdict evaluate(const Formula& phi, const std::vector<Rational>& pt, const Environment* env,
                 const EvalOptions& opts) {
  return evaluate(phi, RealPoint(pt), env, opts);
}

}  // namespace fdc
