#include "fdcalc/constructions.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdc {

namespace {

// Polynomials over a growing list of variable names.
struct Vars {
  std::vector<std::string> names;
  std::vector<std::string> taken;

  explicit Vars(std::vector<std::string> t) : taken(std::move(t)) {}

  std::string fresh(const std::string& base) {
    std::string s = fresh_name(base, taken);
    taken.push_back(s);
    names.push_back(s);
    return s;
  }
  void add(const std::string& s) {
    names.push_back(s);
    if (std::find(taken.begin(), taken.end(), s) == taken.end()) taken.push_back(s);
  }
  std::size_t index(const std::string& s) const {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), s) - names.begin());
  }
};

std::vector<std::string> all_names(const Formula& f) {
  auto out = f.free_vars;
  for (const auto& v : bound_variables(f.root)) out.push_back(v);
  return out;
}

// A copy of phi's body with free variables renamed and bound ones renamed apart from `taken`.
NodePtr instance(const Formula& phi, const std::vector<std::string>& to, std::vector<std::string>& taken) {
  std::vector<std::pair<std::string, std::string>> map;
  for (std::size_t i = 0; i < to.size(); ++i) map.emplace_back(phi.free_vars[i], to[i]);
  // Move bound names out of the way first so renaming cannot capture.
  NodePtr body = freshen_bound(phi.root, taken);
  return rename_free(body, map);
}

}  // namespace

Formula diff_locus_formula(const Formula& graph, std::size_t k) {
  std::size_t n = graph.dimension();
  if (k == 0 || k >= n)
    throw std::invalid_argument("diff_locus_formula: " + std::to_string(k) + " values do not fit a graph with " +
                                std::to_string(n) + " free variables");
  std::size_t l = n - k;
  std::vector<std::string> xs(graph.free_vars.begin(), graph.free_vars.begin() + static_cast<std::ptrdiff_t>(l));
  Vars V(all_names(graph));
  for (const auto& x : xs) V.add(x);
  std::vector<NodePtr> loci;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> u, L, y, v;
    for (std::size_t j = 0; j < k; ++j) u.push_back(V.fresh("u"));
    for (std::size_t j = 0; j < l; ++j) L.push_back(V.fresh("L"));
    std::string eps = V.fresh("eps"), delta = V.fresh("delta");
    for (std::size_t j = 0; j < l; ++j) y.push_back(V.fresh("w"));
    for (std::size_t j = 0; j < k; ++j) v.push_back(V.fresh("v"));
    std::vector<std::string> xu = xs, yv = y;
    xu.insert(xu.end(), u.begin(), u.end());
    yv.insert(yv.end(), v.begin(), v.end());
    NodePtr gx = instance(graph, xu, V.taken);
    NodePtr gy = instance(graph, yv, V.taken);

    std::size_t N = V.names.size();
    auto var = [&](const std::string& s) { return Poly::variable(N, V.index(s)); };
    Poly d2(N), lin(N);
    for (std::size_t j = 0; j < l; ++j) {
      Poly dj = var(y[j]) - var(xs[j]);
      d2 += dj * dj;
      lin += var(L[j]) * dj;
    }
    Poly err = var(v[i]) - var(u[i]) - lin;
    Poly e = var(eps), d = var(delta);
    // 0 < |y - x| < delta  ->  |f_i(y) - f_i(x) - L.(y - x)| < eps |y - x|
    NodePtr near = f::conj({gy, f::atom(d2, V.names, Rel::Gt), f::atom(d2 - d * d, V.names, Rel::Lt)});
    NodePtr body = f::implies(near, f::atom(err * err - e * e * d2, V.names, Rel::Lt));
    for (std::size_t j = k; j-- > 0;) body = f::forall(v[j], body);
    for (std::size_t j = l; j-- > 0;) body = f::forall(y[j], body);
    body = f::exists(delta, f::conj({f::atom(d, V.names, Rel::Gt), body}));
    body = f::forall(eps, f::implies(f::atom(e, V.names, Rel::Gt), body));
    for (std::size_t j = l; j-- > 0;) body = f::exists(L[j], body);
    body = f::implies(gx, body);
    for (std::size_t j = k; j-- > 0;) body = f::forall(u[j], body);
    loci.push_back(body);
  }
  return Formula{xs, f::conj(loci)};
}

Formula local_maxima_formula(const Formula& X, const std::vector<Rational>& functional) {
  std::size_t l = X.dimension();
  if (functional.size() != l) throw std::invalid_argument("local_maxima_formula: functional length differs from dimension");
  Vars V(all_names(X));
  for (const auto& x : X.free_vars) V.add(x);
  std::string eps = V.fresh("eps");
  std::vector<std::string> y;
  for (std::size_t j = 0; j < l; ++j) y.push_back(V.fresh("w"));
  NodePtr xy = instance(X, y, V.taken);
  std::size_t N = V.names.size();
  auto var = [&](const std::string& s) { return Poly::variable(N, V.index(s)); };
  Poly d2(N), gain(N);
  for (std::size_t j = 0; j < l; ++j) {
    Poly dj = var(y[j]) - var(X.free_vars[j]);
    d2 += dj * dj;
    gain += functional[j] * dj;
  }
  Poly e = var(eps);
  NodePtr near = f::conj({xy, f::atom(d2 - e * e, V.names, Rel::Lt)});
  NodePtr body = f::implies(near, f::disj({f::atom(gain, V.names, Rel::Lt), f::atom(gain, V.names, Rel::Eq)}));
  for (std::size_t j = l; j-- > 0;) body = f::forall(y[j], body);
  body = f::exists(eps, f::conj({f::atom(e, V.names, Rel::Gt), body}));
  return Formula{X.free_vars, f::conj({X.root, body})};
}

std::pair<Formula, Formula> diagonal_formulas(const Formula& Xa, const Formula& Xb, std::size_t n) {
  std::size_t l = Xa.dimension();
  if (Xb.dimension() != l) throw std::invalid_argument("diagonal_formulas: ambient dimensions differ");
  if (n == 0 || n > l) throw std::invalid_argument("diagonal_formulas: n must lie in 1..l");
  std::vector<std::string> taken = all_names(Xa);
  for (const auto& s : all_names(Xb)) taken.push_back(s);
  std::vector<std::string> xs, ys, out;
  for (std::size_t i = 1; i <= l; ++i) {
    xs.push_back(fresh_name("x" + std::to_string(i), out));
    out.push_back(xs.back());
  }
  for (std::size_t i = 1; i <= l; ++i) {
    ys.push_back(fresh_name("y" + std::to_string(i), out));
    out.push_back(ys.back());
  }
  taken.insert(taken.end(), out.begin(), out.end());
  NodePtr a = instance(Xa, xs, taken);
  NodePtr b = instance(Xb, ys, taken);
  auto eq = [&](std::size_t i) {
    std::vector<std::string> two{xs[i], ys[i]};
    return f::atom(Poly::variable(2, 0) - Poly::variable(2, 1), two, Rel::Eq);
  };
  std::vector<NodePtr> first{a, b};
  for (std::size_t i = 0; i + 1 < n; ++i) first.push_back(eq(i));
  std::vector<NodePtr> second = first;
  second.push_back(eq(n - 1));
  return {Formula{out, f::conj(first)}, Formula{out, f::conj(second)}};
}

namespace {

// p(x) -> q^e p(N/q) in the variable at position j, with N = 2x - 1, q = 2x(1 - x)
// and e the smallest even number >= deg_x p.
Poly rescale_var(const Poly& p, std::size_t j) {
  std::size_t n = p.nvars();
  Poly x = Poly::variable(n, j);
  Poly num = x * Rational(2) - Poly::constant(n, 1);
  Poly den = x * Rational(2) - x * x * Rational(2);
  auto cs = p.coefficients(j);
  unsigned d = static_cast<unsigned>(cs.size() - 1);
  unsigned e = d + (d % 2);
  Poly out(n);
  for (unsigned i = 0; i <= d; ++i)
    if (!cs[i].is_zero()) out += cs[i] * num.pow(i) * den.pow(e - i);
  return out;
}

NodePtr rescale_node(const NodePtr& n, const std::vector<std::string>& free, std::vector<std::string>& bound) {
  switch (n->kind) {
    case Kind::Atom: {
      const Atom& a = n->atom;
      Poly p = a.poly;
      for (std::size_t j = 0; j < a.vars.size(); ++j) {
        const auto& v = a.vars[j];
        bool is_free = std::find(free.begin(), free.end(), v) != free.end() &&
                       std::find(bound.begin(), bound.end(), v) == bound.end();
        if (is_free) p = rescale_var(p, j);
      }
      return f::atom(p, a.vars, a.rel);
    }
    case Kind::Exists:
    case Kind::Forall: {
      bound.push_back(n->var);
      NodePtr body = rescale_node(n->children[0], free, bound);
      bound.pop_back();
      return n->kind == Kind::Exists ? f::exists(n->var, body) : f::forall(n->var, body);
    }
    case Kind::Ref: throw std::invalid_argument("rescale_to_unit: unexpanded reference @" + n->ref);
    default: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(rescale_node(c, free, bound));
      auto r = std::make_shared<Node>(*n);
      r->children = std::move(ch);
      return r;
    }
  }
}

}  // namespace

Formula rescale_to_unit(const Formula& X, const Environment* env) {
  Formula ex = env ? env->expand(X) : X;
  std::vector<std::string> bound;
  std::vector<NodePtr> parts;
  for (const auto& v : ex.free_vars) {
    std::vector<std::string> one{v};
    Poly t = Poly::variable(1, 0);
    parts.push_back(f::atom(t, one, Rel::Gt));
    parts.push_back(f::atom(t - Poly::constant(1, 1), one, Rel::Lt));
  }
  parts.push_back(rescale_node(ex.root, ex.free_vars, bound));
  return Formula{ex.free_vars, f::conj(parts)};
}

Rational unit_to_real(const Rational& t) {
  if (t <= 0 || t >= 1) throw std::domain_error("unit_to_real: argument outside (0,1)");
  Rational r = (t - Rational(1, 2)) / (t - t * t);
  r.canonicalize();
  return r;
}

}  // namespace fdc
