#include "fdcalc/formula.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fdc {

Atom Atom::make(const Poly& p, const std::vector<std::string>& names, Rel rel) {
  if (p.nvars() != names.size()) throw std::invalid_argument("Atom::make: name count does not match polynomial");
  std::vector<std::string> used;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (p.involves(i)) used.push_back(names[i]);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<std::size_t> map(names.size(), 0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = std::lower_bound(used.begin(), used.end(), names[i]);
    if (it != used.end() && *it == names[i]) map[i] = static_cast<std::size_t>(it - used.begin());
  }
  Atom a;
  a.vars = used;
  a.poly = p.remap(used.size(), map);
  a.rel = rel;
  return a;
}

std::uint32_t Atom::degree() const { return std::max<std::uint32_t>(poly.total_degree(), 1); }

Poly Atom::over(const std::vector<std::string>& names) const {
  std::vector<std::size_t> map(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = std::find(names.begin(), names.end(), vars[i]);
    if (it == names.end()) throw std::invalid_argument("Atom::over: variable '" + vars[i] + "' not in scope");
    map[i] = static_cast<std::size_t>(it - names.begin());
  }
  return poly.remap(names.size(), map);
}

bool Atom::holds(int sign) const {
  switch (rel) {
    case Rel::Eq: return sign == 0;
    case Rel::Gt: return sign > 0;
    case Rel::Lt: return sign < 0;
  }
  return false;
}

bool equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Atom: return a->atom == b->atom;
    case Kind::Ref: return a->ref == b->ref && a->args == b->args;
    default: break;
  }
  if (a->var != b->var || a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!equal(a->children[i], b->children[i])) return false;
  return true;
}

namespace f {

namespace {

NodePtr make(Kind k, std::vector<NodePtr> children, std::string var = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->children = std::move(children);
  n->var = std::move(var);
  return n;
}

}  // namespace

NodePtr atom(const Poly& p, const std::vector<std::string>& names, Rel rel) {
  return atom(Atom::make(p, names, rel));
}

NodePtr atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return n;
}

NodePtr conj(std::vector<NodePtr> children) {
  if (children.empty()) return truth();
  if (children.size() == 1) return children.front();
  return make(Kind::And, std::move(children));
}

NodePtr disj(std::vector<NodePtr> children) {
  if (children.empty()) return falsity();
  if (children.size() == 1) return children.front();
  return make(Kind::Or, std::move(children));
}

NodePtr neg(NodePtr child) { return make(Kind::Not, {std::move(child)}); }
NodePtr exists(const std::string& var, NodePtr child) { return make(Kind::Exists, {std::move(child)}, var); }
NodePtr forall(const std::string& var, NodePtr child) { return make(Kind::Forall, {std::move(child)}, var); }

NodePtr ref(const std::string& name, std::vector<std::string> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ref;
  n->ref = name;
  n->args = std::move(args);
  return n;
}

NodePtr implies(NodePtr a, NodePtr b) { return disj({neg(std::move(a)), std::move(b)}); }

NodePtr truth() { return atom(Poly(0), {}, Rel::Eq); }

NodePtr falsity() { return atom(Poly::constant(0, 1), {}, Rel::Eq); }

NodePtr nonneg(const Poly& p, const std::vector<std::string>& names) {
  return disj({atom(p, names, Rel::Gt), atom(p, names, Rel::Eq)});
}

}  // namespace f

namespace {

void collect_bound(const NodePtr& n, std::vector<std::string>& out) {
  if (n->kind == Kind::Exists || n->kind == Kind::Forall) {
    if (std::find(out.begin(), out.end(), n->var) == out.end()) out.push_back(n->var);
  }
  for (const auto& c : n->children) collect_bound(c, out);
}

void collect_free(const NodePtr& n, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (n->kind) {
    case Kind::Atom:
      for (const auto& v : n->atom.vars) add(v);
      return;
    case Kind::Ref:
      for (const auto& v : n->args) add(v);
      return;
    case Kind::Exists:
    case Kind::Forall:
      bound.push_back(n->var);
      collect_free(n->children[0], bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : n->children) collect_free(c, bound, out);
  }
}

void collect_atoms(const NodePtr& n, std::vector<const Atom*>& out) {
  if (n->kind == Kind::Atom) out.push_back(&n->atom);
  for (const auto& c : n->children) collect_atoms(c, out);
}

}  // namespace

std::vector<std::string> bound_variables(const NodePtr& n) {
  std::vector<std::string> out;
  collect_bound(n, out);
  return out;
}

std::vector<std::string> free_variables(const NodePtr& n) {
  std::vector<std::string> bound, out;
  collect_free(n, bound, out);
  return out;
}

std::vector<const Atom*> atoms(const NodePtr& n) {
  std::vector<const Atom*> out;
  collect_atoms(n, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
  auto used = [&](const std::string& s) { return std::find(taken.begin(), taken.end(), s) != taken.end(); };
  if (!used(base)) return base;
  for (int i = 1;; ++i) {
    std::string s = base + "_" + std::to_string(i);
    if (!used(s)) return s;
  }
}

namespace {

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& m) {
  std::vector<std::string> names = a.vars;
  for (auto& v : names) {
    auto it = m.find(v);
    if (it != m.end()) v = it->second;
  }
  // Merging two variables into one name requires re-canonicalizing.
  std::vector<std::string> uniq = names;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<std::size_t> map(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    map[i] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), names[i]) - uniq.begin());
  return Atom::make(a.poly.remap(uniq.size(), map), uniq, a.rel);
}

NodePtr rename_impl(const NodePtr& n, std::map<std::string, std::string> m) {
  if (m.empty()) return n;
  switch (n->kind) {
    case Kind::Atom: return f::atom(rename_atom(n->atom, m));
    case Kind::Ref: {
      auto args = n->args;
      for (auto& a : args) {
        auto it = m.find(a);
        if (it != m.end()) a = it->second;
      }
      return f::ref(n->ref, std::move(args));
    }
    case Kind::Exists:
    case Kind::Forall: {
      m.erase(n->var);
      if (m.empty()) return n;
      NodePtr body = n->children[0];
      std::string var = n->var;
      // Avoid capturing a renamed variable.
      bool clash = false;
      auto fv = free_variables(body);
      for (const auto& [from, to] : m)
        if (to == var && std::find(fv.begin(), fv.end(), from) != fv.end()) clash = true;
      if (clash) {
        std::vector<std::string> taken = fv;
        for (const auto& [from, to] : m) taken.push_back(to);
        auto bv = bound_variables(body);
        taken.insert(taken.end(), bv.begin(), bv.end());
        std::string nv = fresh_name(var, taken);
        body = rename_impl(body, {{var, nv}});
        var = nv;
      }
      body = rename_impl(body, m);
      return n->kind == Kind::Exists ? f::exists(var, body) : f::forall(var, body);
    }
    default: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(rename_impl(c, m));
      auto r = std::make_shared<Node>(*n);
      r->children = std::move(ch);
      return r;
    }
  }
}

}  // namespace

NodePtr rename_free(const NodePtr& n, const std::vector<std::pair<std::string, std::string>>& map) {
  std::map<std::string, std::string> m;
  for (const auto& [a, b] : map)
    if (a != b) m[a] = b;
  return rename_impl(n, m);
}

NodePtr freshen_bound(const NodePtr& n, std::vector<std::string>& taken) {
  switch (n->kind) {
    case Kind::Atom:
    case Kind::Ref: return n;
    case Kind::Exists:
    case Kind::Forall: {
      std::string nv = fresh_name(n->var, taken);
      taken.push_back(nv);
      NodePtr body = rename_free(n->children[0], {{n->var, nv}});
      body = freshen_bound(body, taken);
      return n->kind == Kind::Exists ? f::exists(nv, body) : f::forall(nv, body);
    }
    default: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(freshen_bound(c, taken));
      auto r = std::make_shared<Node>(*n);
      r->children = std::move(ch);
      return r;
    }
  }
}

}  // namespace fdc
