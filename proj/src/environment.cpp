#include "fdcalc/environment.hpp"

#include "fdcalc/fd.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace fdc {

namespace {

void check_refs(const NodePtr& n, const std::function<void(const Node&)>& visit) {
  if (n->kind == Kind::Ref) visit(*n);
  for (const auto& c : n->children) check_refs(c, visit);
}

}  // namespace

void Environment::define(const std::string& name, const Formula& formula, std::optional<FDPair> fd) {
  check_refs(formula.root, [&](const Node& r) {
    auto s = find(r.ref);
    if (!s) throw std::invalid_argument("unknown set '" + r.ref + "' referenced by '" + name + "'");
    if (s->formula.free_vars.size() != r.args.size())
      throw std::invalid_argument("arity mismatch for '" + r.ref + "' in '" + name + "'");
  });
  if (fd && fd->format < formula.free_vars.size())
    throw std::invalid_argument("declared format of '" + name + "' is below its ambient dimension");
  auto set = std::make_shared<NamedSet>(NamedSet{name, formula, fd});
  std::unique_lock lock(mu_);
  if (!sets_.emplace(name, std::move(set)).second) throw std::invalid_argument("set '" + name + "' is already defined");
}

std::shared_ptr<const NamedSet> Environment::find(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = sets_.find(name);
  return it == sets_.end() ? nullptr : it->second;
}

std::vector<std::string> Environment::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : sets_) out.push_back(k);
  return out;
}

FDPair Environment::fd_of(const std::string& name) const {
  auto s = find(name);
  if (!s) throw std::invalid_argument("unknown set '" + name + "'");
  if (s->fd) return *s->fd;
  return fd_of_formula(s->formula, this);
}

NodePtr Environment::expand(const NodePtr& n, std::vector<std::string>& taken) const {
  switch (n->kind) {
    case Kind::Atom: return n;
    case Kind::Ref: {
      auto s = find(n->ref);
      if (!s) throw std::invalid_argument("unknown set '" + n->ref + "'");
      if (s->formula.free_vars.size() != n->args.size()) throw std::invalid_argument("arity mismatch for '" + n->ref + "'");
      // Rename the parameters to fresh names first so simultaneous
      // substitution cannot collide, then to the arguments.
      std::vector<std::string> local = taken;
      local.insert(local.end(), s->formula.free_vars.begin(), s->formula.free_vars.end());
      local.insert(local.end(), n->args.begin(), n->args.end());
      NodePtr body = freshen_bound(s->formula.root, taken);
      std::vector<std::pair<std::string, std::string>> to_tmp, to_args;
      for (std::size_t i = 0; i < n->args.size(); ++i) {
        std::string tmp = fresh_name("_p" + std::to_string(i), local);
        local.push_back(tmp);
        to_tmp.emplace_back(s->formula.free_vars[i], tmp);
        to_args.emplace_back(tmp, n->args[i]);
      }
      body = rename_free(rename_free(body, to_tmp), to_args);
      return expand(body, taken);
    }
    case Kind::Exists:
    case Kind::Forall: {
      NodePtr body = expand(n->children[0], taken);
      return n->kind == Kind::Exists ? f::exists(n->var, body) : f::forall(n->var, body);
    }
    default: {
      std::vector<NodePtr> ch;
      for (const auto& c : n->children) ch.push_back(expand(c, taken));
      auto r = std::make_shared<Node>(*n);
      r->children = std::move(ch);
      return r;
    }
  }
}

Formula Environment::expand(const Formula& fm) const {
  std::vector<std::string> taken = fm.free_vars;
  auto bv = bound_variables(fm.root);
  taken.insert(taken.end(), bv.begin(), bv.end());
  return {fm.free_vars, expand(fm.root, taken)};
}

}  // namespace fdc
