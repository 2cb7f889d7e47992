#include "fdcalc/fd.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdc {

std::size_t variable_count(const Formula& psi) {
  std::vector<std::string> names = psi.free_vars;
  for (const auto& v : bound_variables(psi.root))
    if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
  for (const auto& v : free_variables(psi.root))
    if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
  return names.size();
}

namespace {

void accumulate(const NodePtr& n, const Environment* env, FDPair& acc) {
  switch (n->kind) {
    case Kind::Atom:
      acc.format = std::max<unsigned>(acc.format, static_cast<unsigned>(n->atom.dimension()));
      acc.degree += n->atom.degree();
      return;
    case Kind::Ref: {
      if (!env) throw std::invalid_argument("reference to '" + n->ref + "' needs an environment");
      FDPair r = env->fd_of(n->ref);
      acc.format = std::max(acc.format, r.format);
      acc.degree += r.degree;
      return;
    }
    default:
      for (const auto& c : n->children) accumulate(c, env, acc);
  }
}

}  // namespace

FDPair fd_of_formula(const Formula& psi, const Environment* env) {
  FDPair acc{0, 0};
  accumulate(psi.root, env, acc);
  acc.format = std::max<unsigned>(acc.format, static_cast<unsigned>(variable_count(psi)));
  return acc;
}

unsigned parse_depth(const NodePtr& n) {
  if (n->kind == Kind::Atom || n->kind == Kind::Ref) return 0;
  unsigned d = 0;
  for (const auto& c : n->children) d = std::max(d, parse_depth(c));
  return d + 1;
}

unsigned pformat_of_formula(const Formula& psi, const Environment* env) {
  return std::max(fd_of_formula(psi, env).format, parse_depth(psi.root));
}

}  // namespace fdc
