#include "fdcalc/structure_tree.hpp"

#include "fdcalc/evaluate.hpp"
#include "fdcalc/syntax.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>

namespace fdc {

TreeNode TreeNode::leaf(std::string set) {
  TreeNode n;
  n.set = std::move(set);
  return n;
}

TreeNode TreeNode::node(Op op, std::vector<TreeNode> children) {
  TreeNode n;
  n.op = op;
  n.children = std::move(children);
  return n;
}

namespace {

std::optional<std::size_t> check(const TreeNode& n, const std::string& path, bool slanted, const Environment& env,
                                 std::vector<TreeViolation>& out) {
  if (!n.op) {
    if (!n.children.empty()) out.push_back({path, "leaf has children"});
    auto s = env.find(n.set);
    if (!s) {
      out.push_back({path, "unknown set '" + n.set + "'"});
      return std::nullopt;
    }
    return s->formula.dimension();
  }
  Op op = *n.op;
  if (n.children.empty()) {
    out.push_back({path, to_string(op) + " vertex without children"});
    return std::nullopt;
  }
  std::vector<std::optional<std::size_t>> dims;
  for (std::size_t i = 0; i < n.children.size(); ++i)
    dims.push_back(check(n.children[i], path + "." + std::to_string(i), slanted, env, out));
  bool ok = true;
  if (n.children.size() > 1 && !is_boolean(op)) {
    out.push_back({path, to_string(op) + " vertex with " + std::to_string(n.children.size()) + " children"});
    ok = false;
  }
  if (n.children.size() == 1 && is_boolean(op)) {
    out.push_back({path, to_string(op) + " vertex with a single child"});
    ok = false;
  }
  if (op == Op::TimesRLeft && !slanted) {
    out.push_back({path, "times_R_left requires a slanted tree"});
    ok = false;
  }
  for (const auto& d : dims)
    if (!d) return std::nullopt;
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (*dims[i] != *dims[0]) {
      out.push_back({path, "children live in R^" + std::to_string(*dims[0]) + " and R^" + std::to_string(*dims[i])});
      return std::nullopt;
    }
  std::size_t l = *dims[0];
  if (op == Op::Projection && l == 0) {
    out.push_back({path, "projection of a subset of R^0"});
    return std::nullopt;
  }
  if (!ok) return std::nullopt;
  if (op == Op::Projection) return l - 1;
  if (op == Op::TimesRLeft || op == Op::TimesRRight) return l + 1;
  return l;
}

void require_valid(const StructureTree& t, const Environment& env) {
  auto v = validate_tree(t, env);
  if (!v.empty()) throw std::invalid_argument("invalid structure tree at " + v[0].vertex + ": " + v[0].message);
}

FDPair omega(const TreeNode& n, const Environment& env) {
  if (!n.op) return env.fd_of(n.set);
  FDPair out{0, 0};
  for (const auto& c : n.children) {
    FDPair f = omega(c, env);
    out.format = std::max(out.format, f.format);
    out.degree += f.degree;
  }
  if (*n.op == Op::TimesRLeft || *n.op == Op::TimesRRight) ++out.format;
  return out;
}

struct Builder {
  const Environment& env;
  std::vector<std::string> taken;

  NodePtr build(const TreeNode& n, const std::vector<std::string>& names) {
    if (!n.op) {
      Formula ex = env.expand(env.find(n.set)->formula);
      std::vector<std::pair<std::string, std::string>> map;
      for (std::size_t i = 0; i < names.size(); ++i) map.emplace_back(ex.free_vars[i], names[i]);
      NodePtr body = freshen_bound(ex.root, taken);
      return rename_free(body, map);
    }
    switch (*n.op) {
      case Op::Union:
      case Op::Intersection: {
        std::vector<NodePtr> ch;
        for (const auto& c : n.children) ch.push_back(build(c, names));
        return *n.op == Op::Union ? f::disj(ch) : f::conj(ch);
      }
      case Op::Complement: return f::neg(build(n.children[0], names));
      case Op::Projection: {
        std::string v = fresh_name(default_names(names.size() + 1).back(), taken);
        taken.push_back(v);
        auto inner = names;
        inner.push_back(v);
        return f::exists(v, build(n.children[0], inner));
      }
      case Op::TimesRRight: return build(n.children[0], {names.begin(), names.end() - 1});
      case Op::TimesRLeft: return build(n.children[0], {names.begin() + 1, names.end()});
    }
    throw std::logic_error("unreachable");
  }
};

const TreeNode& find_vertex(const TreeNode& root, const std::string& path) {
  if (path.rfind("r", 0) != 0) throw std::invalid_argument("vertex path must start with r: " + path);
  const TreeNode* n = &root;
  std::size_t pos = 1;
  while (pos < path.size()) {
    if (path[pos] != '.') throw std::invalid_argument("malformed vertex path " + path);
    std::size_t end = path.find('.', pos + 1);
    std::size_t i = std::stoul(path.substr(pos + 1, end - pos - 1));
    if (i >= n->children.size()) throw std::invalid_argument("vertex " + path + " does not exist");
    n = &n->children[i];
    pos = end == std::string::npos ? path.size() : end;
  }
  return *n;
}

TreeNode lift_node(const TreeNode& n) {
  if (!n.op) return TreeNode::node(Op::TimesRLeft, {n});
  TreeNode out = n;
  for (auto& c : out.children) c = lift_node(c);
  return out;
}

nlohmann::json node_json(const TreeNode& n) {
  if (!n.op) return {{"leaf", n.set}};
  nlohmann::json ch = nlohmann::json::array();
  for (const auto& c : n.children) ch.push_back(node_json(c));
  return {{"op", to_string(*n.op)}, {"children", ch}};
}

TreeNode node_from_json(const nlohmann::json& j) {
  if (j.contains("leaf")) return TreeNode::leaf(j.at("leaf").get<std::string>());
  std::string tag = j.at("op").get<std::string>();
  static const std::vector<std::string> tags{"union", "intersection", "project_last", "complement", "times_R_right",
                                             "times_R_left"};
  if (std::find(tags.begin(), tags.end(), tag) == tags.end()) throw std::invalid_argument("unknown tree tag '" + tag + "'");
  std::vector<TreeNode> ch;
  for (const auto& c : j.at("children")) ch.push_back(node_from_json(c));
  return TreeNode::node(parse_op(tag), std::move(ch));
}

}  // namespace

std::vector<TreeViolation> validate_tree(const StructureTree& t, const Environment& env) {
  std::vector<TreeViolation> out;
  check(t.root, "r", t.slanted, env, out);
  return out;
}

std::size_t tree_dim(const StructureTree& t, const Environment& env) {
  std::vector<TreeViolation> out;
  auto d = check(t.root, "r", t.slanted, env, out);
  if (!out.empty() || !d) throw std::invalid_argument("invalid structure tree at " + out.at(0).vertex + ": " + out[0].message);
  return *d;
}

FDPair omega_fd(const StructureTree& t, const Environment& env) {
  require_valid(t, env);
  return omega(t.root, env);
}

FDPair omega_prime_fd(const StructureTree& t, const Environment& env) { return omega_fd(t, env); }

Formula tree_to_formula(const StructureTree& t, const Environment& env, std::vector<std::string> names) {
  std::size_t l = tree_dim(t, env);
  if (names.empty()) names = default_names(l);
  if (names.size() != l) throw std::invalid_argument("tree_to_formula: need " + std::to_string(l) + " variable names");
  Builder b{env, names};
  for (const auto& n : env.names()) b.taken.push_back(n);
  return Formula{names, b.build(t.root, names)};
}

Formula vertex_formula(const StructureTree& t, const Environment& env, const std::string& vertex) {
  StructureTree sub{find_vertex(t.root, vertex), t.slanted};
  return tree_to_formula(sub, env);
}

StructureTree lift_times_R(const StructureTree& t, const Environment& env) {
  require_valid(t, env);
  return StructureTree{lift_node(t.root), true};
}

CompatibilityReport check_tree_compatibility(const StructureTree& t, const Environment& env, std::size_t samples,
                                             std::uint64_t seed, const CadOptions& opts) {
  require_valid(t, env);
  if (t.slanted) throw std::invalid_argument("check_tree_compatibility: slanted trees are not covered");
  CompatibilityReport rep;
  // Leaves, padded to the largest leaf dimension.
  std::vector<std::string> leaves;
  std::function<void(const TreeNode&)> collect = [&](const TreeNode& n) {
    if (!n.op && std::find(leaves.begin(), leaves.end(), n.set) == leaves.end()) leaves.push_back(n.set);
    for (const auto& c : n.children) collect(c);
  };
  collect(t.root);
  std::size_t m = 0;
  for (const auto& s : leaves) m = std::max(m, env.find(s)->formula.dimension());
  if (m == 0) throw std::invalid_argument("check_tree_compatibility: leaves live in R^0");
  rep.leaf_dim = m;
  std::vector<Formula> sets;
  for (const auto& s : leaves) {
    std::size_t li = env.find(s)->formula.dimension();
    TreeNode n = TreeNode::leaf(s);
    for (std::size_t k = li; k < m; ++k) n = TreeNode::node(Op::TimesRRight, {n});
    sets.push_back(tree_to_formula(StructureTree{n, false}, env));
  }
  CellDecomposition d = compatible_decomposition(sets, m, opts);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-64, 64);
  std::function<void(const TreeNode&, const std::string&)> visit = [&](const TreeNode& n, const std::string& path) {
    ++rep.vertices;
    StructureTree sub{n, false};
    std::size_t l = tree_dim(sub, env);
    for (std::size_t i = 0; i < n.children.size(); ++i) visit(n.children[i], path + "." + std::to_string(i));
    if (l == 0) return;
    Formula Tv = tree_to_formula(sub, env);
    std::vector<Cell> cells = cylinder_cells(d, l);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      ++rep.cells_checked;
      bool first = evaluate(Tv, cells[c].sample).value;
      for (std::size_t s = 0; s < samples; ++s) {
        RealPoint p = d.random_point_in(std::min(l, m), c, rng);
        for (std::size_t k = m; k < l; ++k) p = p.extended(Rational(coord(rng), 8));
        if (evaluate(Tv, p).value != first) {
          rep.failures.push_back("vertex " + path + ", cell " + std::to_string(c) + ": membership differs at " +
                                 p.to_string(4) + " and the sample");
          break;
        }
      }
    }
  };
  visit(t.root, "r");
  return rep;
}

nlohmann::json to_json(const StructureTree& t) {
  return {{"schema", "fdcalc.structure_tree/1"}, {"slanted", t.slanted}, {"root", node_json(t.root)}};
}

StructureTree tree_from_json(const nlohmann::json& j, Environment& env) {
  if (j.contains("sets"))
    for (const auto& [name, s] : j.at("sets").items()) {
      Formula f = parse_formula(s.at("formula").get<std::string>(), &env);
      std::optional<FDPair> fd;
      if (s.contains("fd")) fd = FDPair{s.at("fd")[0].get<unsigned>(), s.at("fd")[1].get<unsigned>()};
      env.define(name, f, fd);
    }
  StructureTree t;
  t.slanted = j.value("slanted", false);
  t.root = node_from_json(j.at("root"));
  return t;
}

}  // namespace fdc
