#include <doctest.h>

#include "fdcalc/evaluate.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/structure_tree.hpp"
#include "fdcalc/syntax.hpp"

#include <random>

using namespace fdc;

namespace {

void fill(Environment& env) {
  env.define("pt", parse_formula("vars x: (x = 0)"), FDPair{1, 1});
  env.define("pos", parse_formula("vars x: (x > 0)"), FDPair{2, 1});
  env.define("circle", parse_formula("vars x, y: (x^2 + y^2 - 1 = 0)"), FDPair{2, 2});
  env.define("line", parse_formula("vars x, y: (x - y = 0)"), FDPair{3, 1});
  env.define("disk", parse_formula("vars x, y: (x^2 + y^2 - 4 < 0)"), FDPair{2, 3});
  env.define("ball", parse_formula("vars x, y, z: (x^2 + y^2 + z^2 - 1 < 0)"), FDPair{3, 2});
  env.define("plane", parse_formula("vars x, y, z: (z = 0)"), FDPair{5, 1});
}

const std::vector<std::vector<std::string>> kLeaves{{}, {"pt", "pos"}, {"circle", "line", "disk"}, {"ball", "plane"}};

// Random valid tree whose root lives in R^dim (1 <= dim <= 3).
TreeNode random_tree(std::mt19937& rng, std::size_t dim, int budget, bool slanted) {
  std::uniform_int_distribution<int> pick(0, 6);
  int r = pick(rng);
  if (budget <= 1 || r == 0) return TreeNode::leaf(kLeaves[dim][rng() % kLeaves[dim].size()]);
  if (r <= 2) {
    std::size_t k = 2 + rng() % 2;
    std::vector<TreeNode> ch;
    for (std::size_t i = 0; i < k; ++i) ch.push_back(random_tree(rng, dim, budget / static_cast<int>(k), slanted));
    return TreeNode::node(r == 1 ? Op::Union : Op::Intersection, std::move(ch));
  }
  if (r == 3) return TreeNode::node(Op::Complement, {random_tree(rng, dim, budget - 1, slanted)});
  if (r == 4 && dim < 3) return TreeNode::node(Op::Projection, {random_tree(rng, dim + 1, budget - 1, slanted)});
  if (dim > 1) {
    Op op = slanted && rng() % 2 ? Op::TimesRLeft : Op::TimesRRight;
    return TreeNode::node(op, {random_tree(rng, dim - 1, budget - 1, slanted)});
  }
  return TreeNode::node(Op::Complement, {random_tree(rng, dim, budget - 1, slanted)});
}

std::size_t count_nodes(const TreeNode& n) {
  std::size_t s = 1;
  for (const auto& c : n.children) s += count_nodes(c);
  return s;
}

// Closed form: max over leaves of (leaf format + products above it), sum of leaf degrees.
void oracle(const TreeNode& n, const Environment& env, unsigned products, FDPair& acc) {
  if (!n.op) {
    FDPair f = env.fd_of(n.set);
    acc.format = std::max(acc.format, f.format + products);
    acc.degree += f.degree;
    return;
  }
  bool prod = *n.op == Op::TimesRLeft || *n.op == Op::TimesRRight;
  for (const auto& c : n.children) oracle(c, env, products + (prod ? 1 : 0), acc);
}

FDPair oracle_fd(const StructureTree& t, const Environment& env) {
  FDPair acc{0, 0};
  oracle(t.root, env, 0, acc);
  return acc;
}

std::vector<Rational> random_point(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-24, 24);
  std::vector<Rational> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(Rational(num(rng), 8));
  for (auto& q : p) q.canonicalize();
  return p;
}

}  // namespace

TEST_CASE("validate_tree") {
  Environment env;
  fill(env);
  CHECK(validate_tree({TreeNode::leaf("circle"), false}, env).empty());
  auto v = validate_tree(
      {TreeNode::node(Op::Union, {TreeNode::leaf("circle"), TreeNode::node(Op::Complement, {TreeNode::leaf("ball")})}),
       false},
      env);
  REQUIRE(v.size() == 1);
  CHECK(v[0].vertex == "r");
  StructureTree left{TreeNode::node(Op::TimesRLeft, {TreeNode::leaf("circle")}), false};
  CHECK(validate_tree(left, env).size() == 1);
  left.slanted = true;
  CHECK(validate_tree(left, env).empty());
  CHECK(validate_tree({TreeNode::leaf("nope"), false}, env).size() == 1);
  auto multi = validate_tree({TreeNode::node(Op::Complement, {TreeNode::leaf("pt"), TreeNode::leaf("pos")}), false}, env);
  CHECK(multi.size() == 1);
  auto single = validate_tree({TreeNode::node(Op::Union, {TreeNode::leaf("pt")}), false}, env);
  CHECK(single.size() == 1);
  auto deep = validate_tree(
      {TreeNode::node(Op::Union, {TreeNode::leaf("pt"), TreeNode::node(Op::Complement, {TreeNode::leaf("pt"), TreeNode::leaf("pos")})}),
       false},
      env);
  REQUIRE(deep.size() == 1);
  CHECK(deep[0].vertex == "r.1");
}

TEST_CASE("omega_fd examples") {
  Environment env;
  env.define("A", parse_formula("vars x, y, z: (x = 0)"), FDPair{3, 4});
  env.define("B", parse_formula("vars x, y: (x = 0)"), FDPair{2, 3});
  env.define("C", parse_formula("vars x, y: (y = 0)"), FDPair{5, 1});
  env.define("E", parse_formula("vars x, y: (x = y)"), FDPair{3, 3});
  CHECK(omega_fd({TreeNode::leaf("A"), false}, env) == FDPair{3, 4});
  CHECK(omega_fd({TreeNode::node(Op::TimesRRight, {TreeNode::leaf("A")}), false}, env) == FDPair{4, 4});
  CHECK(omega_fd({TreeNode::node(Op::Intersection, {TreeNode::leaf("B"), TreeNode::leaf("C"), TreeNode::leaf("E")}), false},
                 env) == FDPair{5, 7});
  CHECK_THROWS(omega_fd({TreeNode::leaf("missing"), false}, env));
}

TEST_CASE("omega_prime_fd examples") {
  Environment env;
  env.define("L", parse_formula("vars a, b, c, d, e: (a = 0)"), FDPair{5, 2});
  env.define("M", parse_formula("vars x, y: (x = 0)"), FDPair{3, 2});
  CHECK(omega_prime_fd({TreeNode::leaf("L"), false}, env) == FDPair{5, 2});
  TreeNode chain = TreeNode::leaf("L");
  for (int i = 0; i < 3; ++i) chain = TreeNode::node(Op::Projection, {chain});
  CHECK(omega_prime_fd({chain, false}, env) == FDPair{5, 2});
  TreeNode mix = TreeNode::node(Op::TimesRRight, {TreeNode::node(Op::Intersection, {TreeNode::leaf("M"), TreeNode::leaf("M")})});
  CHECK(omega_prime_fd({mix, false}, env) == FDPair{4, 4});
}

TEST_CASE("omega_fd matches the closed form on random trees") {
  Environment env;
  fill(env);
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    StructureTree tr{random_tree(rng, 1 + rng() % 3, 28, t % 2 == 1), t % 2 == 1};
    REQUIRE(validate_tree(tr, env).empty());
    CHECK(count_nodes(tr.root) <= 50);
    FDPair fd = omega_fd(tr, env);
    CHECK(fd == oracle_fd(tr, env));
    // Complement never changes the FD; nor does projection.
    CHECK(omega_fd({TreeNode::node(Op::Complement, {tr.root}), tr.slanted}, env) == fd);
    if (tree_dim(tr, env) > 0) CHECK(omega_fd({TreeNode::node(Op::Projection, {tr.root}), tr.slanted}, env) == fd);
    // lift_times_R adds exactly one to the format.
    StructureTree up = lift_times_R(tr, env);
    CHECK(up.slanted);
    CHECK(omega_fd(up, env) == FDPair{fd.format + 1, fd.degree});
    CHECK(tree_dim(up, env) == tree_dim(tr, env) + 1);
  }
}

TEST_CASE("lift_times_R examples and semantics") {
  Environment env;
  env.define("A", parse_formula("vars x, y, z: (x = 0)"), FDPair{3, 4});
  env.define("B", parse_formula("vars x, y: (x - y = 0)"), FDPair{2, 1});
  CHECK(omega_fd(lift_times_R({TreeNode::leaf("A"), false}, env), env) == FDPair{4, 4});
  StructureTree once = lift_times_R({TreeNode::leaf("B"), false}, env);
  CHECK(omega_fd(lift_times_R(once, env), env) == FDPair{4, 1});

  Environment env2;
  fill(env2);
  std::mt19937 rng(9);
  for (int t = 0; t < 12; ++t) {
    StructureTree tr{random_tree(rng, 1 + rng() % 2, 8, false), false};
    if (omega_fd(tr, env2).degree == 9) CHECK(omega_fd(lift_times_R(tr, env2), env2).degree == 9);
    Formula a = tree_to_formula(tr, env2), b = tree_to_formula(lift_times_R(tr, env2), env2);
    for (int s = 0; s < 8; ++s) {
      auto p = random_point(rng, a.dimension());
      auto q = p;
      q.insert(q.begin(), Rational(rng() % 7) - 3);
      CHECK(evaluate(a, p).value == evaluate(b, q).value);
    }
  }
}

TEST_CASE("tree_to_formula") {
  Environment env;
  fill(env);
  Formula c = tree_to_formula({TreeNode::node(Op::Complement, {TreeNode::leaf("pt")}), false}, env);
  CHECK(to_string(c) == "vars x: not (x = 0)");
  CHECK(evaluate(c, {Rational(1)}).value);
  CHECK_FALSE(evaluate(c, {Rational(0)}).value);

  Formula p = tree_to_formula({TreeNode::node(Op::Projection, {TreeNode::leaf("line")}), false}, env);
  CHECK(to_string(p) == "vars x: exists y. (-y + x = 0)");
  for (int k = -3; k <= 3; ++k) CHECK(evaluate(p, {Rational(k, 2)}).value);

  Formula u = tree_to_formula(
      {TreeNode::node(Op::Union, {TreeNode::leaf("circle"), TreeNode::node(Op::TimesRRight, {TreeNode::leaf("pt")})}), false},
      env);
  std::mt19937 rng(1);
  for (int s = 0; s < 50; ++s) {
    // Half the samples on the circle (rational parametrization), half generic.
    std::vector<Rational> pt;
    if (s % 2) {
      Rational t = Rational(static_cast<int>(rng() % 41) - 20, 7);
      t.canonicalize();
      pt = {(1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)};
      for (auto& q : pt) q.canonicalize();
    } else {
      pt = random_point(rng, 2);
    }
    bool oracle = pt[0] * pt[0] + pt[1] * pt[1] == 1 || pt[0] == 0;
    CHECK(evaluate(u, pt).value == oracle);
  }
}

TEST_CASE("tree_to_formula degree matches omega_fd on single-atom leaves") {
  Environment env;
  env.define("a", parse_formula("vars x, y: (x^2 - y = 0)"), FDPair{2, 2});
  env.define("b", parse_formula("vars x, y: (x*y - 1 > 0)"), FDPair{2, 2});
  env.define("c", parse_formula("vars x: (x^3 - x < 0)"), FDPair{1, 3});
  const std::vector<std::vector<std::string>> leaves{{}, {"c"}, {"a", "b"}};
  std::mt19937 rng(21);
  for (int t = 0; t < 40; ++t) {
    std::function<TreeNode(std::size_t, int)> gen = [&](std::size_t dim, int budget) -> TreeNode {
      int r = static_cast<int>(rng() % 5);
      if (budget <= 1 || r == 0) return TreeNode::leaf(leaves[dim][rng() % leaves[dim].size()]);
      if (r == 1) return TreeNode::node(Op::Union, {gen(dim, budget / 2), gen(dim, budget / 2)});
      if (r == 2) return TreeNode::node(Op::Complement, {gen(dim, budget - 1)});
      if (r == 3 && dim == 1) return TreeNode::node(Op::Projection, {gen(2, budget - 1)});
      if (dim == 2) return TreeNode::node(Op::TimesRRight, {gen(1, budget - 1)});
      return TreeNode::node(Op::Intersection, {gen(dim, budget / 2), gen(dim, budget / 2)});
    };
    StructureTree tr{gen(1 + rng() % 2, 10), false};
    CHECK(omega_fd(tr, env).degree == fd_of_formula(tree_to_formula(tr, env)).degree);
  }
}

TEST_CASE("child order of union and intersection has no effect") {
  Environment env;
  fill(env);
  std::mt19937 rng(4);
  for (int t = 0; t < 10; ++t) {
    TreeNode a = random_tree(rng, 2, 6, false), b = random_tree(rng, 2, 6, false);
    for (Op op : {Op::Union, Op::Intersection}) {
      StructureTree ab{TreeNode::node(op, {a, b}), false}, ba{TreeNode::node(op, {b, a}), false};
      CHECK(omega_fd(ab, env) == omega_fd(ba, env));
      Formula fa = tree_to_formula(ab, env), fb = tree_to_formula(ba, env);
      for (int s = 0; s < 5; ++s) {
        auto p = random_point(rng, 2);
        CHECK(evaluate(fa, p).value == evaluate(fb, p).value);
      }
    }
  }
}

TEST_CASE("cylinder cells are compatible with every vertex") {
  Environment env;
  fill(env);
  StructureTree t{TreeNode::node(
                      Op::Union,
                      {TreeNode::node(Op::Intersection, {TreeNode::leaf("disk"), TreeNode::node(Op::Complement, {TreeNode::leaf("line")})}),
                       TreeNode::node(Op::TimesRRight, {TreeNode::node(Op::Projection, {TreeNode::leaf("circle")})})}),
                  false};
  auto rep = check_tree_compatibility(t, env, 3, 7);
  CHECK(rep.ok());
  CHECK(rep.leaf_dim == 2);
  CHECK(rep.vertices == 8);
  CHECK(rep.cells_checked > 0);
  for (const auto& f : rep.failures) MESSAGE(f);
  // A product above the leaf dimension uses cells C x R.
  StructureTree up{TreeNode::node(Op::TimesRRight, {TreeNode::leaf("circle")}), false};
  CHECK(check_tree_compatibility(up, env, 2, 1).ok());
  CHECK_THROWS(check_tree_compatibility(lift_times_R(up, env), env, 2, 1));
}

TEST_CASE("tree json round trip") {
  Environment env;
  fill(env);
  std::mt19937 rng(8);
  for (int t = 0; t < 20; ++t) {
    StructureTree tr{random_tree(rng, 2, 12, t % 2 == 0), t % 2 == 0};
    auto j = to_json(tr);
    StructureTree back = tree_from_json(j, env);
    CHECK(to_json(back) == j);
  }
  Environment fresh;
  auto j = nlohmann::json::parse(R"J({
    "sets": {"S": {"formula": "vars x, y: (x^2 + y^2 - 1 < 0)", "fd": [2, 2]}},
    "root": {"op": "project_last", "children": [{"leaf": "S"}]}})J");
  StructureTree tr = tree_from_json(j, fresh);
  CHECK(omega_fd(tr, fresh) == FDPair{2, 2});
  CHECK(tree_dim(tr, fresh) == 1);
  CHECK_THROWS(tree_from_json(nlohmann::json::parse(R"({"root": {"op": "glue", "children": []}})"), fresh));
}
