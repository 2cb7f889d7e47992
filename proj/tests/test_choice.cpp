#include <doctest.h>

#include "fdcalc/choice.hpp"
#include "fdcalc/evaluate.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/syntax.hpp"
#include "fdcalc/topology.hpp"

#include <random>

using namespace fdc;

namespace {

Formula P(const std::string& s) { return parse_formula(s); }

std::vector<Rational> lam(std::mt19937_64& rng, int range = 4) {
  std::uniform_int_distribution<int> num(-range * 32, range * 32);
  return {ratio(num(rng), 32)};
}

// The chosen point lies in the set, decided exactly.
bool lands(const ChoiceFunction& g, const ChoiceValue& v) {
  Verdict r = evaluate(g.total, v.point);
  REQUIRE(r.certainty == Certainty::Exact);
  return r.value;
}

Rational coord(const ChoiceValue& v, std::size_t i) {
  REQUIRE(v.point.is_rational(i));
  return v.point.rational(i);
}

}  // namespace

TEST_CASE("choice_1d: the examples") {
  std::mt19937_64 rng(5);
  auto right = choice_1d(P("vars l, x: x > l"));
  auto line = choice_1d(P("vars l, x: 0 = 0"));
  auto band = choice_1d(P("vars l, x: x > l and x < l + 2"));
  auto left = choice_1d(P("vars l, x: x < l"));
  for (int i = 0; i < 20; ++i) {
    auto L = lam(rng);
    auto v = right.evaluate(L);
    CHECK(v.cases[0] == ChoiceCase::C);
    CHECK(coord(v, 1) == L[0] + 1);
    v = line.evaluate(L);
    CHECK(v.cases[0] == ChoiceCase::A);
    CHECK(coord(v, 1) == 0);
    v = band.evaluate(L);
    CHECK(v.cases[0] == ChoiceCase::D);
    CHECK(coord(v, 1) == L[0] + 1);
    v = left.evaluate(L);
    CHECK(v.cases[0] == ChoiceCase::B);
    CHECK(coord(v, 1) == L[0] - 1);
  }
}

TEST_CASE("choice_1d: b is the end of the first run, not the supremum") {
  // (-inf, l) and (l + 1, inf): a = -inf, b = l.
  auto g = choice_1d(P("vars l, x: x < l or x > l + 1"));
  auto v = g.evaluate({Rational(3)});
  CHECK(v.cases[0] == ChoiceCase::B);
  CHECK(coord(v, 1) == 2);
  CHECK(g.region_of(0, {Rational(3)}) == ChoiceCase::B);
  // A point followed by a ray: b = a and g = a.
  g = choice_1d(P("vars l, x: x = l or x > l + 1"));
  v = g.evaluate({Rational(1, 2)});
  CHECK(v.cases[0] == ChoiceCase::D);
  CHECK(coord(v, 1) == Rational(1, 2));
  // Closed interval then a gap.
  g = choice_1d(P("vars l, x: (x >= 0 and x <= 1) or x > 2"));
  v = g.evaluate({Rational(0)});
  CHECK(v.cases[0] == ChoiceCase::D);
  CHECK(coord(v, 1) == Rational(1, 2));
}

TEST_CASE("choice_1d: algebraic endpoints") {
  auto g = choice_1d(P("vars l, x: (x^2 - 2 < 0 and x > l) or x > 5"));
  auto v = g.evaluate({Rational(0)});
  CHECK(v.cases[0] == ChoiceCase::D);
  CHECK(!v.point.is_rational(1));
  CHECK(v.point.approx()[1] == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(lands(g, v));
  // (sqrt 2, sqrt 3): the midpoint has degree 4.
  g = choice_1d(P("vars l, x: ((x^2 - 2) * (x^2 - 3) < 0 and x > l) or x > 5"));
  v = g.evaluate({Rational(1)});
  CHECK(v.point.approx()[1] == doctest::Approx((std::sqrt(2.0) + std::sqrt(3.0)) / 2));
  CHECK(lands(g, v));
  // Shifted algebraic ends: b - 1 and a + 1.
  g = choice_1d(P("vars l, x: x^2 - l < 0 or x < 0"));
  v = g.evaluate({Rational(3)});
  CHECK(v.cases[0] == ChoiceCase::B);
  CHECK(v.point.approx()[1] == doctest::Approx(std::sqrt(3.0) - 1));
  CHECK(exact_coordinate(v.point, 1).rfind("root of", 0) == 0);
  g = choice_1d(P("vars l, x: x^3 - l > 0"));
  v = g.evaluate({Rational(2)});
  CHECK(v.cases[0] == ChoiceCase::C);
  CHECK(v.point.approx()[1] == doctest::Approx(std::cbrt(2.0) + 1));
  CHECK(lands(g, v));
}

TEST_CASE("choice_1d: soundness and region partition on parametric families") {
  const char* families[] = {
      "vars l, x: x > l",
      "vars l, x: x > l or l > 0",
      "vars l, x: x^2 < l or x = l",
      "vars l, x: (x - l) * (x - l - 1) < 0 or x > l + 3",
      "vars l, x: x * l > 1 or x * l < 1",
      "vars l, x: x^2 + l^2 <= 4 or x > 5",
      "vars l, x: x < l^2 or x > l^2 + 1",
      "vars l, x: exists y. (y^2 = x and y > l)",
  };
  std::mt19937_64 rng(11);
  for (const char* text : families) {
    INFO(std::string(text));
    auto g = choice_1d(P(text));
    int seen[4] = {0, 0, 0, 0};
    for (int i = 0; i < 40; ++i) {
      auto L = lam(rng);
      auto v = g.evaluate(L);
      CHECK(lands(g, v));
      CHECK(g.region_of(0, L) == v.cases[0]);
      ++seen[static_cast<int>(v.cases[0])];
    }
    CHECK(seen[0] + seen[1] + seen[2] + seen[3] == 40);
  }
}

TEST_CASE("choice: region and section formulas") {
  auto g = choice_1d(P("vars l, x: x > l"));
  REQUIRE(g.steps.size() == 1);
  const auto& s = g.steps[0];
  for (int i = 0; i < 4; ++i) {
    CHECK(s.regions[i].free_vars == std::vector<std::string>{"l"});
    CHECK(s.sections[i].free_vars == std::vector<std::string>{"l", "x"});
    CHECK(s.region_fd[i].format >= 3);
  }
  // Region C holds everywhere, the others nowhere.
  for (int q : {-3, 0, 2}) {
    std::vector<Rational> L{Rational(q)};
    CHECK(!evaluate(s.regions[0], L).value);
    CHECK(!evaluate(s.regions[1], L).value);
    CHECK(evaluate(s.regions[2], L).value);
    CHECK(!evaluate(s.regions[3], L).value);
  }
  // The graph of a is the diagonal.
  CHECK(evaluate(s.graph_a, {Rational(1), Rational(1)}).value);
  CHECK(!evaluate(s.graph_a, {Rational(1), Rational(2)}).value);
  CHECK(g.fd == fd_of_formula(g.graph));
  CHECK(g.fd.format >= s.region_fd[0].format);
  auto j = to_json(g);
  CHECK(j["schema"] == "fdcalc.choice/1");
  CHECK(j["steps"][0]["regions"]["C"]["fd"][0] == s.region_fd[2].format);
}

TEST_CASE("choice: two coordinates") {
  auto g = choice(P("vars l, x, y: x > l and y > x"), 2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto L = lam(rng);
    auto v = g.evaluate(L);
    CHECK(coord(v, 1) == L[0] + 1);
    CHECK(coord(v, 2) == L[0] + 2);
    CHECK(v.cases == std::vector<ChoiceCase>{ChoiceCase::C, ChoiceCase::C});
    CHECK(lands(g, v));
  }
  g = choice(P("vars l, x, y: x = 0 and y = 0"), 2);
  auto v = g.evaluate({Rational(7)});
  CHECK(coord(v, 1) == 0);
  CHECK(coord(v, 2) == 0);
  g = choice(P("vars l, x, y: x^2 + y^2 < 1"), 2);
  v = g.evaluate({Rational(-2)});
  CHECK(coord(v, 1) == 0);
  CHECK(coord(v, 2) == 0);
  CHECK(v.cases == std::vector<ChoiceCase>{ChoiceCase::D, ChoiceCase::D});
  // The second slice depends on the first choice.
  g = choice(P("vars l, x, y: x > l and y^2 < x"), 2);
  v = g.evaluate({Rational(1)});
  CHECK(coord(v, 1) == 2);
  CHECK(v.point.approx()[2] == doctest::Approx(0));
  CHECK(lands(g, v));
  // No parameters.
  g = choice(P("vars x, y: x^2 + y^2 = 1 and y > 0"), 2);
  v = g.evaluate({});
  CHECK(lands(g, v));
  CHECK(coord(v, 0) == 0);
  CHECK(coord(v, 1) == 1);
  CHECK(g.steps.size() == 2);
  CHECK(g.steps[1].family.free_vars == std::vector<std::string>{"y"});
}

TEST_CASE("choice: empty fibers and ceiling") {
  CHECK_THROWS_AS(choice_1d(P("vars l, x: x^2 < l")), EmptyFiberError);
  ChoiceOptions strict;
  strict.strict = true;
  strict.samples = 0;
  CHECK_THROWS_AS(choice_1d(P("vars l, x: x^2 < l"), strict), EmptyFiberError);
  // Empty only at one parameter value: sampling misses it, strict mode finds it.
  auto g = choice_1d(P("vars l, x: x * l = 1"));
  CHECK(!g.certified_nonempty);
  g = choice_1d(P("vars l, x: x^2 + l^2 > 0"), strict);
  CHECK(g.certified_nonempty);
  CHECK_THROWS_AS(choice_1d(P("vars l, x: x * l = 1"), strict), EmptyFiberError);
  CHECK_THROWS_AS(choice(P("vars a, b, c, x: x > a"), 1), CeilingError);
  auto v = choice_1d(P("vars l, x: x > l")).evaluate({Rational(1, 3)});
  auto j = to_json(v);
  CHECK(j["cases"][0] == "C");
  CHECK(j["value"][0] == "4/3");
}

TEST_CASE("star_fd and union") {
  Formula X = P("vars x: x > 0");
  StarRep a{1, {{X, {3, 5}, 0}}};
  CHECK(star_fd(a) == FDPair{3, 5});
  StarRep b{1, {{X, {2, 4}, 0}}};
  CHECK(star_fd(star_union(a, b)) == FDPair{3, 9});
  CHECK_THROWS(star_fd(StarRep{1, {}}));
  CHECK_THROWS(star_union(a, StarRep{2, {}}));
  StarRep low{2, {{X, {1, 1}, 0}}};
  CHECK_THROWS(star_fd(low));
  // (max, sum) on random lists.
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    StarRep r{1, {}}, s{1, {}};
    unsigned F = 0, D = 0;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 4); ++i) {
      FDPair fd{static_cast<unsigned>(rng() % 5 + 1), static_cast<unsigned>(rng() % 9 + 1)};
      (i % 2 ? r : s).entries.push_back({X, fd, 0});
      F = std::max(F, fd.format);
      D += fd.degree;
    }
    if (r.entries.empty() || s.entries.empty()) continue;
    CHECK(star_fd(star_union(r, s)) == FDPair{F, D});
    auto fr = star_fd(r), fs = star_fd(s);
    CHECK(star_fd(star_union(r, s)) == FDPair{std::max(fr.format, fs.format), fr.degree + fs.degree});
  }
}

TEST_CASE("to_star") {
  auto r = to_star(P("vars x: x^2 = 1"), {1, 2});
  CHECK(r.entries.size() == 2);
  CHECK(star_fd(r) == FDPair{1, 4});
  CHECK(star_member(r, {Rational(-1)}));
  CHECK(star_member(r, {Rational(1)}));
  CHECK(!star_member(r, {Rational(0)}));
  r = to_star(P("vars x, y: x^2 + y^2 < 1"), {2, 3});
  CHECK(star_fd(r) == FDPair{2, 3});
  r = to_star(P("vars x: x^2 < 0"), {1, 2});
  REQUIRE(r.entries.size() == 1);
  CHECK(!r.entries[0].component);
  CHECK(star_fd(r) == FDPair{1, 2});
  CHECK(!star_member(r, {Rational(0)}));
  // Omega <= Omega*: (F, N D) with N the component count.
  for (const char* text : {"vars x, y: (x^2 + y^2 - 1) * ((x - 3)^2 + y^2 - 1) < 0", "vars x, y: x * y > 1",
                           "vars x, y: y^2 = x^2 * (x + 1)", "vars x, y: (x^2 - 1) * (y^2 - 1) < 0"}) {
    Formula Y = P(text);
    FDPair fd = fd_of_formula(Y);
    auto s = to_star(Y, fd);
    std::size_t N = connected_components(Y).components.size();
    CHECK(star_fd(s) == FDPair{fd.format, static_cast<unsigned>(N * fd.degree)});
    CHECK(fd.leq(star_fd(s)));
  }
  auto j = to_json(to_star(P("vars x: x^2 = 1"), {1, 2}));
  CHECK(j["schema"] == "fdcalc.star/1");
  CHECK(j["star_fd"][1] == 4);
}

TEST_CASE("component selection and projected membership") {
  Formula X = P("vars x, y: (x - y) * (x - y - 1/4) = 0 and x > 0 and x < 1 and y > 0 and y < 1");
  auto c = component_containing(X, {Rational(1, 2), Rational(1, 4)});
  REQUIRE(c);
  auto d = component_containing(X, {Rational(1, 2), Rational(1, 2)});
  REQUIRE(d);
  CHECK(*c != *d);
  CHECK(!component_containing(X, {Rational(1, 2), Rational(0)}));
  StarRep r{1, {{X, fd_of_formula(X), *c}}};
  CHECK(star_member(r, {Rational(1, 2)}));
  CHECK(star_member(r, {Rational(99, 100)}));
  CHECK(!star_member(r, {Rational(1, 4)}));
  CHECK(!star_member(r, {Rational(1, 8)}));
}

TEST_CASE("star_ccd: projected segment") {
  Formula X = P("vars x, y: (x - y) * (x - y - 1/4) = 0 and x > 0 and x < 1 and y > 0 and y < 1");
  auto c = component_containing(X, {Rational(1, 2), Rational(1, 4)});
  REQUIRE(c);
  StarRep r{1, {{X, fd_of_formula(X), *c}}};
  auto sd = star_ccd({r}, 1);
  REQUIRE(!sd.cells.empty());
  std::mt19937_64 rng(4);
  for (const auto& cell : sd.cells) {
    const Cell& cl = sd.decomposition.layers[0][cell.cell];
    auto p = sd.decomposition.random_point_in(1, cell.cell, rng);
    double x = p.approx()[0];
    CHECK(x > 0);
    CHECK(x < 1);
    CHECK(cell.in[0] == (x > 0.25));
    if (cl.dimension() == 0) CHECK(cell.in[0] == (x > 0.25 + 1e-9));
    CHECK(cell.star.format == 2);
    CHECK(cell.rep.dim == 1);
    // The selector is valid for the sign-condition set.
    auto cr = connected_components(cell.rep.entries[0].source);
    CHECK(*cell.rep.entries[0].component < cr.components.size());
  }
  auto j = to_json(sd);
  CHECK(j["count"] == sd.cells.size());
}

TEST_CASE("star_ccd: cells of the output are faithful") {
  // Every sign-condition component holds the top cell it was built from.
  Formula X = P("vars x, y: 16*(x - 1/2)^2 + 16*(y - 1/2)^2 < 1");
  auto sd = star_ccd({to_star(X, fd_of_formula(X))}, 2);
  std::size_t inside = 0;
  for (const auto& cell : sd.cells) {
    const auto& e = cell.rep.entries[0];
    auto cr = connected_components(e.source);
    REQUIRE(*e.component < cr.components.size());
    const auto& pt = sd.decomposition.layers[1][cell.cell].sample;
    if (pt.all_rational()) {
      auto loc = cr.decomposition.locate(pt.rationals());
      bool found = false;
      for (auto k : cr.components[*e.component].cells) found |= k == loc;
      CHECK(found);
    }
    inside += cell.in[0];
  }
  CHECK(inside > 0);
  CHECK(sd.max_star.format == 2);
  CHECK(sd.max_naive.format >= sd.max_star.format);
  // Sets already cells: compatibility is exact.
  Formula H = P("vars x: x > 0 and x < 1/2");
  auto h = star_ccd({to_star(H, fd_of_formula(H))}, 1);
  for (const auto& cell : h.cells) {
    double x = h.decomposition.layers[0][cell.cell].sample.approx()[0];
    CHECK(cell.in[0] == (x < 0.5));
  }
  CHECK_THROWS_AS(star_ccd({to_star(H, fd_of_formula(H))}, 1, CadOptions{0}), CeilingError);
}
