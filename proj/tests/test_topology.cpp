#include <doctest.h>

#include "fdcalc/evaluate.hpp"
#include "fdcalc/syntax.hpp"
#include "fdcalc/topology.hpp"

#include <functional>
#include <numeric>
#include <random>
#include <set>

using namespace fdc;

namespace {

// Components of {pred} sampled on the grid of step 1/200 over [-5, 5]^2,
// joining 8-neighbours that are both inside.
std::size_t grid_components(const std::function<bool(double, double)>& pred) {
  const int n = 2001;
  std::vector<int> parent(static_cast<std::size_t>(n) * n, -1);
  auto id = [&](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (pred(-5 + i / 200.0, -5 + j / 200.0)) parent[id(i, j)] = static_cast<int>(id(i, j));
  const int di[] = {0, 1, 1, 1}, dj[] = {1, -1, 0, 1};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (parent[id(i, j)] < 0) continue;
      for (int k = 0; k < 4; ++k) {
        int a = i + di[k], b = j + dj[k];
        if (a >= n || b < 0 || b >= n || parent[id(a, b)] < 0) continue;
        int x = find(static_cast<int>(id(i, j))), y = find(static_cast<int>(id(a, b)));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
      }
    }
  std::size_t count = 0;
  for (std::size_t k = 0; k < parent.size(); ++k)
    if (parent[k] == static_cast<int>(k)) ++count;
  return count;
}

// Hand-built complexes.
SimplicialComplex closure_of(std::size_t nverts, const std::vector<std::vector<std::size_t>>& tops) {
  SimplicialComplex K;
  K.ambient = 2;
  for (std::size_t v = 0; v < nverts; ++v) K.vertices.push_back({Rational(static_cast<long>(v)), Rational(0)});
  std::set<std::vector<std::size_t>> all;
  for (auto s : tops) {
    std::sort(s.begin(), s.end());
    for (unsigned mask = 1; mask < (1u << s.size()); ++mask) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      all.insert(f);
    }
  }
  K.simplices.assign(all.begin(), all.end());
  return K;
}

long euler(const SimplicialComplex& K) {
  return static_cast<long>(K.count(0)) - static_cast<long>(K.count(1)) + static_cast<long>(K.count(2));
}

long cell_euler(const Triangulation& T) {
  long chi = 0;
  for (const auto& img : T.cells) chi += T.decomposition.cells()[img.cell].dimension() % 2 ? -1 : 1;
  return chi;
}

}  // namespace

TEST_CASE("adjacency on the line") {
  auto d = cad({parse_polynomial("x", {"x"})}, 1);
  auto g = adjacency(d);
  REQUIRE(g.size() == 3);
  CHECK(g.edges() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  CHECK(g.certified);
  CHECK(g.bounded == std::vector<bool>{false, true, false});
}

TEST_CASE("adjacency of the circle decomposition") {
  Formula circle = parse_formula("vars x, y: (x^2 + y^2 - 1 = 0)");
  auto d = compatible_decomposition({circle}, 2);
  REQUIRE(d.size() == 13);
  auto g = adjacency(d);
  std::vector<std::size_t> on;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (d.member[c][0]) on.push_back(c);
  REQUIRE(on.size() == 4);
  // Two points and two arcs; each arc touches both points.
  std::size_t edges = 0;
  for (std::size_t a : on)
    for (std::size_t b : on)
      if (a < b && g.adjacent(a, b)) {
        ++edges;
        CHECK(d.cells()[a].dimension() != d.cells()[b].dimension());
      }
  CHECK(edges == 4);
  for (std::size_t a : on) {
    std::size_t deg = 0;
    for (std::size_t b : on) deg += a != b && g.adjacent(a, b);
    CHECK(deg == 2);
  }
  // Symmetric, and closure only ever adds lower-dimensional cells.
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b : g.neighbours[a]) CHECK(g.adjacent(b, a));
    for (std::size_t b : g.closure[a]) CHECK(d.cells()[b].dimension() < d.cells()[a].dimension());
  }
}

TEST_CASE("two disjoint disks have unlinked stacks") {
  Formula X = parse_formula("vars x, y: (x^2 + y^2 - 1 < 0) or ((x - 3)^2 + y^2 - 1 < 0)");
  auto r = connected_components(X);
  CHECK(r.components.size() == 2);
  const auto& d = r.decomposition;
  for (std::size_t a : r.components[0].cells)
    for (std::size_t b : r.components[1].cells) CHECK_FALSE(r.graph.adjacent(a, b));
}

TEST_CASE("connected_components examples") {
  CHECK(connected_components(parse_formula("(x^2 - 1 = 0)")).components.size() == 2);
  CHECK(connected_components(parse_formula("vars x, y: ((x^2 + y^2 - 1)*(x^2 + y^2 - 4) = 0)")).components.size() == 2);
  CHECK(connected_components(parse_formula("(x^2 + 1 = 0)")).components.empty());
  CHECK(connected_components(parse_formula("vars x, y: (x*y = 0)")).components.size() == 1);
  CHECK(connected_components(parse_formula("vars x, y: (y^2 - x^2*(x + 1) = 0)")).components.size() == 1);
  auto r = connected_components(parse_formula("vars x, y: (x^2 + y^2 - 1 <= 0)"));
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].fd.format >= 2);
  // The component formula describes the component.
  CHECK(evaluate(r.components[0].formula, std::vector<Rational>{Rational(1, 2), Rational(1, 2)}).value);
  CHECK_FALSE(evaluate(r.components[0].formula, std::vector<Rational>{Rational(1), Rational(1)}).value);
  CHECK(to_json(r)["count"] == 1);
}

TEST_CASE("component counts agree with the grid oracle") {
  struct Case {
    const char* text;
    std::function<bool(double, double)> pred;
  };
  std::vector<Case> cases{
      {"vars x, y: (x^2 + y^2 - 1 < 0) or ((x - 3)^2 + y^2 - 1 < 0)",
       [](double x, double y) { return x * x + y * y < 1 || (x - 3) * (x - 3) + y * y < 1; }},
      {"vars x, y: (x^2 + y^2 > 1) and (x^2 + y^2 < 4)",
       [](double x, double y) { return x * x + y * y > 1 && x * x + y * y < 4; }},
      // Regions must be separated by more than a grid step: 8-neighbours
      // would otherwise step across a dividing curve.
      {"vars x, y: ((x^2 + y^2 - 1)*(x^2 + y^2 - 9) > 0)",
       [](double x, double y) { return (x * x + y * y - 1) * (x * x + y * y - 9) > 0; }},
      {"vars x, y: (x*y > 1)", [](double x, double y) { return x * y > 1; }},
      {"vars x, y: ((x^2 - 1)*(y^2 - 1) < 0)", [](double x, double y) { return (x * x - 1) * (y * y - 1) < 0; }},
  };
  for (const auto& c : cases) {
    INFO(std::string(c.text));
    CHECK(connected_components(parse_formula(c.text)).components.size() == grid_components(c.pred));
  }
}

TEST_CASE("check_component_bound") {
  std::map<unsigned, Formula> fam;
  for (unsigned D = 1; D <= 8; ++D) {
    std::string p = "1";
    for (unsigned i = 1; i <= D; ++i) p += "*(x - " + std::to_string(i) + ")";
    fam.emplace(D, parse_formula("(" + p + " > 0)"));
  }
  auto rep = check_component_bound(fam, Rational(3, 2));
  for (unsigned D = 1; D <= 8; ++D) CHECK(rep.counts.at(D) == (D + 2) / 2);
  CHECK(rep.exponent == doctest::Approx(1.0));
  CHECK(rep.passes);
  REQUIRE(rep.witness);
  CHECK(rep.witness->lower_dimensional);
  CHECK(rep.witness->meets.size() == rep.counts.at(8));
  CHECK(rep.table().find("PASS") != std::string::npos);

  std::map<unsigned, Formula> constant;
  for (unsigned D = 1; D <= 4; ++D) constant.emplace(D, parse_formula("(x > 0)"));
  auto c = check_component_bound(constant, Rational(0));
  CHECK(c.exponent == 0);
  CHECK(c.passes);

  std::map<unsigned, Formula> grid;
  for (unsigned D = 1; D <= 3; ++D) {
    std::string p = "1";
    for (unsigned i = 1; i <= D; ++i) p += "*(x - " + std::to_string(i) + ")*(y - " + std::to_string(i) + ")";
    grid.emplace(D, parse_formula("vars x, y: (" + p + " = 0)"));
  }
  auto gr = check_component_bound(grid, Rational(1));
  for (auto [D, n] : gr.counts) CHECK(n == 1);

  CHECK_THROWS(check_component_bound({}, Rational(1)));
}

TEST_CASE("fitted exponents") {
  std::map<unsigned, std::size_t> sq;
  for (unsigned D = 1; D <= 10; ++D) sq[D] = D * D;
  CHECK(envelope_exponent(sq) == doctest::Approx(2.0));
  CHECK(loglog_slope(sq) == doctest::Approx(2.0));
  std::map<unsigned, std::size_t> lin{{2, 4}, {4, 8}, {8, 16}};
  CHECK(envelope_exponent(lin) == doctest::Approx(1.0));
}

TEST_CASE("stratify") {
  auto disk = stratify(parse_formula("vars x, y: (x^2 + y^2 - 1 <= 0)"));
  REQUIRE(disk.strata.size() == 3);
  CHECK(disk.strata[0].dim == 2);
  CHECK(disk.strata[1].dim == 1);
  CHECK(disk.strata[2].dim == 0);
  std::size_t total = 0;
  for (const auto& s : disk.strata) {
    total += s.cells.size();
    for (std::size_t c : s.cells) {
      CHECK(disk.inside[c]);
      CHECK(disk.decomposition.cells()[c].dimension() == s.dim);
      CHECK(smoothness_probe(disk.decomposition, c, 20, c));
    }
  }
  CHECK(total == static_cast<std::size_t>(std::count(disk.inside.begin(), disk.inside.end(), true)));

  auto pt = stratify(parse_formula("vars x, y: (x^2 + y^2 = 0)"));
  REQUIRE(pt.strata.size() == 1);
  CHECK(pt.strata[0].dim == 0);
  auto plane = stratify(parse_formula("vars x, y: (0 = 0)"));
  REQUIRE(plane.strata.size() == 1);
  CHECK(plane.strata[0].dim == 2);
  CHECK(to_json(disk)["strata"].size() == 3);

  auto cubic = stratify(parse_formula("vars x, y: (y - x^3 + x = 0)"));
  for (const auto& s : cubic.strata)
    for (std::size_t c : s.cells) CHECK(smoothness_probe(cubic.decomposition, c, 20, 7));
}

TEST_CASE("betti on hand-built complexes") {
  // Hollow triangle, two filled triangles, hollow tetrahedron.
  CHECK(betti(closure_of(3, {{0, 1}, {1, 2}, {0, 2}})) == std::vector<std::size_t>{1, 1, 0});
  CHECK(betti(closure_of(6, {{0, 1, 2}, {3, 4, 5}})) == std::vector<std::size_t>{2, 0, 0});
  CHECK(betti(closure_of(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}})) == std::vector<std::size_t>{1, 0, 1});
  // Triangulated annulus: inner triangle 0,1,2, outer triangle 3,4,5.
  CHECK(betti(closure_of(6, {{0, 1, 3}, {1, 3, 4}, {1, 2, 4}, {2, 4, 5}, {2, 0, 5}, {0, 5, 3}})) ==
        std::vector<std::size_t>{1, 1, 0});
  // Wedge of two circles.
  CHECK(betti(closure_of(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}})) == std::vector<std::size_t>{1, 2, 0});

  SimplicialComplex bad = closure_of(3, {{0, 1, 2}});
  bad.simplices.erase(std::find(bad.simplices.begin(), bad.simplices.end(), std::vector<std::size_t>{0, 1}));
  CHECK_THROWS_AS(betti(bad), std::invalid_argument);
  SimplicialComplex unsorted = closure_of(2, {{0, 1}});
  unsorted.simplices.push_back({1, 0});
  CHECK_THROWS_AS(betti(unsorted), std::invalid_argument);
}

TEST_CASE("betti matches the Euler characteristic on random complexes") {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 4 + rng() % 6;
    std::vector<std::vector<std::size_t>> tops;
    for (int k = 0; k < 6; ++k) {
      std::vector<std::size_t> s{rng() % n, rng() % n, rng() % n};
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      tops.push_back(s);
    }
    auto K = closure_of(n, tops);
    auto b = betti(K);
    CHECK(static_cast<long>(b[0]) - static_cast<long>(b[1]) + static_cast<long>(b[2]) == euler(K));
    // b0 by union-find on the 1-skeleton.
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); };
    for (const auto& s : K.simplices)
      if (s.size() == 2) p[find(s[0])] = find(s[1]);
    std::size_t roots = 0;
    for (const auto& s : K.simplices)
      if (s.size() == 1) roots += find(s[0]) == s[0];
    CHECK(b[0] == roots);
  }
}

TEST_CASE("triangulate examples") {
  auto seg = triangulate(parse_formula("vars x, y: (y = 1/2) and (x >= 1/4) and (x <= 1/2)"));
  CHECK(seg.complex.count(0) == 2);
  CHECK(seg.complex.count(1) == 1);
  CHECK(seg.complex.count(2) == 0);
  CHECK(seg.complex.vertices[0] == std::vector<Rational>{Rational(1, 4), Rational(1, 2)});

  auto square = triangulate(parse_formula("vars x, y: (x >= 1/4) and (x <= 3/4) and (y >= 1/4) and (y <= 3/4)"));
  CHECK(square.complex.count(0) >= 4);
  CHECK(square.complex.count(2) >= 2);
  CHECK(betti(square.complex) == std::vector<std::size_t>{1, 0, 0});

  auto circle = triangulate(parse_formula("vars x, y: ((x - 1/2)^2 + (y - 1/2)^2 = 1/16)"),
                            {parse_formula("vars x, y: ((x - 1/2)^2 + (y - 1/2)^2 = 1/16) and (y >= 1/2)")});
  CHECK(betti(circle.complex) == std::vector<std::size_t>{1, 1, 0});
  // The upper half is a union of simplex images: labels agree with membership
  // at random points of the cell each simplex belongs to.
  Formula upper = parse_formula("vars x, y: (y >= 1/2)");
  std::mt19937_64 rng(9);
  for (const auto& img : circle.cells) {
    bool in_upper = circle.decomposition.member[img.cell][1];
    for (int s = 0; s < 5; ++s) CHECK(evaluate(upper, circle.decomposition.random_point(img.cell, rng)).value == in_upper);
    for (std::size_t sx : img.simplices) {
      const auto& lab = circle.complex.labels[sx];
      CHECK((std::find(lab.begin(), lab.end(), 1) != lab.end()) == in_upper);
    }
  }
  // Vertex images are exact points of X.
  Formula X = parse_formula("vars x, y: ((x - 1/2)^2 + (y - 1/2)^2 = 1/16)");
  for (const auto& v : circle.vertex_images) CHECK(evaluate(X, v).value);

  auto line = triangulate(parse_formula("(x^2 - 1 <= 0) or (x = 3)"));
  CHECK(betti(line.complex) == std::vector<std::size_t>{2, 0, 0});
}

TEST_CASE("triangulate rejects open or unbounded sets") {
  CHECK_THROWS_AS(triangulate(parse_formula("vars x, y: (x^2 + y^2 - 1 < 0)")), std::invalid_argument);
  CHECK_THROWS_AS(triangulate(parse_formula("vars x, y: (y = 0)")), std::invalid_argument);
  CHECK_THROWS_AS(triangulate(parse_formula("vars x, y: (x^2 + y^2 <= 1)"), {parse_formula("vars x, y: (x = 2)")}),
                  std::invalid_argument);
}

TEST_CASE("betti numbers of triangulated sets") {
  struct Case {
    const char* text;
    std::vector<std::size_t> b;
  };
  std::vector<Case> cases{
      {"vars x, y: (x^2 + y^2 = 1)", {1, 1, 0}},
      {"vars x, y: (x^2 + y^2 >= 1) and (x^2 + y^2 <= 4)", {1, 1, 0}},
      {"vars x, y: (x^2 + y^2 <= 1) or ((x - 3)^2 + y^2 <= 1)", {2, 0, 0}},
      {"vars x, y: ((x^2 + y^2 - 1)*(x^2 + y^2 - 4) = 0)", {2, 2, 0}},
      {"vars x, y: (x^2 + y^2 <= 4) and ((x - 1)^2 + y^2 >= 1/4) and ((x + 1)^2 + y^2 >= 1/4)", {1, 2, 0}},
      {"vars x, y: (y^2 - x^2*(x + 1) = 0) and (x <= 0)", {1, 1, 0}},
      {"vars x, y: (y^2 - x^3 = 0) and (x <= 1)", {1, 0, 0}},
      {"vars x, y: ((x^2 + y^2)^2 - 2*(x^2 - y^2) = 0)", {1, 2, 0}},
      {"vars x, y: ((x^2 + y^2)^2 - 2*(x^2 - y^2) <= 0)", {1, 0, 0}},
      {"vars x, y: (x^2 + y^2 <= 1) or ((x - 2)^2 + y^2 <= 1)", {1, 0, 0}},
      {"vars x, y: (x^2 + y^2 = 1) or ((x - 2)^2 + y^2 = 1)", {1, 2, 0}},
  };
  for (const auto& c : cases) {
    INFO(c.text);
    Formula X = parse_formula(c.text);
    auto T = triangulate(X);
    auto b = betti(T.complex);
    CHECK(b == c.b);
    CHECK(euler(T.complex) == cell_euler(T));
    CHECK(b[0] == connected_components(X).components.size());
  }
}

TEST_CASE("complex export") {
  auto T = triangulate(parse_formula("vars x, y: (x^2 + y^2 <= 1)"));
  std::string off = to_off(T.complex);
  CHECK(off.rfind("OFF\n", 0) == 0);
  auto j = to_json(T.complex);
  auto K = complex_from_json(j);
  CHECK(K.simplices == T.complex.simplices);
  CHECK(K.vertices == T.complex.vertices);
  CHECK(betti(K) == std::vector<std::size_t>{1, 0, 0});
  j["simplices"].push_back({0, 99});
  CHECK_THROWS(complex_from_json(j));
}

TEST_CASE("adjacency in R^3 is flagged heuristic") {
  auto r = connected_components(parse_formula("vars x, y, z: (x^2 + y^2 + z^2 - 1 < 0) or ((x - 3)^2 + y^2 + z^2 - 1 < 0)"));
  CHECK_FALSE(r.certified);
  CHECK(r.components.size() == 2);
  auto s = connected_components(parse_formula("vars x, y, z: (x^2 + y^2 + z^2 - 1 = 0)"));
  CHECK(s.components.size() == 1);
  CHECK_THROWS_AS(adjacency(cad({parse_polynomial("x1", {"x1", "x2", "x3", "x4"})}, 4, CadOptions{4})), CeilingError);
}
