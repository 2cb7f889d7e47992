#include <doctest.h>

#include "fdcalc/constructions.hpp"
#include "fdcalc/evaluate.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/syntax.hpp"

#include <cmath>
#include <functional>
#include <random>

using namespace fdc;

namespace {

bool member(const Formula& f, std::vector<Rational> pt) { return evaluate(f, pt).value; }

// Central-difference probe: the one-sided slopes agree at a differentiable point.
bool fd_probe(const std::function<double(double)>& F, double x) {
  const double h = 1e-6;
  double right = (F(x + h) - F(x)) / h, left = (F(x) - F(x - h)) / h;
  return std::abs(right - left) < 1e-3;
}

}  // namespace

TEST_CASE("rescale_to_unit examples") {
  Formula all = rescale_to_unit(parse_formula("vars x: (0 = 0)"));
  CHECK(member(all, {Rational(1, 3)}));
  CHECK_FALSE(member(all, {Rational(3, 2)}));
  CHECK_FALSE(member(all, {Rational(0)}));
  Formula zero = rescale_to_unit(parse_formula("vars x: (x = 0)"));
  CHECK(member(zero, {Rational(1, 2)}));
  CHECK_FALSE(member(zero, {Rational(1, 3)}));
  Formula pos = rescale_to_unit(parse_formula("(x > 0)"));
  CHECK(member(pos, {Rational(3, 4)}));
  CHECK_FALSE(member(pos, {Rational(1, 4)}));
  CHECK_FALSE(member(pos, {Rational(1, 2)}));
}

TEST_CASE("rescale_to_unit agrees with the coordinate map") {
  std::vector<Formula> sets{
      parse_formula("(x^2 - 2 < 0)"),
      parse_formula("(x^3 - x > 0)"),
      parse_formula("exists y. (x - y^2 = 0)"),
      parse_formula("(x^2 + y^2 - 4 < 0) or (x*y - 1 = 0)"),
      parse_formula("vars x, y: forall z. ((z^2 + x*z + y > 0) or (z^2 + x*z + y = 0))"),
  };
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(1, 999);
  for (const auto& X : sets) {
    Formula R = rescale_to_unit(X);
    CHECK(R.free_vars == X.free_vars);
    for (int t = 0; t < 100; ++t) {
      std::vector<Rational> u, v;
      for (std::size_t i = 0; i < X.dimension(); ++i) {
        Rational s = Rational(num(rng)) / 1000;
        s.canonicalize();
        u.push_back(s);
        v.push_back(unit_to_real(s));
      }
      CHECK(member(R, u) == member(X, v));
    }
  }
}

TEST_CASE("diagonal formulas") {
  Formula line = parse_formula("vars x, y: (x - y = 0)");
  auto [ab, z] = diagonal_formulas(line, line, 2);
  CHECK(ab.dimension() == 4);
  CHECK(member(ab, {1, 1, 1, 1}));
  CHECK(member(ab, {1, 1, 1, 1}));
  CHECK(member(ab, {2, 2, 2, 2}));
  CHECK_FALSE(member(ab, {1, 1, 2, 2}));
  CHECK(member(z, {2, 2, 2, 2}));
  CHECK_FALSE(member(z, {2, 2, 2, 3}));
  // n = 1 imposes nothing beyond the product.
  auto [prod, z1] = diagonal_formulas(line, line, 1);
  CHECK(member(prod, {1, 1, 5, 5}));
  CHECK_FALSE(member(z1, {1, 1, 5, 5}));
  CHECK(member(z1, {1, 1, 1, 1}));
  // Disjoint in the first coordinate.
  Formula left = parse_formula("vars x, y: (x < 0)"), right = parse_formula("vars x, y: (x > 0)");
  auto [empty, ez] = diagonal_formulas(left, right, 2);
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int t = 0; t < 50; ++t) {
    Rational a = num(rng);
    CHECK_FALSE(member(empty, {a, num(rng), a, num(rng)}));
  }
  CHECK_THROWS(diagonal_formulas(line, line, 3));
  CHECK_THROWS(diagonal_formulas(line, parse_formula("(x > 0)"), 1));
}

TEST_CASE("local maxima") {
  Formula circle = parse_formula("vars x, y: (x^2 + y^2 - 1 = 0)");
  Formula top = local_maxima_formula(circle, {0, 1});
  // Rational points of the circle from the stereographic parametrization,
  // compared with a dense-sample argmax oracle.
  for (int k = -6; k <= 6; ++k) {
    Rational t = Rational(k) / 3;
    Rational x = (1 - t * t) / (1 + t * t), y = 2 * t / (1 + t * t);
    double px = x.get_d(), py = y.get_d();
    bool oracle = true;
    for (int s = 0; s < 4000; ++s) {
      double a = 2 * M_PI * s / 4000;
      double qx = std::cos(a), qy = std::sin(a);
      if (std::hypot(qx - px, qy - py) < 0.05 && qy > py + 1e-12) oracle = false;
    }
    CHECK_MESSAGE(member(top, {x, y}) == oracle, to_string(x) << ", " << to_string(y));
  }
  CHECK(member(top, {0, 1}));
  CHECK_FALSE(member(top, {0, -1}));

  Formula seg = parse_formula("vars x, y: (y = 0) and (x > 0) and (x - 1 < 0)");
  Formula none = local_maxima_formula(seg, {1, 0});
  for (int k = 1; k < 10; ++k) CHECK_FALSE(member(none, {Rational(k) / 10, 0}));

  Formula pt = parse_formula("vars x, y: ((x - 2)^2 + (y - 3)^2 = 0)");
  Formula pmax = local_maxima_formula(pt, {5, -7});
  CHECK(member(pmax, {2, 3}));
  CHECK_FALSE(member(pmax, {2, 4}));
  CHECK_THROWS(local_maxima_formula(pt, {1}));
}

TEST_CASE("differentiability locus") {
  struct Case {
    const char* graph;
    std::size_t k;
    std::vector<std::function<double(double)>> fs;
  };
  std::vector<Case> cases{
      {"vars x, y: (y - x^2 = 0)", 1, {[](double x) { return x * x; }}},
      {"vars x, y: ((y > 0) or (y = 0)) and (y^2 - x^2 = 0)", 1, {[](double x) { return std::abs(x); }}},
      {"vars x, a, b: (a - x^2 = 0) and ((b > 0) or (b = 0)) and (b^2 - x^2 = 0)",
       2,
       {[](double x) { return x * x; }, [](double x) { return std::abs(x); }}},
  };
  for (const auto& c : cases) {
    Formula D = diff_locus_formula(parse_formula(c.graph), c.k);
    CHECK(D.dimension() == 1);
    FDPair fd = fd_of_formula(D);
    CHECK(fd.format == variable_count(D));
    for (Rational x : {Rational(-1), Rational(-1, 3), Rational(0), Rational(1, 4), Rational(1)}) {
      bool oracle = true;
      for (const auto& F : c.fs) oracle = oracle && fd_probe(F, x.get_d());
      Verdict v = evaluate(D, {x});
      CHECK_MESSAGE(v.value == oracle, c.graph << " at " << to_string(x));
    }
  }
  CHECK_THROWS(diff_locus_formula(parse_formula("vars x, y: (y = 0)"), 2));
}
