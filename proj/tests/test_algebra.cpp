#include <doctest.h>

#include "fdcalc/polyalg.hpp"
#include "fdcalc/realpoint.hpp"
#include "fdcalc/upoly.hpp"

#include <random>

using namespace fdc;

namespace {

Poly X(std::size_t n, std::size_t i) { return Poly::variable(n, i); }
Poly C(std::size_t n, const Rational& c) { return Poly::constant(n, c); }

// Naive sign-change counting on a fine grid; only used with well-separated roots.
int grid_sign_changes(const UPoly& p, int lo, int hi, int steps) {
  int changes = 0, last = 0;
  for (int i = 0; i <= steps; ++i) {
    Rational x = Rational(lo) + Rational(hi - lo) * Rational(i, steps);
    int s = p.sign_at(x);
    if (s == 0) continue;
    if (last && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

TEST_CASE("rational helpers") {
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(simplest_between(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
  CHECK(simplest_between(Rational(-3), Rational(5)) == 0);
  CHECK(simplest_between(std::nullopt, Rational(-7, 2)) == -4);
  CHECK(simplest_between(Rational(2), std::nullopt) == 3);
  CHECK(to_decimal(Rational(-1, 3), 3) == "-0.333");
  CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("poly arithmetic and division") {
  Poly x = X(2, 0), y = X(2, 1);
  Poly p = (x + y) * (x - y);
  CHECK(p == x * x - y * y);
  CHECK(divide_exact(p, x + y) == x - y);
  Poly q;
  CHECK_FALSE(try_divide(p, x + C(2, 1), q));
  CHECK(p.total_degree() == 2);
  CHECK(p.substitute(1, 2) == x * x - C(2, 4));
}

TEST_CASE("multivariate gcd and squarefree part") {
  Poly x = X(3, 0), y = X(3, 1), z = X(3, 2);
  Poly a = (x * y - z) * (x + y * y) * (z + C(3, 1));
  Poly b = (x * y - z) * (z + C(3, 1)) * (x - C(3, 2));
  CHECK(gcd(a, b) == ((x * y - z) * (z + C(3, 1))).normalized());
  Poly s = (x - y).pow(3) * (x + y);
  CHECK(squarefree_part(s) == ((x - y) * (x + y)).normalized());
  auto basis = coprime_basis({(x - y) * (x + y), (x - y) * z});
  CHECK(basis.size() == 3);
}

TEST_CASE("resultants and discriminants") {
  Poly x = X(2, 0), y = X(2, 1);
  Poly circle = x * x + y * y - C(2, 1);
  // Discriminant in y of y^2 + (x^2 - 1) is -4(x^2 - 1).
  Poly d = discriminant(circle, 1);
  CHECK(d.normalized() == (C(2, 1) - x * x).normalized() * Rational(-1) * Rational(-1));
  CHECK(abs(d.substitute(0, 0).constant_value()) == 4);
  Poly r = resultant(y * y - x, y * y + x, 1);
  CHECK(r.normalized() == (x * x).normalized());
  // Resultant vanishes exactly when there is a common root.
  Poly f = y - x, g = y * y - C(2, 4);
  Poly rfg = resultant(f, g, 1);
  CHECK(rfg.substitute(0, 2).is_zero());
  CHECK_FALSE(rfg.substitute(0, 1).is_zero());
}

TEST_CASE("psc matches resultant at j = 0") {
  Poly x = X(2, 0), y = X(2, 1);
  Poly f = y * y * y - x * y + C(2, 1);
  Poly g = y * y - x;
  CHECK(psc(f, g, 1, 0) == resultant(f, g, 1));
  // Here f = y*g + 1, so the remainder sequence drops straight to a constant and psc_1 = 0.
  CHECK(psc(f, g, 1, 1).is_zero());
  // With a common linear factor, psc_0 vanishes and psc_1 does not.
  Poly a = (y - C(2, 1)) * (y - C(2, 2)) * (y - x), b = (y - C(2, 1)) * (y + x);
  CHECK(psc(a, b, 1, 0).is_zero());
  CHECK_FALSE(psc(a, b, 1, 1).is_zero());
}

TEST_CASE("root isolation") {
  UPoly p({-2, 0, 1});
  auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].hi <= roots[1].lo);
  roots[1].refine_to(Rational(1, 1000));
  CHECK(to_decimal(roots[1].midpoint(), 2) == "1.41");
  CHECK(isolate_real_roots(UPoly({1, 0, 1})).empty());
  UPoly q = UPoly({-1, 1}) * UPoly({-1, 1}) * UPoly({3, 1});
  auto rq = isolate_real_roots(q);
  REQUIRE(rq.size() == 2);
  CHECK(rq[0].exact());
  CHECK(rq[0].lo == -3);
  CHECK(rq[1].lo == 1);
  CHECK_THROWS(isolate_real_roots(UPoly()));
}

TEST_CASE("root isolation agrees with a grid sign-change oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> root(-20, 20);
  for (int trial = 0; trial < 30; ++trial) {
    UPoly p({1});
    std::vector<int> rs;
    for (int i = 0; i < 4; ++i) {
      int r = root(rng);
      rs.push_back(r);
      p = p * UPoly({Rational(-r) / 3, 1});
    }
    p = p * UPoly({1, 0, 1});
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    auto iv = isolate_real_roots(p);
    REQUIRE(iv.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(iv[i].exact());
      CHECK(iv[i].lo == Rational(rs[i]) / 3);
    }
    CHECK(grid_sign_changes(squarefree_part(p), -8, 8, 16 * 6 * 7) == static_cast<int>(rs.size()));
  }
}

TEST_CASE("algebraic points: signs and fibers") {
  // Base point x = sqrt(2).
  Poly x = X(2, 0), y = X(2, 1);
  Fiber f0(RealPoint(), {X(1, 0) * X(1, 0) - C(1, 2)});
  REQUIRE(f0.size() == 2);
  const RealPoint& s2 = f0.root(1);
  CHECK_FALSE(s2.is_rational(0));
  CHECK(s2.sign(X(1, 0) * X(1, 0) - C(1, 2)) == 0);
  CHECK(s2.sign(X(1, 0) - C(1, Rational(141, 100))) == 1);
  CHECK(s2.sign(X(1, 0) - C(1, Rational(142, 100))) == -1);
  // Fiber of y^2 - 2 and y - x over sqrt(2): roots -sqrt2 and sqrt2 (shared).
  Fiber f1(s2, {y * y - C(2, 2), y - x});
  REQUIRE(f1.size() == 2);
  CHECK(f1.root(1).sign(y - x) == 0);
  CHECK(f1.root(0).sign(y + x) == 0);
  CHECK(f1.root(0).sign(y - x) == -1);
  // Fiber of x*y - 2 over sqrt(2): y = sqrt(2).
  Fiber f2(s2, {x * y - C(2, 2)});
  REQUIRE(f2.size() == 1);
  CHECK(f2.root(0).sign(y * y - C(2, 2)) == 0);
  // Nullification: (x^2 - 2) y vanishes identically over sqrt(2).
  Fiber f3(s2, {(x * x - C(2, 2)) * y});
  CHECK(f3.nullified());
  CHECK(f3.size() == 0);
  // Gap points separate the roots.
  Rational g = f1.gap_point(1);
  CHECK(g == 0);
  CHECK(f1.locate(Rational(0)) == 3);
  CHECK(f1.locate(Rational(2)) == 5);
}

TEST_CASE("nested tower with splitting") {
  // x0 = root of (x^2-2)(x^2-3) near 1.5 is sqrt 2... choose interval containing sqrt(3).
  Fiber f0(RealPoint(), {(X(1, 0) * X(1, 0) - C(1, 2)) * (X(1, 0) * X(1, 0) - C(1, 3))});
  REQUIRE(f0.size() == 4);
  const RealPoint& r3 = f0.root(3);  // sqrt 3
  Poly x = X(3, 0), y = X(3, 1), z = X(3, 2);
  CHECK(r3.sign(x * x - C(3, 3)) == 0);
  CHECK(r3.sign(x * x - C(3, 2)) == 1);
  Fiber f1(r3, {y * y - x * x - C(3, 1)});  // y = +-2
  REQUIRE(f1.size() == 2);
  CHECK(f1.root(1).sign(y - C(3, 2)) == 0);
  Fiber f2(f1.root(1), {z * z - x * y});  // z = +-sqrt(2 sqrt 3)
  REQUIRE(f2.size() == 2);
  const RealPoint& top = f2.root(1);
  CHECK(top.sign(z * z * z * z - C(3, 12)) == 0);
  CHECK(top.sign(z - C(3, Rational(186, 100))) == 1);
  CHECK(top.sign(z - C(3, Rational(187, 100))) == -1);
}
