#include "fdcalc/polyalg.hpp"

#include "fdcalc/upoly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fdc {

namespace {

void pdivide(const Poly& a, const Poly& b, std::size_t var, Poly* q, Poly* r) {
  if (b.is_zero()) throw std::domain_error("pseudo-division by zero");
  std::uint32_t db = b.degree(var);
  std::uint32_t da = a.degree(var);
  auto bc = b.coefficients(var);
  Poly lb = bc.back();
  Poly rem = a;
  Poly quo(a.nvars());
  if (a.is_zero() || da < db) {
    if (q) *q = quo;
    if (r) *r = rem;
    return;
  }
  std::uint32_t k = da - db + 1;
  Exponents e(a.nvars(), 0);
  while (!rem.is_zero() && rem.degree(var) >= db) {
    std::uint32_t dr = rem.degree(var);
    Poly lr = rem.leading_coefficient_in(var);
    e[var] = dr - db;
    Poly shift = Poly::monomial(e, Rational(1));
    quo = quo * lb + lr * shift;
    rem = rem * lb - lr * shift * b;
    --k;
  }
  if (k > 0) {
    Poly s = lb.pow(k);
    quo = quo * s;
    rem = rem * s;
  }
  if (q) *q = quo;
  if (r) *r = rem;
}

}  // namespace

Poly prem(const Poly& a, const Poly& b, std::size_t var) {
  Poly r;
  pdivide(a, b, var, nullptr, &r);
  return r;
}

Poly pquo(const Poly& a, const Poly& b, std::size_t var) {
  Poly q;
  pdivide(a, b, var, &q, nullptr);
  return q;
}

Poly content(const Poly& p, std::size_t var) {
  if (p.is_zero()) return p;
  Poly g(p.nvars());
  for (const auto& c : p.coefficients(var)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.normalized() : gcd(g, c);
    if (g.is_constant()) return Poly::constant(p.nvars(), 1);
  }
  return g;
}

Poly primitive_part(const Poly& p, std::size_t var) {
  if (p.is_zero()) return p;
  return divide_exact(p, content(p, var)).normalized();
}

namespace {

int max_var(const Poly& a, const Poly& b) { return std::max(a.main_variable(), b.main_variable()); }

// p with every variable except `var` replaced by the given values.
UPoly specialize(const Poly& p, std::size_t var, const std::vector<Rational>& vals) {
  std::vector<Rational> c(p.degree(var) + 1);
  Rational t;
  for (const auto& [e, v] : p.terms()) {
    t = v;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == var || e[i] == 0) continue;
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), vals[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), vals[i].get_den_mpz_t(), e[i]);
      t *= pw;
    }
    c[e[var]] += t;
  }
  return UPoly(std::move(c));
}

// Small evaluation points, varied by variable and attempt.
std::vector<Rational> probe_values(std::size_t n, std::size_t attempt) {
  static const int primes[] = {3, -5, 7, -11, 13, -17, 19, -23, 29, -31, 37, -41};
  std::vector<Rational> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = primes[(i * 5 + attempt * 7) % 12] + static_cast<int>(attempt);
  return v;
}

// Specializations of p and q in var with both leading coefficients nonzero.
bool good_specialization(const Poly& p, const Poly* q, std::size_t var, std::size_t attempt, UPoly& up, UPoly& uq) {
  auto vals = probe_values(p.nvars(), attempt);
  up = specialize(p, var, vals);
  if (up.degree() != static_cast<int>(p.degree(var))) return false;
  if (q) {
    uq = specialize(*q, var, vals);
    if (uq.degree() != static_cast<int>(q->degree(var))) return false;
  }
  return true;
}

// A certificate (never a false positive) that a and b share no
// non-constant factor: every common factor would involve some variable v
// and survive as a common root of a specialization in v.
bool certainly_coprime(const Poly& a, const Poly& b) {
  for (std::size_t v = 0; v < a.nvars(); ++v) {
    if (!a.involves(v) || !b.involves(v)) continue;
    bool ok = false;
    for (std::size_t attempt = 0; attempt < 3 && !ok; ++attempt) {
      UPoly ua, ub;
      if (!good_specialization(a, &b, v, attempt, ua, ub)) continue;
      ok = gcd(ua, ub).degree() == 0;
    }
    if (!ok) return false;
  }
  return true;
}

// True when p, primitive in var, certainly has no repeated factor.
bool certainly_squarefree(const Poly& p, std::size_t var) {
  for (std::size_t attempt = 0; attempt < 3; ++attempt) {
    UPoly u, unused;
    if (!good_specialization(p, nullptr, var, attempt, u, unused)) continue;
    if (gcd(u, u.derivative()).degree() == 0) return true;
  }
  return false;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  std::size_t n = a.nvars();
  int v = max_var(a, b);
  if (v < 0) return Poly::constant(n, 1);
  auto var = static_cast<std::size_t>(v);
  if (a.size() * b.size() > 4 && certainly_coprime(a, b)) return Poly::constant(n, 1);
  if (!a.involves(var)) return gcd(a, content(b, var));
  if (!b.involves(var)) return gcd(content(a, var), b);
  Poly ca = content(a, var), cb = content(b, var);
  Poly g = gcd(ca, cb);
  Poly x = divide_exact(a, ca), y = divide_exact(b, cb);
  if (x.degree(var) < y.degree(var)) std::swap(x, y);
  while (true) {
    Poly r = prem(x, y, var);
    if (r.is_zero()) break;
    if (!r.involves(var)) {
      y = Poly::constant(n, 1);
      break;
    }
    x = std::move(y);
    y = primitive_part(r, var);
  }
  return (g * primitive_part(y, var)).normalized();
}

Poly squarefree_part(const Poly& p) {
  if (p.is_zero()) return p;
  int v = p.main_variable();
  if (v < 0) return Poly::constant(p.nvars(), 1);
  auto var = static_cast<std::size_t>(v);
  Poly c = content(p, var);
  Poly pp = divide_exact(p, c);
  if (certainly_squarefree(pp, var)) return (squarefree_part(c) * pp).normalized();
  Poly g = gcd(pp, pp.derivative(var));
  Poly sq = divide_exact(pp, g);
  return (squarefree_part(c) * sq).normalized();
}

std::vector<Poly> coprime_basis(const std::vector<Poly>& polys) {
  std::vector<Poly> basis;
  std::vector<Poly> work;
  for (const auto& p : polys)
    if (!p.is_constant()) work.push_back(squarefree_part(p));
  while (!work.empty()) {
    Poly q = work.back();
    work.pop_back();
    if (q.is_constant()) continue;
    bool absorbed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Poly g = gcd(q, basis[i]);
      if (g.is_constant()) continue;
      Poly b = basis[i];
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
      work.push_back(g);
      Poly bq = divide_exact(b, g);
      Poly qq = divide_exact(q, g);
      if (!bq.is_constant()) work.push_back(bq.normalized());
      if (!qq.is_constant()) work.push_back(qq.normalized());
      absorbed = true;
      break;
    }
    if (!absorbed) basis.push_back(q.normalized());
  }
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  return basis;
}

Poly determinant(std::vector<std::vector<Poly>> m) {
  std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("determinant of empty matrix");
  std::size_t nv = m[0][0].nvars();
  Poly prev = Poly::constant(nv, 1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) return Poly(nv);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = divide_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  Poly d = m[n - 1][n - 1];
  return sign > 0 ? d : -d;
}

Poly psc(const Poly& f, const Poly& g, std::size_t var, std::size_t j) {
  std::size_t m = f.degree(var), n = g.degree(var);
  std::size_t nv = f.nvars();
  if (j > std::min(m, n)) throw std::invalid_argument("psc index out of range");
  if (j == std::min(m, n)) {
    // Degenerate square case: the leading coefficient power.
    if (m == n) return Poly::constant(nv, 1);
    const Poly& lo = m < n ? f : g;
    std::size_t d = m < n ? n - m : m - n;
    return lo.leading_coefficient_in(var).pow(static_cast<unsigned>(d));
  }
  std::size_t size = m + n - 2 * j;
  auto fc = f.coefficients(var), gc = g.coefficients(var);
  std::vector<std::vector<Poly>> mat(size, std::vector<Poly>(size, Poly(nv)));
  // Columns correspond to powers m+n-j-1 down to j.
  std::size_t top = m + n - j - 1;
  std::size_t row = 0;
  for (std::size_t s = n - j; s-- > 0; ++row)
    for (std::size_t i = 0; i <= m; ++i) {
      std::size_t pw = i + s;
      if (pw >= j && pw <= top) mat[row][top - pw] = fc[i];
    }
  for (std::size_t s = m - j; s-- > 0; ++row)
    for (std::size_t i = 0; i <= n; ++i) {
      std::size_t pw = i + s;
      if (pw >= j && pw <= top) mat[row][top - pw] = gc[i];
    }
  return determinant(std::move(mat));
}

Poly resultant(const Poly& f, const Poly& g, std::size_t var) {
  std::size_t m = f.degree(var), n = g.degree(var);
  if (m == 0 && n == 0) return Poly::constant(f.nvars(), 1);
  if (m == 0) return f.pow(static_cast<unsigned>(n));
  if (n == 0) return g.pow(static_cast<unsigned>(m));
  return psc(f, g, var, 0);
}

Poly discriminant(const Poly& f, std::size_t var) {
  if (f.degree(var) < 2) return Poly::constant(f.nvars(), 1);
  Poly r = resultant(f, f.derivative(var), var);
  return divide_exact(r, f.leading_coefficient_in(var));
}

Poly reductum(const Poly& p, std::size_t var) {
  if (p.is_zero()) return p;
  auto c = p.coefficients(var);
  c.pop_back();
  if (c.empty()) return Poly(p.nvars());
  return Poly::from_coefficients(c, var);
}

}  // namespace fdc
