#include "fdcalc/families.hpp"

#include "fdcalc/choice.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/topology.hpp"

#include <sstream>

namespace fdc {

Poly chebyshev(unsigned D, std::size_t nvars, std::size_t var) {
  Poly x = Poly::variable(nvars, var);
  Poly a = Poly::constant(nvars, Rational(1)), b = x;
  if (D == 0) return a;
  for (unsigned k = 1; k < D; ++k) {
    Poly c = x * b + x * b - a;
    a = b;
    b = c;
  }
  return b;
}

Formula product_family(unsigned D) {
  Poly p = Poly::constant(1, Rational(1));
  for (unsigned i = 1; i <= D; ++i) p = p * (Poly::variable(1, 0) - Poly::constant(1, Rational(i)));
  std::vector<std::string> names{"x"};
  return {names, f::atom(p, names, Rel::Gt)};
}

Formula chebyshev_curve(unsigned D) {
  Poly t = chebyshev(D, 2, 0);
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1), one = Poly::constant(2, Rational(1));
  t = t.compose(0, x + x - one);
  std::vector<std::string> names{"x", "y"};
  return {names, f::atom(y + y - one - t, names, Rel::Eq)};
}

CellGrowthReport cell_growth(const std::map<unsigned, Formula>& family, const CadOptions& opts) {
  if (family.empty()) throw std::invalid_argument("cell_growth: empty family");
  CellGrowthReport r;
  for (const auto& [D, X] : family) {
    auto sd = star_ccd({to_star(X, fd_of_formula(X), opts)}, X.dimension(), opts);
    r.cells[D] = sd.cells.size();
    r.star[D] = sd.max_star;
    r.naive[D] = sd.max_naive;
  }
  r.exponent = envelope_exponent(r.cells);
  r.slope = loglog_slope(r.cells);
  r.star_format_constant = true;
  for (const auto& [D, fd] : r.star) r.star_format_constant &= fd.format == r.star.begin()->second.format;
  r.naive_format_grows = r.naive.rbegin()->second.format > r.naive.begin()->second.format;
  return r;
}

std::string CellGrowthReport::table() const {
  std::ostringstream os;
  os << "D  cells  star_fd  naive_fd\n";
  for (const auto& [D, n] : cells)
    os << D << "  " << n << "  " << star.at(D).to_string() << "  " << naive.at(D).to_string() << "\n";
  os << "exponent " << exponent << " (least squares " << slope << ")\n";
  os << "star format " << (star_format_constant ? "constant" : "varies") << "; root-index format "
     << (naive_format_grows ? "grows" : "does not grow") << " with D\n";
  return os.str();
}

}  // namespace fdc
