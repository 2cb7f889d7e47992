#pragma once

#include "fdcalc/cad.hpp"
#include "fdcalc/formula.hpp"

#include <map>
#include <string>

namespace fdc {

/// Chebyshev polynomial T_D in x_var over nvars variables.
Poly chebyshev(unsigned D, std::size_t nvars = 1, std::size_t var = 0);

/// {x : (x-1)(x-2)...(x-D) > 0}.
Formula product_family(unsigned D);
/// The Chebyshev curve moved into the unit square: {2y - 1 = T_D(2x - 1)}.
Formula chebyshev_curve(unsigned D);

struct CellGrowthReport {
  std::map<unsigned, std::size_t> cells;
  /// Max over cells, per degree: sign-condition star FD and root-index FD.
  std::map<unsigned, FDPair> star, naive;
  double exponent = 0, slope = 0;
  bool star_format_constant = false;
  bool naive_format_grows = false;
  std::string table() const;
};

/// star_ccd of each member (one StarRep per member, all components) in the
/// unit box of its own dimension.
CellGrowthReport cell_growth(const std::map<unsigned, Formula>& family, const CadOptions& opts = {});

}  // namespace fdc
