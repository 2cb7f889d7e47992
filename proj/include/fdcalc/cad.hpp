#pragma once

#include "fdcalc/fdpair.hpp"
#include "fdcalc/formula.hpp"
#include "fdcalc/projection.hpp"
#include "fdcalc/realpoint.hpp"

#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdc {

/// Raised when a request exceeds the configured dimension ceiling or another
/// resource limit.
class CeilingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CadOptions {
  std::size_t ceiling = 3;
  /// Restrict to the open unit cube: x_i and x_i - 1 are added to the input
  /// and only cells inside (0,1)^l are kept.
  bool unit_box = false;
  ProjectionKind projection = ProjectionKind::McCallum;
  /// Switch to Collins when the McCallum set is not well oriented.
  bool fallback = true;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Cell {
  /// 1-based position in each fiber: odd entries are sectors, even entries sections.
  std::vector<std::uint32_t> index;
  RealPoint sample;
  std::size_t parent = npos;
  std::size_t child_begin = 0, child_end = 0;
  /// Number of distinct roots in the fiber this cell belongs to.
  std::uint32_t stack_roots = 0;

  std::size_t dimension() const;
  std::size_t level() const { return index.size(); }
};

struct CadStats {
  std::size_t dim = 0;
  std::size_t npolys = 0;
  std::uint32_t max_degree = 0;
  std::size_t ncells = 0;
  double seconds = 0;
  ProjectionKind projection = ProjectionKind::McCallum;
  /// Non-empty when McCallum was abandoned; names the nullified polynomial.
  std::string fallback_reason;
};

class CellDecomposition {
 public:
  std::size_t dim = 0;
  bool unit_box = false;
  std::vector<Poly> inputs;
  std::vector<Formula> provenance;
  ProjectionSet projection;
  /// layers[k] holds the cells of R^{k+1} in lexicographic index order.
  std::vector<std::vector<Cell>> layers;
  /// For compatible decompositions: member[c][s] says whether top cell c lies in set s.
  std::vector<std::vector<bool>> member;
  CadStats stats;

  const std::vector<Cell>& cells() const { return layers.back(); }
  std::size_t size() const { return layers.empty() ? 0 : layers.back().size(); }

  /// Index of the top-layer cell containing a rational point, or npos when
  /// the point is outside the unit box.
  std::size_t locate(const std::vector<Rational>& pt) const;
  /// Same for an arbitrary layer (pt.size() = level).
  std::size_t locate_in(const std::vector<Rational>& pt, std::size_t level) const;
  /// Cell of layer level-1 containing an algebraic point of dimension level.
  std::size_t locate_point(const RealPoint& pt, std::size_t level) const;
  /// A random point of the given top-layer cell, built by walking the index
  /// path. Sector coordinates are random rationals; section coordinates are
  /// algebraic.
  RealPoint random_point(std::size_t cell, std::mt19937_64& rng) const;
  RealPoint random_point_in(std::size_t level, std::size_t cell, std::mt19937_64& rng) const;

  /// Defining formula of a cell of layer level-1 over the given variable names.
  Formula cell_formula(std::size_t level, std::size_t cell, const std::vector<std::string>& names) const;
  Formula cell_formula(std::size_t cell) const;

  /// Polynomials whose product cuts out the fiber over the given cell of layer
  /// level-1 (nullified factors removed).
  std::vector<Poly> fiber_polys(std::size_t level, std::size_t cell) const;
};

/// Default variable names x, y, z (x1..xn beyond three).
std::vector<std::string> default_names(std::size_t n);

/// Sign-invariant cylindrical decomposition of R^dim for the given polynomials.
CellDecomposition cad(const std::vector<Poly>& polys, std::size_t dim, const CadOptions& opts = {});

/// Decomposition of R^l compatible with every input set. Quantified inputs
/// are decomposed in the higher-dimensional space of free plus bound
/// variables and the cells are projected back down.
CellDecomposition compatible_decomposition(const std::vector<Formula>& sets, std::size_t l,
                                           const CadOptions& opts = {});

/// The cylinder P_l(C) for every cell of d: projections for l < dim (shared
/// cells appear once), products with R^{l-dim} for l > dim.
std::vector<Cell> cylinder_cells(const CellDecomposition& d, std::size_t l);

/// FD of the defining formula of a top-layer cell.
FDPair cell_fd(const CellDecomposition& d, std::size_t cell);

}  // namespace fdc
