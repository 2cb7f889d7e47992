#pragma once

#include "fdcalc/cad.hpp"
#include "fdcalc/fdpair.hpp"
#include "fdcalc/formula.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdc {

/// Closure and adjacency of the top-layer cells of a decomposition.
struct AdjacencyGraph {
  std::size_t dim = 0;
  /// closure[c]: cells other than c contained in the closure of c.
  std::vector<std::vector<std::size_t>> closure;
  /// neighbours[c]: cells whose closure meets c or whose closure c meets (sorted).
  std::vector<std::vector<std::size_t>> neighbours;
  /// bounded[c]: the cell lies in a bounded box.
  std::vector<bool> bounded;
  /// False in R^3, where limits are read off approach points rather than decided.
  bool certified = true;

  std::size_t size() const { return neighbours.size(); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool adjacent(std::size_t a, std::size_t b) const;
};

/// Exact in R^1 and R^2; approach-point heuristic in R^3. Throws
/// CeilingError beyond R^3.
AdjacencyGraph adjacency(const CellDecomposition& d);

struct Component {
  std::vector<std::size_t> cells;
  Formula formula;  // union of the cell formulas
  FDPair fd;
};

struct ComponentResult {
  CellDecomposition decomposition;
  AdjacencyGraph graph;
  std::vector<bool> inside;  // per top cell
  std::vector<Component> components;
  bool certified = true;
};

/// Connected components of the set, as groups of cells of a decomposition
/// adapted to it. Components are ordered by their first cell.
ComponentResult connected_components(const Formula& X, const CadOptions& opts = {});

/// Least exponent e with counts(D) <= counts(D0) (D/D0)^e over the family,
/// where D0 is the smallest degree (counts below 1 are read as 1).
double envelope_exponent(const std::map<unsigned, std::size_t>& counts);
/// Least-squares slope of log count against log D.
double loglog_slope(const std::map<unsigned, std::size_t>& counts);

struct MaximaWitness {
  unsigned degree = 0;              // family member examined
  std::vector<Rational> functional;  // f(x) = sum c_i x_i
  /// No full-dimensional cell sample is a local maximum of f on X.
  bool lower_dimensional = true;
  /// Per component: the cell where the sampled maximum of f over the
  /// component's closure sits, and whether that cell is in the component.
  std::vector<std::size_t> argmax_cell;
  std::vector<bool> meets;
};

struct ComponentBoundReport {
  std::map<unsigned, std::size_t> counts;
  double exponent = 0;  // envelope exponent
  double slope = 0;     // least-squares, for information
  Rational cap;
  bool passes = false;
  std::optional<MaximaWitness> witness;
  std::string table() const;
};

/// Components per degree, fitted exponent against the cap, and a
/// local-maxima witness on the largest member.
ComponentBoundReport check_component_bound(const std::map<unsigned, Formula>& family, const Rational& cap,
                                           const CadOptions& opts = {}, std::uint64_t seed = 1);

struct Stratum {
  std::size_t dim = 0;
  std::vector<std::size_t> cells;
  Formula formula;
  FDPair fd;
};

struct Stratification {
  CellDecomposition decomposition;
  std::vector<bool> inside;
  /// Non-empty groups, highest dimension first.
  std::vector<Stratum> strata;
};

Stratification stratify(const Formula& X, const CadOptions& opts = {});

/// Finite-difference probe: at `samples` points of the cell, second
/// differences of its defining root function agree at steps h and h/2.
/// Cells that are open, vertical or points pass trivially.
bool smoothness_probe(const CellDecomposition& d, std::size_t cell, std::size_t samples, std::uint64_t seed);

struct SimplicialComplex {
  std::size_t ambient = 0;
  std::vector<std::vector<Rational>> vertices;
  /// Sorted vertex tuples of size 1..3; closed under faces.
  std::vector<std::vector<std::size_t>> simplices;
  /// labels[s]: input sets (0 = X, i = subset i) containing the image of simplex s.
  std::vector<std::vector<std::size_t>> labels;

  std::size_t count(std::size_t dim) const;
  /// Empty when valid; otherwise the first problem found.
  std::string validate() const;
};

/// Image of one decomposition cell under the triangulation map.
struct CellImage {
  std::size_t cell = 0;
  std::string kind;  // "point", "segment", "graph", "band"
  std::vector<std::size_t> simplices;
  /// For graphs: the fiber polynomial and the root position (1-based).
  std::optional<Poly> section_poly;
  std::uint32_t root_index = 0;
};

struct Triangulation {
  SimplicialComplex complex;
  CellDecomposition decomposition;
  /// Exact image of each vertex.
  std::vector<RealPoint> vertex_images;
  std::vector<CellImage> cells;
};

/// Triangulation of a closed bounded set in R^1 or R^2, compatible with the
/// subsets. Throws std::invalid_argument when X is not closed or not bounded.
Triangulation triangulate(const Formula& X, const std::vector<Formula>& subsets = {}, const CadOptions& opts = {});

/// Ranks of rational simplicial homology (b0, b1, b2).
std::vector<std::size_t> betti(const SimplicialComplex& K);

std::string to_off(const SimplicialComplex& K);
nlohmann::json to_json(const SimplicialComplex& K);
SimplicialComplex complex_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ComponentResult& r);
nlohmann::json to_json(const Stratification& s);

}  // namespace fdc
