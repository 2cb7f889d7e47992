#pragma once

#include "fdcalc/cad.hpp"
#include "fdcalc/fdpair.hpp"
#include "fdcalc/formula.hpp"
#include "fdcalc/realpoint.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdc {

class EmptyFiberError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Case of a one-dimensional fiber X: A (a = -inf, b = +inf), B (a = -inf,
/// b finite), C (a finite, b = +inf), D (both finite), where a = inf X and
/// b = sup{x : (a, x) contained in X}.
enum class ChoiceCase { A, B, C, D };
char case_letter(ChoiceCase c);

/// Choice of one coordinate. The family is the set of (lambda, x) with x
/// admissible for coordinate k once the earlier coordinates are chosen.
struct ChoiceStep {
  std::size_t coordinate = 0;  // 0-based
  /// Over (lambda, x): earlier coordinates eliminated through their graphs.
  Formula family;
  /// Predicates over lambda: a = -inf, and b = +inf.
  Formula unbounded_below, unbounded_right;
  /// Regions A..D over lambda.
  std::array<Formula, 4> regions;
  /// Graphs of a and b over (lambda, value).
  Formula graph_a, graph_b;
  /// Per region, the section over (lambda, x).
  std::array<Formula, 4> sections;
  /// Graph of the chosen coordinate over (lambda, x).
  Formula graph;
  std::array<FDPair, 4> region_fd, section_fd;
  FDPair fd;
};

struct ChoiceValue {
  std::vector<Rational> lambda;
  /// (lambda, g(lambda)), exact.
  RealPoint point;
  std::vector<ChoiceCase> cases;  // per coordinate
};

struct ChoiceOptions {
  std::size_t ceiling = 3;
  /// Certify nonempty fibers with a decomposition of the parameter space.
  bool strict = false;
  /// Random parameters probed for empty fibers when not strict.
  std::size_t samples = 16;
  std::uint64_t seed = 1;
};

class ChoiceFunction {
 public:
  Formula total;
  std::size_t param_dim = 0, fiber_dim = 0;
  std::vector<ChoiceStep> steps;
  /// Graph of g over (lambda, x_1..x_l).
  Formula graph;
  FDPair fd;
  bool certified_nonempty = false;

  /// Throws EmptyFiberError when a fiber met on the way is empty.
  ChoiceValue evaluate(const std::vector<Rational>& lambda) const;
  /// The case of coordinate k decided from the region predicates (exact
  /// evaluation; throws std::runtime_error when evaluation is only sampled,
  /// which is the rule for k > 0 since those predicates nest earlier graphs).
  ChoiceCase region_of(std::size_t k, const std::vector<Rational>& lambda) const;

  struct StepData;
  std::vector<std::shared_ptr<const StepData>> data;  // evaluation caches
};

/// One-dimensional fibers: total is a set in Lambda x R.
ChoiceFunction choice_1d(const Formula& total, const ChoiceOptions& opts = {});
/// total is a set in Lambda x R^l; the parameters are its first
/// dim - l variables.
ChoiceFunction choice(const Formula& total, std::size_t fiber_dim, const ChoiceOptions& opts = {});

/// Exact text of an algebraic coordinate: a rational, or the defining
/// polynomial with an isolating interval.
std::string exact_coordinate(const RealPoint& p, std::size_t i);

nlohmann::json to_json(const ChoiceFunction& g);
nlohmann::json to_json(const ChoiceValue& v);

struct StarEntry {
  Formula source;  // set in R^{source.dimension()}
  FDPair fd;
  /// Component of the source under the ordering of connected_components;
  /// empty for the empty set.
  std::optional<std::size_t> component;
};

/// A set in R^dim presented as the union of the projections of the selected
/// components.
struct StarRep {
  std::size_t dim = 0;
  std::vector<StarEntry> entries;
};

/// (max F, sum D) over the entries. Throws std::invalid_argument on an
/// empty list or an entry of lower dimension.
FDPair star_fd(const StarRep& r);
StarRep star_union(const StarRep& a, const StarRep& b);
/// One entry per component of X.
StarRep to_star(const Formula& X, const FDPair& fd, const CadOptions& opts = {});
/// Index of the component of X containing a rational point.
std::optional<std::size_t> component_containing(const Formula& X, const std::vector<Rational>& pt,
                                                const CadOptions& opts = {});
/// Membership of a rational point of R^dim in the represented set.
bool star_member(const StarRep& r, const std::vector<Rational>& pt, const CadOptions& opts = {});

struct StarCell {
  std::size_t cell = 0;  // index in layer n-1 of the decomposition
  /// Sign-condition set of a top cell over this cell, with the component
  /// holding that top cell; projected to R^n.
  StarRep rep;
  FDPair star;
  /// FD of the root-index defining formula, for comparison.
  FDPair naive;
  /// in[s]: cell contained in the projection to R^n of input s.
  std::vector<bool> in;
};

struct StarDecomposition {
  std::size_t n = 0;
  /// Decomposition of the padded common source space.
  CellDecomposition decomposition;
  std::vector<StarCell> cells;
  FDPair max_star, max_naive;
  bool certified = true;
};

/// Cylindrical decomposition of (0,1)^n compatible with the represented
/// sets. Sources of lower dimension are padded with trailing free
/// coordinates.
StarDecomposition star_ccd(const std::vector<StarRep>& sets, std::size_t n, const CadOptions& opts = {});

nlohmann::json to_json(const StarRep& r);
/// Reads the format written by to_json; throws std::invalid_argument or
/// ParseError on malformed input.
StarRep star_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StarDecomposition& s);

}  // namespace fdc
