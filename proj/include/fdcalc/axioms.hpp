#pragma once

#include "fdcalc/fdpair.hpp"
#include "fdcalc/rational.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdc {

enum class Variant { P, W, Sharp };
enum class Op { Union, Intersection, Projection, Complement, TimesRRight, TimesRLeft };

std::string to_string(Variant v);
std::string to_string(Op op);
Variant parse_variant(const std::string& s);
Op parse_op(const std::string& s);
bool is_boolean(Op op);

/// FD transfer for one operation: the output format is the input format
/// (max over inputs for boolean operations) plus `format_bump`; the output
/// degree is the input degree (sum for boolean operations).
struct Rule {
  unsigned format_bump = 0;
  /// Boolean operations only: any number of inputs instead of exactly two.
  bool nary = false;
};

struct AxiomSystem {
  Variant variant = Variant::P;
  std::array<Rule, 6> rules{};

  static AxiomSystem of(Variant v);
  const Rule& rule(Op op) const { return rules[static_cast<std::size_t>(op)]; }
};

/// Throws std::invalid_argument on an arity violation.
FDPair apply_rule(const AxiomSystem& sys, Op op, const std::vector<FDPair>& inputs);

/// Leaves carry a generator with its FD and ambient dimension; inner nodes
/// apply one operation. A derivation is evaluated under a single system.
struct Derivation {
  std::optional<Op> op;  // empty for a leaf
  FDPair fd;             // leaves only
  std::size_t dim = 0;   // leaves only
  std::string label;
  std::vector<Derivation> children;

  static Derivation leaf(FDPair fd, std::size_t dim, std::string label = {});
  static Derivation node(Op op, std::vector<Derivation> children);
};

/// Ambient dimension of the set the derivation describes; throws on
/// mismatched boolean operands, projection from R^0 or a leaf whose format
/// is below its dimension.
std::size_t derivation_dim(const Derivation& d);
FDPair derive_fd(const Derivation& d, const AxiomSystem& sys);

nlohmann::json to_json(const Derivation& d);
Derivation derivation_from_json(const nlohmann::json& j);

/// a(F) and the per-format polynomials P_F (coefficients from the constant
/// term up) of a reduction between filtrations.
struct ReductionWitness {
  std::map<unsigned, unsigned> a;
  std::map<unsigned, std::vector<Rational>> P;

  /// a(F) = F and P_F(D) = D for F up to max_format.
  static ReductionWitness identity(unsigned max_format);
  /// Throws std::out_of_range when F is not covered.
  unsigned format_map(unsigned F) const;
  Rational degree_bound(unsigned F, unsigned D) const;
  /// Throws std::invalid_argument unless every P_F has nonnegative
  /// coefficients and a positive leading one.
  void validate() const;
};

nlohmann::json to_json(const ReductionWitness& w);
ReductionWitness witness_from_json(const nlohmann::json& j);

struct ReductionEntry {
  std::string name;
  FDPair source;
  Derivation target;
};

struct ReductionRow {
  std::string name;
  FDPair source, target;
  unsigned format_bound = 0;
  Rational degree_bound;
  bool ok = false;
};

struct ReductionReport {
  std::vector<ReductionRow> rows;
  std::vector<std::string> violations;
  // Exercised source range.
  FDPair min_source, max_source;

  bool passes() const { return violations.empty(); }
  std::string table() const;
};

nlohmann::json to_json(const ReductionReport& r);

/// Checks target FD <= (a(F), P_F(D)) for every corpus entry, with the
/// target FD computed by `target_fd`.
ReductionReport check_reduction(const std::vector<ReductionEntry>& corpus, const ReductionWitness& w,
                                const std::function<FDPair(const ReductionEntry&)>& target_fd);
/// Same, deriving target FDs under the given system.
ReductionReport check_reduction(const std::vector<ReductionEntry>& corpus, const ReductionWitness& w,
                                const AxiomSystem& target);

/// C composed with itself F times, applied to F. Throws std::invalid_argument
/// if C decreases or falls below the identity on a probed value.
std::uint64_t normalize_bound(std::uint64_t F, const std::function<std::uint64_t(std::uint64_t)>& C);

}  // namespace fdc
