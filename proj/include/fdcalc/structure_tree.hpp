#pragma once

#include "fdcalc/axioms.hpp"
#include "fdcalc/cad.hpp"
#include "fdcalc/environment.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fdc {

/// A vertex: a leaf names a set registered in an Environment, an inner
/// vertex applies one operation to its ordered children.
struct TreeNode {
  std::optional<Op> op;
  std::string set;  // leaves only
  std::vector<TreeNode> children;

  static TreeNode leaf(std::string set);
  static TreeNode node(Op op, std::vector<TreeNode> children);
};

struct StructureTree {
  TreeNode root;
  /// Allows R x T vertices (times_R_left).
  bool slanted = false;
};

struct TreeViolation {
  std::string vertex;  // path from the root: "r", "r.0", "r.0.2", ...
  std::string message;
};

/// Empty when the tree is valid.
std::vector<TreeViolation> validate_tree(const StructureTree& t, const Environment& env);
/// Ambient dimension of the root set; throws std::invalid_argument on an invalid tree.
std::size_t tree_dim(const StructureTree& t, const Environment& env);

/// Format recursion where only products with R add one; degree is the sum
/// over leaves. Leaf FDs come from the environment.
FDPair omega_fd(const StructureTree& t, const Environment& env);
/// The FD bound of the set presented by the tree in the tree filtration.
FDPair omega_prime_fd(const StructureTree& t, const Environment& env);

/// Formula for the root set over `names` (default x, y, z, ...). Leaf bodies
/// are inlined; projection is an existential on the last variable and the
/// new product coordinate stays unconstrained.
Formula tree_to_formula(const StructureTree& t, const Environment& env, std::vector<std::string> names = {});
/// Formula for the set at a vertex path ("r.1.0").
Formula vertex_formula(const StructureTree& t, const Environment& env, const std::string& vertex);

/// Tree for R x T_r: every leaf is wrapped in a times_R_left vertex. The
/// result is slanted and has Omega-format one higher.
StructureTree lift_times_R(const StructureTree& t, const Environment& env);

struct CompatibilityReport {
  std::size_t leaf_dim = 0;  // dimension of the decomposition (max leaf dimension)
  std::size_t vertices = 0;
  std::size_t cells_checked = 0;
  std::vector<std::string> failures;  // "vertex r.0, cell 7: ..."
  bool ok() const { return failures.empty(); }
};

/// Decomposes R^m compatibly with the leaf sets (m the largest leaf
/// dimension, leaves padded by products with R) and checks that the
/// cylinder cells P_l(C) of every vertex set in R^l are each inside or
/// disjoint from it, at the cell sample plus `samples` random points.
CompatibilityReport check_tree_compatibility(const StructureTree& t, const Environment& env, std::size_t samples,
                                             std::uint64_t seed, const CadOptions& opts = {});

nlohmann::json to_json(const StructureTree& t);
/// Reads a tree; an optional "sets" object ({name: {"formula": text, "fd":
/// [F, D]}}) is registered into env first.
StructureTree tree_from_json(const nlohmann::json& j, Environment& env);

}  // namespace fdc
