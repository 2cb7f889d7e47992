#pragma once

#include "fdcalc/fdpair.hpp"
#include "fdcalc/formula.hpp"

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

namespace fdc {

struct NamedSet {
  std::string name;
  Formula formula;            // free_vars are the parameters
  std::optional<FDPair> fd;   // declared annotation, if any
};

/// Append-only registry of named sets. Registration is atomic; lookups may run
/// concurrently with registration.
class Environment {
 public:
  /// Registers a set; throws std::invalid_argument if the name is taken or
  /// the formula references an unknown set.
  void define(const std::string& name, const Formula& formula, std::optional<FDPair> fd = std::nullopt);
  std::shared_ptr<const NamedSet> find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

  /// The FD used for references to `name`: the declared annotation, or else
  /// the FD of its formula.
  FDPair fd_of(const std::string& name) const;

  /// Inlines every reference, renaming bound variables of the inlined bodies
  /// apart from everything in `taken` (which is extended).
  NodePtr expand(const NodePtr& n, std::vector<std::string>& taken) const;
  Formula expand(const Formula& f) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const NamedSet>> sets_;
};

}  // namespace fdc
