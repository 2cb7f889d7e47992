#pragma once

#include "fdcalc/environment.hpp"
#include "fdcalc/formula.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line(line), column(column) {}
  int line, column;
};

/// Parses one formula, optionally preceded by `vars a, b:`. When `env` is
/// given, references are checked for existence and arity.
Formula parse_formula(std::string_view text, const Environment* env = nullptr);

/// Parses a file: any number of `define name(v, ...) [fd(F, D)] = formula;`
/// statements (registered into env in order) followed by an optional main
/// formula. Returns the main formula if present.
std::optional<Formula> parse_document(std::string_view text, Environment& env);

/// Parses a bare polynomial over the given variable names.
Poly parse_polynomial(std::string_view text, const std::vector<std::string>& names);

std::string to_string(const NodePtr& n);
/// Prints with a `vars ...:` header so the free-variable order round-trips.
std::string to_string(const Formula& f);

}  // namespace fdc
