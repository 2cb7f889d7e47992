#include "fdcalc/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace fdc {

namespace {

enum class Tok { Ident, Number, Sym, Keyword, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const std::set<std::string> kKeywords = {"and", "or", "not", "exists", "forall", "vars", "define", "fd"};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::Sym, "", line, col};
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.text = std::string(s.substr(i, j - i));
      t.kind = kKeywords.count(t.text) ? Tok::Keyword : Tok::Ident;
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::string("+-*^/(),.:;=<>@").find(static_cast<char>(c)) != std::string::npos) {
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Failure {};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string> names, const Environment* env)
      : t_(std::move(toks)), names_(std::move(names)), env_(env) {}

  std::size_t pos = 0;

  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos + k, t_.size() - 1)]; }
  bool at_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool at_kw(const char* s) const { return peek().kind == Tok::Keyword && peek().text == s; }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& msg) {
    if (pos >= best_pos_ || best_msg_.empty()) {
      if (pos > best_pos_ || best_msg_.empty()) best_msg_ = msg;
      best_pos_ = pos;
    }
    throw Failure{};
  }

  ParseError error() const {
    const Token& tk = t_[std::min(best_pos_, t_.size() - 1)];
    std::string near = tk.kind == Tok::End ? "end of input" : "'" + tk.text + "'";
    return ParseError(best_msg_ + " near " + near, tk.line, tk.col);
  }

  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(std::string("expected '") + s + "'");
    ++pos;
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return t_[pos++].text;
  }

  std::size_t var_index(const std::string& name) const {
    return static_cast<std::size_t>(std::find(names_.begin(), names_.end(), name) - names_.begin());
  }

  NodePtr formula() {
    NodePtr first = unary();
    const char* op = at_kw("and") ? "and" : at_kw("or") ? "or" : nullptr;
    if (!op) return first;
    std::vector<NodePtr> items{first};
    while (at_kw(op)) {
      ++pos;
      items.push_back(unary());
    }
    if (at_kw("and") || at_kw("or")) fail("mixing 'and' and 'or' requires parentheses");
    return std::string(op) == "and" ? f::conj(std::move(items)) : f::disj(std::move(items));
  }

  NodePtr unary() {
    if (at_kw("not")) {
      ++pos;
      return f::neg(unary());
    }
    if (at_kw("exists") || at_kw("forall")) {
      bool ex = peek().text == "exists";
      ++pos;
      std::string v = ident();
      expect_sym(".");
      NodePtr body = unary();
      return ex ? f::exists(v, body) : f::forall(v, body);
    }
    if (at_sym("@")) return reference();
    if (at_sym("(")) {
      std::size_t save = pos;
      try {
        ++pos;
        NodePtr inner = formula();
        expect_sym(")");
        // A parenthesized polynomial continues with an operator.
        if (peek().kind == Tok::Sym && std::string("+-*^/=<>").find(peek().text) != std::string::npos)
          fail("expected connective");
        return inner;
      } catch (const Failure&) {
        pos = save;
      }
    }
    return atom();
  }

  NodePtr reference() {
    expect_sym("@");
    std::string name = ident();
    expect_sym("(");
    std::vector<std::string> args;
    if (!at_sym(")")) {
      args.push_back(ident());
      while (at_sym(",")) {
        ++pos;
        args.push_back(ident());
      }
    }
    expect_sym(")");
    if (env_) {
      auto set = env_->find(name);
      if (!set) fail("unknown set '" + name + "'");
      if (set->formula.free_vars.size() != args.size())
        fail("arity mismatch for '" + name + "': expected " + std::to_string(set->formula.free_vars.size()) +
             " arguments, got " + std::to_string(args.size()));
    }
    return f::ref(name, std::move(args));
  }

  NodePtr atom() {
    Poly lhs = poly();
    Rel rel;
    if (at_sym("="))
      rel = Rel::Eq;
    else if (at_sym(">"))
      rel = Rel::Gt;
    else if (at_sym("<"))
      rel = Rel::Lt;
    else
      fail("expected '=', '>', '<', '>=' or '<='");
    ++pos;
    bool or_equal = rel != Rel::Eq && at_sym("=");
    if (or_equal) ++pos;
    Poly rhs = poly();
    if (or_equal) return f::disj({f::atom(lhs - rhs, names_, rel), f::atom(lhs - rhs, names_, Rel::Eq)});
    return f::atom(lhs - rhs, names_, rel);
  }

  Poly poly() {
    Poly p = term();
    while (at_sym("+") || at_sym("-")) {
      bool minus = peek().text == "-";
      ++pos;
      Poly q = term();
      if (minus)
        p -= q;
      else
        p += q;
    }
    return p;
  }

  Poly term() {
    bool neg = false;
    while (at_sym("-") || at_sym("+")) {
      if (peek().text == "-") neg = !neg;
      ++pos;
    }
    Poly p = power();
    while (at_sym("*")) {
      ++pos;
      p *= power();
    }
    return neg ? -p : p;
  }

  Poly power() {
    Poly b = primary();
    if (at_sym("^")) {
      ++pos;
      if (peek().kind != Tok::Number) fail("expected integer exponent");
      unsigned long e = std::stoul(t_[pos++].text);
      if (e > 1000) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  Poly primary() {
    std::size_t n = names_.size();
    if (peek().kind == Tok::Number) {
      Integer num(t_[pos++].text);
      Rational v(num);
      if (at_sym("/") && peek(1).kind == Tok::Number) {
        ++pos;
        Integer den(t_[pos++].text);
        if (den == 0) fail("zero denominator");
        v = Rational(num, den);
        v.canonicalize();
      }
      return Poly::constant(n, v);
    }
    if (peek().kind == Tok::Ident) {
      std::string name = t_[pos++].text;
      return Poly::variable(n, var_index(name));
    }
    if (at_sym("(")) {
      ++pos;
      Poly p = poly();
      expect_sym(")");
      return p;
    }
    fail("expected polynomial");
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident()};
    while (at_sym(",")) {
      ++pos;
      out.push_back(ident());
    }
    return out;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<Token> t_;
  std::vector<std::string> names_;
  const Environment* env_;
  std::size_t best_pos_ = 0;
  std::string best_msg_;
};

std::vector<std::string> identifier_names(const std::vector<Token>& toks) {
  std::vector<std::string> names;
  for (const auto& t : toks)
    if (t.kind == Tok::Ident && std::find(names.begin(), names.end(), t.text) == names.end()) names.push_back(t.text);
  return names;
}

// Checks binder discipline and computes the free-variable list.
Formula finish(NodePtr root, std::optional<std::vector<std::string>> declared, const Token& at) {
  std::vector<std::string> decl = declared.value_or(std::vector<std::string>{});
  {
    std::vector<std::string> sorted = decl;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError("variable declared twice", at.line, at.col);
  }
  std::function<void(const NodePtr&, std::vector<std::string>&)> check = [&](const NodePtr& n,
                                                                               std::vector<std::string>& scope) {
    if (n->kind == Kind::Exists || n->kind == Kind::Forall) {
      if (std::find(scope.begin(), scope.end(), n->var) != scope.end())
        throw ParseError("variable '" + n->var + "' is bound twice", at.line, at.col);
      if (std::find(decl.begin(), decl.end(), n->var) != decl.end())
        throw ParseError("bound variable '" + n->var + "' is also declared free", at.line, at.col);
      scope.push_back(n->var);
      check(n->children[0], scope);
      scope.pop_back();
      return;
    }
    for (const auto& c : n->children) check(c, scope);
  };
  std::vector<std::string> scope;
  check(root, scope);
  auto fv = free_variables(root);
  Formula out;
  out.root = root;
  if (declared) {
    for (const auto& v : fv)
      if (std::find(decl.begin(), decl.end(), v) == decl.end())
        throw ParseError("unbound variable '" + v + "'", at.line, at.col);
    out.free_vars = decl;
  } else {
    auto bv = bound_variables(root);
    for (const auto& v : fv)
      if (std::find(bv.begin(), bv.end(), v) != bv.end())
        throw ParseError("variable '" + v + "' occurs both free and bound", at.line, at.col);
    out.free_vars = fv;
  }
  return out;
}

Formula parse_main(Parser& p, const std::vector<Token>& toks) {
  std::optional<std::vector<std::string>> declared;
  if (p.at_kw("vars")) {
    ++p.pos;
    declared = p.ident_list();
    p.expect_sym(":");
  }
  std::size_t start = p.pos;
  NodePtr root = p.formula();
  return finish(root, declared, toks[start]);
}

}  // namespace

Formula parse_formula(std::string_view text, const Environment* env) {
  auto toks = tokenize(text);
  Parser p(toks, identifier_names(toks), env);
  try {
    Formula f = parse_main(p, toks);
    if (!p.at_end()) p.fail("unexpected trailing input");
    return f;
  } catch (const Failure&) {
    throw p.error();
  }
}

std::optional<Formula> parse_document(std::string_view text, Environment& env) {
  auto toks = tokenize(text);
  Parser p(toks, identifier_names(toks), &env);
  try {
    while (p.at_kw("define")) {
      const Token& at = p.peek();
      ++p.pos;
      std::string name = p.ident();
      p.expect_sym("(");
      std::vector<std::string> params;
      if (!p.at_sym(")")) params = p.ident_list();
      p.expect_sym(")");
      std::optional<FDPair> fd;
      if (p.at_kw("fd")) {
        ++p.pos;
        p.expect_sym("(");
        if (p.peek().kind != Tok::Number) p.fail("expected format");
        unsigned F = static_cast<unsigned>(std::stoul(toks[p.pos++].text));
        p.expect_sym(",");
        if (p.peek().kind != Tok::Number) p.fail("expected degree");
        unsigned D = static_cast<unsigned>(std::stoul(toks[p.pos++].text));
        p.expect_sym(")");
        fd = FDPair{F, D};
      }
      p.expect_sym("=");
      std::size_t start = p.pos;
      NodePtr body = p.formula();
      p.expect_sym(";");
      Formula def = finish(body, params, toks[start]);
      if (env.contains(name)) throw ParseError("set '" + name + "' is already defined", at.line, at.col);
      env.define(name, def, fd);
    }
    if (p.at_end()) return std::nullopt;
    Formula f = parse_main(p, toks);
    if (!p.at_end()) p.fail("unexpected trailing input");
    return f;
  } catch (const Failure&) {
    throw p.error();
  }
}

Poly parse_polynomial(std::string_view text, const std::vector<std::string>& names) {
  auto toks = tokenize(text);
  for (const auto& n : identifier_names(toks))
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw std::invalid_argument("parse_polynomial: unknown variable '" + n + "'");
  Parser p(toks, names, nullptr);
  try {
    Poly r = p.poly();
    if (!p.at_end()) p.fail("unexpected trailing input");
    return r;
  } catch (const Failure&) {
    throw p.error();
  }
}

namespace {

void print(const NodePtr& n, std::string& out, bool nested) {
  switch (n->kind) {
    case Kind::Atom: {
      out += "(";
      out += n->atom.poly.to_string(n->atom.vars);
      out += n->atom.rel == Rel::Eq ? " = 0)" : n->atom.rel == Rel::Gt ? " > 0)" : " < 0)";
      return;
    }
    case Kind::Ref: {
      out += "@" + n->ref + "(";
      for (std::size_t i = 0; i < n->args.size(); ++i) out += (i ? ", " : "") + n->args[i];
      out += ")";
      return;
    }
    case Kind::Not:
      out += "not ";
      print(n->children[0], out, true);
      return;
    case Kind::Exists:
    case Kind::Forall:
      out += n->kind == Kind::Exists ? "exists " : "forall ";
      out += n->var + ". ";
      print(n->children[0], out, true);
      return;
    case Kind::And:
    case Kind::Or: {
      if (nested) out += "(";
      const char* sep = n->kind == Kind::And ? " and " : " or ";
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        if (i) out += sep;
        print(n->children[i], out, true);
      }
      if (nested) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const NodePtr& n) {
  std::string out;
  print(n, out, false);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out = "vars ";
  for (std::size_t i = 0; i < f.free_vars.size(); ++i) out += (i ? ", " : "") + f.free_vars[i];
  out += ": ";
  if (f.free_vars.empty()) out = "";
  return out + to_string(f.root);
}

}  // namespace fdc
