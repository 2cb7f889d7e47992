#include "fdcalc/axioms.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fdc {

namespace {

const char* const kVariantNames[] = {"P", "W", "Sharp"};
const char* const kOpNames[] = {"union", "intersection", "project_last", "complement", "times_R_right", "times_R_left"};

}  // namespace

std::string to_string(Variant v) { return kVariantNames[static_cast<int>(v)]; }
std::string to_string(Op op) { return kOpNames[static_cast<int>(op)]; }

Variant parse_variant(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kVariantNames[i]) return static_cast<Variant>(i);
  if (s == "#" || s == "sharp") return Variant::Sharp;
  throw std::invalid_argument("unknown axiom system '" + s + "' (expected P, W or Sharp)");
}

Op parse_op(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (s == kOpNames[i]) return static_cast<Op>(i);
  if (s == "projection") return Op::Projection;
  throw std::invalid_argument("unknown operation '" + s + "'");
}

bool is_boolean(Op op) { return op == Op::Union || op == Op::Intersection; }

AxiomSystem AxiomSystem::of(Variant v) {
  AxiomSystem s;
  s.variant = v;
  auto set = [&](Op op, unsigned bump, bool nary) { s.rules[static_cast<std::size_t>(op)] = {bump, nary}; };
  // Products with R add one to the format in every system.
  set(Op::TimesRRight, 1, false);
  set(Op::TimesRLeft, 1, false);
  switch (v) {
    case Variant::P:
      set(Op::Projection, 1, false);
      set(Op::Complement, 1, false);
      set(Op::Union, 1, false);
      set(Op::Intersection, 1, false);
      break;
    case Variant::W:
      set(Op::Projection, 1, false);
      set(Op::Complement, 1, false);
      set(Op::Union, 0, true);
      set(Op::Intersection, 1, true);
      break;
    case Variant::Sharp:
      set(Op::Projection, 0, false);
      set(Op::Complement, 0, false);
      set(Op::Union, 0, true);
      set(Op::Intersection, 0, true);
      break;
  }
  return s;
}

FDPair apply_rule(const AxiomSystem& sys, Op op, const std::vector<FDPair>& inputs) {
  const Rule& r = sys.rule(op);
  if (!is_boolean(op)) {
    if (inputs.size() != 1)
      throw std::invalid_argument(to_string(op) + " takes one input, got " + std::to_string(inputs.size()));
    return {inputs[0].format + r.format_bump, inputs[0].degree};
  }
  if (inputs.empty()) throw std::invalid_argument(to_string(op) + " needs at least one input");
  if (!r.nary && inputs.size() != 2)
    throw std::invalid_argument(to_string(op) + " is binary in system " + to_string(sys.variant) + ", got " +
                                std::to_string(inputs.size()) + " inputs");
  FDPair out{0, 0};
  for (const auto& in : inputs) {
    out.format = std::max(out.format, in.format);
    out.degree += in.degree;
  }
  out.format += r.format_bump;
  return out;
}

Derivation Derivation::leaf(FDPair fd, std::size_t dim, std::string label) {
  Derivation d;
  d.fd = fd;
  d.dim = dim;
  d.label = std::move(label);
  return d;
}

Derivation Derivation::node(Op op, std::vector<Derivation> children) {
  Derivation d;
  d.op = op;
  d.children = std::move(children);
  return d;
}

std::size_t derivation_dim(const Derivation& d) {
  if (!d.op) {
    if (!d.children.empty()) throw std::invalid_argument("derivation leaf has children");
    if (d.fd.format < d.dim)
      throw std::invalid_argument("leaf '" + d.label + "' has format " + std::to_string(d.fd.format) +
                                  " below its dimension " + std::to_string(d.dim));
    return d.dim;
  }
  if (d.children.empty()) throw std::invalid_argument(to_string(*d.op) + " node without children");
  std::size_t l = derivation_dim(d.children[0]);
  for (std::size_t i = 1; i < d.children.size(); ++i)
    if (derivation_dim(d.children[i]) != l)
      throw std::invalid_argument(to_string(*d.op) + " of sets in different dimensions");
  switch (*d.op) {
    case Op::Projection:
      if (l == 0) throw std::invalid_argument("projection of a subset of R^0");
      return l - 1;
    case Op::TimesRRight:
    case Op::TimesRLeft: return l + 1;
    default: return l;
  }
}

namespace {

FDPair derive(const Derivation& d, const AxiomSystem& sys) {
  if (!d.op) return d.fd;
  std::vector<FDPair> in;
  for (const auto& c : d.children) in.push_back(derive(c, sys));
  return apply_rule(sys, *d.op, in);
}

}  // namespace

FDPair derive_fd(const Derivation& d, const AxiomSystem& sys) {
  derivation_dim(d);
  return derive(d, sys);
}

nlohmann::json to_json(const Derivation& d) {
  nlohmann::json j;
  if (!d.op) {
    j["fd"] = {d.fd.format, d.fd.degree};
    j["dim"] = d.dim;
  } else {
    j["op"] = to_string(*d.op);
    j["children"] = nlohmann::json::array();
    for (const auto& c : d.children) j["children"].push_back(to_json(c));
  }
  if (!d.label.empty()) j["label"] = d.label;
  return j;
}

Derivation derivation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("derivation node must be an object");
  Derivation d;
  d.label = j.value("label", "");
  if (j.contains("op")) {
    d.op = parse_op(j.at("op").get<std::string>());
    for (const auto& c : j.at("children")) d.children.push_back(derivation_from_json(c));
    return d;
  }
  const auto& fd = j.at("fd");
  if (!fd.is_array() || fd.size() != 2) throw std::invalid_argument("leaf fd must be [format, degree]");
  d.fd = {fd[0].get<unsigned>(), fd[1].get<unsigned>()};
  d.dim = j.at("dim").get<std::size_t>();
  return d;
}

ReductionWitness ReductionWitness::identity(unsigned max_format) {
  ReductionWitness w;
  for (unsigned F = 0; F <= max_format; ++F) {
    w.a[F] = F;
    w.P[F] = {Rational(0), Rational(1)};
  }
  return w;
}

unsigned ReductionWitness::format_map(unsigned F) const {
  auto it = a.find(F);
  if (it == a.end()) throw std::out_of_range("witness a(F) is not defined at F = " + std::to_string(F));
  return it->second;
}

Rational ReductionWitness::degree_bound(unsigned F, unsigned D) const {
  auto it = P.find(F);
  if (it == P.end()) throw std::out_of_range("witness P_F is not defined at F = " + std::to_string(F));
  Rational v = 0;
  for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) v = v * D + *c;
  return v;
}

void ReductionWitness::validate() const {
  for (const auto& [F, cs] : P) {
    if (cs.empty() || cs.back() <= 0)
      throw std::invalid_argument("P_" + std::to_string(F) + " needs a positive leading coefficient");
    for (const auto& c : cs)
      if (c < 0) throw std::invalid_argument("P_" + std::to_string(F) + " has a negative coefficient");
  }
}

nlohmann::json to_json(const ReductionWitness& w) {
  nlohmann::json j;
  j["schema"] = "fdcalc.witness/1";
  j["a"] = nlohmann::json::object();
  for (const auto& [F, v] : w.a) j["a"][std::to_string(F)] = v;
  j["P"] = nlohmann::json::object();
  for (const auto& [F, cs] : w.P) {
    auto& arr = j["P"][std::to_string(F)] = nlohmann::json::array();
    for (const auto& c : cs) arr.push_back(to_string(c));
  }
  return j;
}

ReductionWitness witness_from_json(const nlohmann::json& j) {
  ReductionWitness w;
  for (const auto& [k, v] : j.at("a").items()) w.a[static_cast<unsigned>(std::stoul(k))] = v.get<unsigned>();
  for (const auto& [k, v] : j.at("P").items()) {
    std::vector<Rational> cs;
    for (const auto& c : v) cs.push_back(c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>()));
    w.P[static_cast<unsigned>(std::stoul(k))] = std::move(cs);
  }
  w.validate();
  return w;
}

std::string ReductionReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(20) << "entry" << std::setw(10) << "source" << std::setw(10) << "target"
     << std::setw(16) << "bound" << "ok\n";
  for (const auto& r : rows) {
    std::string bound = "(" + std::to_string(r.format_bound) + ", " + to_string(r.degree_bound) + ")";
    os << std::left << std::setw(20) << r.name << std::setw(10) << r.source.to_string() << std::setw(10)
       << r.target.to_string() << std::setw(16) << bound << (r.ok ? "yes" : "NO") << "\n";
  }
  if (!rows.empty())
    os << "exercised source range: F " << min_source.format << ".." << max_source.format << ", D "
       << min_source.degree << ".." << max_source.degree << "\n";
  os << (passes() ? "witness passes" : std::to_string(violations.size()) + " violation(s)") << "\n";
  return os.str();
}

nlohmann::json to_json(const ReductionReport& r) {
  nlohmann::json j;
  j["schema"] = "fdcalc.reduction_report/1";
  j["passes"] = r.passes();
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"name", row.name},
                         {"source", {row.source.format, row.source.degree}},
                         {"target", {row.target.format, row.target.degree}},
                         {"bound", {std::to_string(row.format_bound), to_string(row.degree_bound)}},
                         {"ok", row.ok}});
  j["violations"] = r.violations;
  if (!r.rows.empty())
    j["range"] = {{"format", {r.min_source.format, r.max_source.format}},
                  {"degree", {r.min_source.degree, r.max_source.degree}}};
  return j;
}

ReductionReport check_reduction(const std::vector<ReductionEntry>& corpus, const ReductionWitness& w,
                                const std::function<FDPair(const ReductionEntry&)>& target_fd) {
  w.validate();
  ReductionReport rep;
  for (const auto& e : corpus) {
    ReductionRow row;
    row.name = e.name;
    row.source = e.source;
    row.target = target_fd(e);
    row.format_bound = w.format_map(e.source.format);
    row.degree_bound = w.degree_bound(e.source.format, e.source.degree);
    row.ok = row.target.format <= row.format_bound && Rational(row.target.degree) <= row.degree_bound;
    if (!row.ok)
      rep.violations.push_back(e.name + ": target " + row.target.to_string() + " exceeds (" +
                               std::to_string(row.format_bound) + ", " + to_string(row.degree_bound) + ")");
    if (rep.rows.empty()) {
      rep.min_source = rep.max_source = e.source;
    } else {
      rep.min_source = {std::min(rep.min_source.format, e.source.format), std::min(rep.min_source.degree, e.source.degree)};
      rep.max_source = join(rep.max_source, e.source);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ReductionReport check_reduction(const std::vector<ReductionEntry>& corpus, const ReductionWitness& w,
                                const AxiomSystem& target) {
  return check_reduction(corpus, w, [&](const ReductionEntry& e) { return derive_fd(e.target, target); });
}

std::uint64_t normalize_bound(std::uint64_t F, const std::function<std::uint64_t(std::uint64_t)>& C) {
  auto probe = [&](std::uint64_t v) {
    std::uint64_t cv = C(v);
    if (cv < v) throw std::invalid_argument("normalize_bound: C(" + std::to_string(v) + ") < " + std::to_string(v));
    if (v > 0 && C(v - 1) > cv)
      throw std::invalid_argument("normalize_bound: C is not monotone at " + std::to_string(v));
    if (C(v + 1) < cv) throw std::invalid_argument("normalize_bound: C is not monotone at " + std::to_string(v + 1));
    return cv;
  };
  std::uint64_t v = F;
  for (std::uint64_t i = 0; i < F; ++i) v = probe(v);
  return v;
}

}  // namespace fdc
