#include "fdcalc/axioms.hpp"
#include "fdcalc/cad.hpp"
#include "fdcalc/choice.hpp"
#include "fdcalc/evaluate.hpp"
#include "fdcalc/families.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/structure_tree.hpp"
#include "fdcalc/syntax.hpp"
#include "fdcalc/topology.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fdc;
using nlohmann::json;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::size_t ceiling = 3;
  bool strict = false;
  std::uint64_t seed = 1;
  std::size_t samples = 16;
  std::string json_path;
  bool stats = false;
  int approx = -1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Definitions go into the session environment; the main formula is returned
// with references expanded.
struct Loaded {
  Formula raw, expanded;
};

Loaded load_formula(const std::string& path, Environment& env) {
  std::string text = read_file(path);
  std::optional<Formula> main;
  try {
    main = parse_document(text, env);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  if (!main) throw InputError(path + ": no main formula");
  return {*main, env.expand(*main)};
}

CadOptions cad_opts(const Config& c) {
  CadOptions o;
  o.ceiling = c.ceiling;
  return o;
}

std::vector<Rational> parse_point(const std::string& s) {
  std::vector<Rational> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw InputError("bad rational '" + item + "'");
    }
  }
  return out;
}

json fd_json(const FDPair& fd) { return {fd.format, fd.degree}; }

json sample_json(const RealPoint& p) {
  json out = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) out.push_back(exact_coordinate(p, i));
  return out;
}

json approx_json(const RealPoint& p, int digits) {
  json out = json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    Rational w(1);
    for (int k = 0; k <= digits; ++k) w /= 10;
    p.refine(i, w);
    Interval b = p.bounds(i);
    out.push_back(to_decimal((b.lo + b.hi) / 2, digits));
  }
  return out;
}

// Every subcommand fills text (standard output) and a JSON document.
struct Output {
  std::ostringstream text;
  json doc;
};

void cmd_parse(const std::string& path, Environment& env, Output& out) {
  std::string text = read_file(path);
  std::optional<Formula> main;
  try {
    main = parse_document(text, env);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  json defs = json::array();
  for (const auto& name : env.names()) {
    auto s = env.find(name);
    FDPair fd = env.fd_of(name);
    defs.push_back({{"name", name}, {"params", s->formula.free_vars}, {"formula", to_string(s->formula)},
                    {"fd", fd_json(fd)}});
    out.text << "define " << name << " " << to_string(s->formula) << "  fd " << fd.to_string() << "\n";
  }
  out.doc = {{"schema", "fdcalc.parse/1"}, {"definitions", defs}, {"formula", nullptr}};
  if (main) {
    out.doc["formula"] = to_string(*main);
    out.doc["dim"] = main->dimension();
    out.text << to_string(*main) << "\n";
  }
}

void cmd_fdinfo(const std::string& path, Environment& env, Output& out) {
  Loaded X = load_formula(path, env);
  FDPair fd = fd_of_formula(X.raw, &env);
  unsigned pf = pformat_of_formula(X.raw, &env);
  out.text << "FD " << fd.to_string() << "\nP-format " << pf << "\n";
  out.doc = {{"schema", "fdcalc.fdinfo/1"},
             {"fd", fd_json(fd)},
             {"pformat", pf},
             {"dim", X.raw.dimension()},
             {"variables", variable_count(X.raw)},
             {"depth", parse_depth(X.raw.root)}};
}

void cmd_cad(const std::string& path, Environment& env, const Config& cfg, Output& out) {
  Loaded X = load_formula(path, env);
  auto t0 = std::chrono::steady_clock::now();
  CellDecomposition d = compatible_decomposition({X.expanded}, X.expanded.dimension(), cad_opts(cfg));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json cells = json::array();
  std::size_t inside = 0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    const Cell& cell = d.cells()[c];
    json j{{"index", cell.index}, {"dimension", cell.dimension()}, {"in", static_cast<bool>(d.member[c][0])},
           {"sample", sample_json(cell.sample)}};
    if (cfg.approx >= 0) j["sample_approx"] = approx_json(cell.sample, cfg.approx);
    inside += d.member[c][0];
    cells.push_back(j);
  }
  out.doc = {{"schema", "fdcalc.cad/1"}, {"dim", d.dim}, {"count", d.size()}, {"inside", inside}, {"cells", cells}};
  if (cfg.approx >= 0) out.doc["approx_note"] = "decimal annotations are not authoritative";
  out.text << "cells " << d.size() << " (" << inside << " in the set)\n";
  if (cfg.stats) {
    out.doc["stats"] = {{"dim", d.dim},
                        {"cells", d.size()},
                        {"projection", d.stats.projection == ProjectionKind::McCallum ? "mccallum" : "collins"},
                        {"polys", d.stats.npolys},
                        {"max_degree", d.stats.max_degree},
                        {"fallback_reason", d.stats.fallback_reason}};
    out.text << "projection factors " << d.stats.npolys << ", max degree " << d.stats.max_degree << ", "
             << (d.stats.projection == ProjectionKind::McCallum ? "McCallum" : "Collins") << ", " << secs << " s\n";
    if (!d.stats.fallback_reason.empty()) out.text << "fallback: " << d.stats.fallback_reason << "\n";
  }
}

void cmd_components(const std::string& path, Environment& env, const Config& cfg, Output& out) {
  Loaded X = load_formula(path, env);
  ComponentResult r = connected_components(X.expanded, cad_opts(cfg));
  out.doc = to_json(r);
  out.text << "components " << r.components.size() << (r.certified ? "" : " (uncertified adjacency)") << "\n";
  for (std::size_t i = 0; i < r.components.size(); ++i)
    out.text << "  " << i << ": " << r.components[i].cells.size() << " cells, FD " << r.components[i].fd.to_string()
             << "\n";
}

void cmd_bound_check(const std::string& family, unsigned from, unsigned to, const std::string& cap_text,
                     const Config& cfg, Output& out) {
  if (from > to || from == 0) throw InputError("bad degree range");
  std::map<unsigned, Formula> fam;
  if (family == "chebyshev") {
    for (unsigned D = from; D <= to; ++D) fam[D] = chebyshev_curve(D);
    CellGrowthReport r = cell_growth(fam, cad_opts(cfg));
    json cells, star, naive;
    for (const auto& [D, n] : r.cells) {
      cells[std::to_string(D)] = n;
      star[std::to_string(D)] = fd_json(r.star.at(D));
      naive[std::to_string(D)] = fd_json(r.naive.at(D));
    }
    out.doc = {{"schema", "fdcalc.bound-check/1"},
               {"mode", "cells"},
               {"family", family},
               {"counts", cells},
               {"exponent", r.exponent},
               {"slope", r.slope},
               {"star_fd", star},
               {"naive_fd", naive},
               {"star_format_constant", r.star_format_constant},
               {"naive_format_grows", r.naive_format_grows}};
    out.text << r.table();
    return;
  }
  for (unsigned D = from; D <= to; ++D) {
    if (family == "product") {
      fam[D] = product_family(D);
    } else if (family == "lines") {
      Poly p = Poly::constant(2, Rational(1));
      for (unsigned i = 1; i <= D; ++i)
        p = p * (Poly::variable(2, 0) - Poly::constant(2, Rational(i))) *
            (Poly::variable(2, 1) - Poly::constant(2, Rational(i)));
      fam[D] = {{"x", "y"}, f::atom(p, {"x", "y"}, Rel::Eq)};
    } else {
      throw InputError("unknown family '" + family + "' (product, lines, chebyshev)");
    }
  }
  Rational cap;
  try {
    cap = parse_rational(cap_text);
  } catch (const std::invalid_argument&) {
    throw InputError("bad cap '" + cap_text + "'");
  }
  ComponentBoundReport r = check_component_bound(fam, cap, cad_opts(cfg), cfg.seed);
  json counts;
  for (const auto& [D, n] : r.counts) counts[std::to_string(D)] = n;
  out.doc = {{"schema", "fdcalc.bound-check/1"}, {"mode", "components"}, {"family", family},
             {"counts", counts},                 {"exponent", r.exponent},  {"slope", r.slope},
             {"cap", to_string(r.cap)},          {"passes", r.passes}};
  if (r.witness) {
    json fn = json::array();
    for (const auto& c : r.witness->functional) fn.push_back(to_string(c));
    out.doc["witness"] = {{"degree", r.witness->degree},
                          {"functional", fn},
                          {"lower_dimensional", r.witness->lower_dimensional},
                          {"meets", r.witness->meets}};
  }
  out.text << r.table();
}

void cmd_stratify(const std::string& path, Environment& env, const Config& cfg, Output& out) {
  Loaded X = load_formula(path, env);
  Stratification s = stratify(X.expanded, cad_opts(cfg));
  out.doc = to_json(s);
  for (const auto& st : s.strata)
    out.text << "dimension " << st.dim << ": " << st.cells.size() << " cells, FD " << st.fd.to_string() << "\n";
}

Triangulation run_triangulate(const std::string& path, const std::vector<std::string>& subsets, Environment& env,
                              const Config& cfg) {
  Loaded X = load_formula(path, env);
  std::vector<Formula> subs;
  for (const auto& s : subsets) subs.push_back(load_formula(s, env).expanded);
  try {
    return triangulate(X.expanded, subs, cad_opts(cfg));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

void cmd_triangulate(const std::string& path, const std::vector<std::string>& subsets, const std::string& off,
                     Environment& env, const Config& cfg, Output& out) {
  Triangulation T = run_triangulate(path, subsets, env, cfg);
  out.doc = to_json(T.complex);
  json cells = json::array();
  for (const auto& c : T.cells) cells.push_back({{"cell", c.cell}, {"kind", c.kind}, {"simplices", c.simplices}});
  out.doc["cells"] = cells;
  out.text << "vertices " << T.complex.count(0) << ", edges " << T.complex.count(1) << ", triangles "
           << T.complex.count(2) << "\n";
  if (!off.empty()) {
    std::ofstream o(off);
    if (!o) throw InputError("cannot write " + off);
    o << to_off(T.complex);
  }
}

void cmd_betti(const std::string& path, Environment& env, const Config& cfg, Output& out) {
  Triangulation T = run_triangulate(path, {}, env, cfg);
  auto b = betti(T.complex);
  long euler = static_cast<long>(T.complex.count(0)) - static_cast<long>(T.complex.count(1)) +
               static_cast<long>(T.complex.count(2));
  out.doc = {{"schema", "fdcalc.betti/1"},
             {"betti", b},
             {"simplices", {T.complex.count(0), T.complex.count(1), T.complex.count(2)}},
             {"euler", euler}};
  out.text << "betti " << b[0] << " " << b[1] << " " << b[2] << "\n";
}

void cmd_choice(const std::string& path, std::size_t fiber_dim, const std::vector<std::string>& at, Environment& env,
                const Config& cfg, Output& out) {
  Loaded X = load_formula(path, env);
  ChoiceOptions co;
  co.ceiling = cfg.ceiling;
  co.strict = cfg.strict;
  co.samples = cfg.samples;
  co.seed = cfg.seed;
  ChoiceFunction g;
  try {
    g = choice(X.expanded, fiber_dim, co);
  } catch (const EmptyFiberError& e) {
    throw InputError(e.what());
  }
  out.doc = {{"schema", "fdcalc.choice-report/1"}, {"function", to_json(g)}, {"values", json::array()}};
  out.text << "parameters " << g.param_dim << ", fiber dimension " << g.fiber_dim << ", graph FD "
           << g.fd.to_string() << (g.certified_nonempty ? ", fibers certified nonempty" : "") << "\n";
  for (const auto& s : g.steps) {
    out.text << "coordinate " << s.coordinate + 1 << ":";
    for (int i = 0; i < 4; ++i)
      out.text << " " << "ABCD"[i] << " " << s.region_fd[i].to_string() << "/" << s.section_fd[i].to_string();
    out.text << "\n";
  }
  for (const auto& a : at) {
    ChoiceValue v;
    try {
      v = g.evaluate(parse_point(a));
    } catch (const EmptyFiberError& e) {
      throw InputError(e.what());
    }
    json jv = to_json(v);
    jv.erase("approx");
    if (cfg.approx >= 0) {
      jv["approx"] = approx_json(v.point, cfg.approx);
      out.doc["approx_note"] = "decimal annotations are not authoritative";
    }
    out.doc["values"].push_back(jv);
    out.text << "g(" << a << ") =";
    for (std::size_t i = g.param_dim; i < v.point.dim(); ++i) out.text << " " << exact_coordinate(v.point, i);
    out.text << "  [";
    for (auto c : v.cases) out.text << case_letter(c);
    out.text << "]\n";
  }
}

void cmd_tree(const std::string& path, const std::string& defs, bool lift, bool check, Environment& env,
              const Config& cfg, Output& out) {
  if (!defs.empty()) {
    try {
      parse_document(read_file(defs), env);
    } catch (const ParseError& e) {
      throw InputError(defs + ":" + e.what());
    }
  }
  StructureTree t;
  try {
    t = tree_from_json(read_json(path), env);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  auto violations = validate_tree(t, env);
  json vj = json::array();
  for (const auto& v : violations) vj.push_back({{"vertex", v.vertex}, {"message", v.message}});
  out.doc = {{"schema", "fdcalc.tree-report/1"}, {"tree", to_json(t)}, {"violations", vj}};
  for (const auto& v : violations) out.text << "violation at " << v.vertex << ": " << v.message << "\n";
  if (!violations.empty()) return;
  FDPair fd = omega_fd(t, env), fdp = omega_prime_fd(t, env);
  out.doc["dim"] = tree_dim(t, env);
  out.doc["omega_fd"] = fd_json(fd);
  out.doc["omega_prime_fd"] = fd_json(fdp);
  out.text << "dimension " << tree_dim(t, env) << ", omega FD " << fd.to_string() << ", omega' FD "
           << fdp.to_string() << "\n";
  if (lift) {
    StructureTree l = lift_times_R(t, env);
    out.doc["lifted"] = {{"tree", to_json(l)}, {"omega_fd", fd_json(omega_fd(l, env))}};
    out.text << "lifted omega FD " << omega_fd(l, env).to_string() << "\n";
  }
  if (check) {
    CompatibilityReport r = check_tree_compatibility(t, env, cfg.samples, cfg.seed, cad_opts(cfg));
    out.doc["compatibility"] = {{"leaf_dim", r.leaf_dim},
                                {"vertices", r.vertices},
                                {"cells_checked", r.cells_checked},
                                {"failures", r.failures}};
    out.text << "compatibility " << (r.ok() ? "ok" : "FAILED") << " (" << r.cells_checked << " cells)\n";
    for (const auto& f : r.failures) out.text << "  " << f << "\n";
  }
}

StarRep load_star(const std::string& path, Environment& env, const Config& cfg) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return star_from_json(read_json(path));
    } catch (const json::exception& e) {
      throw InputError(path + ": " + e.what());
    } catch (const ParseError& e) {
      throw InputError(path + ":" + e.what());
    }
  }
  Loaded X = load_formula(path, env);
  return to_star(X.expanded, fd_of_formula(X.raw, &env), cad_opts(cfg));
}

void cmd_star(const std::vector<std::string>& paths, std::size_t ccd, Environment& env, const Config& cfg,
              Output& out) {
  std::vector<StarRep> reps;
  json inputs = json::array();
  for (const auto& p : paths) {
    reps.push_back(load_star(p, env, cfg));
    inputs.push_back(to_json(reps.back()));
    out.text << p << ": " << reps.back().entries.size() << " entries, star FD " << star_fd(reps.back()).to_string()
             << "\n";
  }
  out.doc = {{"schema", "fdcalc.star-report/1"}, {"inputs", inputs}};
  bool same = std::all_of(reps.begin(), reps.end(), [&](const StarRep& r) { return r.dim == reps[0].dim; });
  if (reps.size() > 1 && same) {
    StarRep u = reps[0];
    for (std::size_t i = 1; i < reps.size(); ++i) u = star_union(u, reps[i]);
    out.doc["union_fd"] = fd_json(star_fd(u));
    out.text << "union star FD " << star_fd(u).to_string() << "\n";
  }
  if (ccd > 0) {
    StarDecomposition sd = star_ccd(reps, ccd, cad_opts(cfg));
    out.doc["ccd"] = to_json(sd);
    out.text << "star decomposition of (0,1)^" << ccd << ": " << sd.cells.size() << " cells, max star FD "
             << sd.max_star.to_string() << ", max root-index FD " << sd.max_naive.to_string() << "\n";
  }
}

void cmd_reduce_check(const std::string& path, Output& out) {
  json j = read_json(path);
  ReductionReport r;
  try {
    ReductionWitness w = witness_from_json(j.at("witness"));
    AxiomSystem sys = AxiomSystem::of(parse_variant(j.value("system", "P")));
    std::vector<ReductionEntry> corpus;
    for (const auto& e : j.at("corpus")) {
      const auto& s = e.at("source");
      corpus.push_back({e.at("name").get<std::string>(), {s[0].get<unsigned>(), s[1].get<unsigned>()},
                        derivation_from_json(e.at("target"))});
    }
    r = check_reduction(corpus, w, sys);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  out.doc = to_json(r);
  out.text << r.table();
}

void cmd_report(const std::vector<std::string>& paths, Environment& env, const Config& cfg, Output& out) {
  json entries = json::array();
  for (const auto& p : paths) {
    Loaded X = load_formula(p, env);
    FDPair fd = fd_of_formula(X.raw, &env);
    json e{{"file", p}, {"dim", X.raw.dimension()}, {"fd", fd_json(fd)}, {"pformat", pformat_of_formula(X.raw, &env)}};
    out.text << p << ": dimension " << X.raw.dimension() << ", FD " << fd.to_string();
    CadOptions co = cad_opts(cfg);
    if (X.expanded.dimension() <= 3) {
      ComponentResult r = connected_components(X.expanded, co);
      e["components"] = r.components.size();
      e["cells"] = r.decomposition.size();
      StarRep s = to_star(X.expanded, fd, co);
      e["star_fd"] = fd_json(star_fd(s));
      out.text << ", " << r.decomposition.size() << " cells, " << r.components.size() << " components, star FD "
               << star_fd(s).to_string();
    }
    if (X.expanded.dimension() <= 2) {
      try {
        Triangulation T = triangulate(X.expanded, {}, co);
        auto b = betti(T.complex);
        e["betti"] = b;
        out.text << ", betti " << b[0] << " " << b[1] << " " << b[2];
      } catch (const std::invalid_argument&) {
        e["betti"] = nullptr;  // not closed and bounded
      }
    }
    out.text << "\n";
    entries.push_back(e);
  }
  out.doc = {{"schema", "fdcalc.report/1"}, {"entries", entries}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fdtool: format/degree calculus and cylindrical decompositions for semialgebraic sets"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--ceiling", cfg.ceiling, "Dimension ceiling for decompositions")->check(CLI::IsMember({2, 3}));
  app.add_flag("--strict", cfg.strict, "Certify preconditions instead of sampling them");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--samples", cfg.samples, "Sample count for randomized checks");
  app.add_option("--json", cfg.json_path, "Write the JSON result to this path ('-' for standard output)");
  app.add_flag("--stats", cfg.stats, "Report decomposition statistics");
  app.add_option("--approx", cfg.approx, "Add k-digit decimal annotations (not authoritative)")->check(CLI::Range(0, 60));

  std::string file;
  std::vector<std::string> files, subsets, at;
  std::string family = "product", cap = "3/2", off, defs;
  unsigned from = 1, to = 8;
  std::size_t fiber_dim = 1, ccd = 0;
  bool lift = false, check = false;

  auto* parse = app.add_subcommand("parse", "Parse a formula file and print it back");
  parse->add_option("file", file)->required();
  auto* fdinfo = app.add_subcommand("fdinfo", "Format, degree and P-format of a formula");
  fdinfo->add_option("file", file)->required();
  auto* cadc = app.add_subcommand("cad", "Cylindrical decomposition adapted to a set");
  cadc->add_option("file", file)->required();
  auto* comps = app.add_subcommand("components", "Connected components");
  comps->add_option("file", file)->required();
  auto* bound = app.add_subcommand("bound-check", "Growth of component or cell counts over a family");
  bound->add_option("family", family, "product, lines or chebyshev");
  bound->add_option("--from", from);
  bound->add_option("--to", to);
  bound->add_option("--cap", cap, "Exponent cap (rational)");
  auto* strat = app.add_subcommand("stratify", "Group cells by dimension");
  strat->add_option("file", file)->required();
  auto* tri = app.add_subcommand("triangulate", "Triangulate a closed bounded set in R^1 or R^2");
  tri->add_option("file", file)->required();
  tri->add_option("--subset", subsets, "Formula files of subsets to respect");
  tri->add_option("--off", off, "Also write the complex as OFF");
  auto* bet = app.add_subcommand("betti", "Betti numbers of a closed bounded set in R^1 or R^2");
  bet->add_option("file", file)->required();
  auto* cho = app.add_subcommand("choice", "Definable choice for a family; the last coordinates are the fiber");
  cho->add_option("file", file)->required();
  cho->add_option("--fiber-dim", fiber_dim)->check(CLI::Range(1, 3));
  cho->add_option("--at", at, "Parameter value(s), comma separated; repeatable");
  auto* tree = app.add_subcommand("tree", "Structure tree FD and compatibility");
  tree->add_option("file", file, "Tree JSON")->required();
  tree->add_option("--defs", defs, "Formula file with leaf definitions");
  tree->add_flag("--lift", lift, "Also report the lifted tree");
  tree->add_flag("--check", check, "Check compatibility of a decomposition with every vertex");
  auto* star = app.add_subcommand("star", "Star representations (formula files or star JSON)");
  star->add_option("files", files)->required();
  star->add_option("--ccd", ccd, "Star cell decomposition of (0,1)^n");
  auto* red = app.add_subcommand("reduce-check", "Check a reduction witness on a corpus");
  red->add_option("file", file)->required();
  auto* rep = app.add_subcommand("report", "Summary of several formula files");
  rep->add_option("files", files)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  Environment env;
  Output out;
  try {
    if (*parse) cmd_parse(file, env, out);
    else if (*fdinfo) cmd_fdinfo(file, env, out);
    else if (*cadc) cmd_cad(file, env, cfg, out);
    else if (*comps) cmd_components(file, env, cfg, out);
    else if (*bound) cmd_bound_check(family, from, to, cap, cfg, out);
    else if (*strat) cmd_stratify(file, env, cfg, out);
    else if (*tri) cmd_triangulate(file, subsets, off, env, cfg, out);
    else if (*bet) cmd_betti(file, env, cfg, out);
    else if (*cho) cmd_choice(file, fiber_dim, at, env, cfg, out);
    else if (*tree) cmd_tree(file, defs, lift, check, env, cfg, out);
    else if (*star) cmd_star(files, ccd, env, cfg, out);
    else if (*red) cmd_reduce_check(file, out);
    else if (*rep) cmd_report(files, env, cfg, out);
  } catch (const CeilingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  out.doc["seed"] = cfg.seed;
  if (cfg.json_path == "-") {
    std::cout << out.doc.dump(2) << "\n";
  } else {
    std::cout << out.text.str() << "seed " << cfg.seed << "\n";
    if (!cfg.json_path.empty()) {
      std::ofstream o(cfg.json_path);
      if (!o) {
        std::cerr << "error: cannot write " << cfg.json_path << "\n";
        return 1;
      }
      o << out.doc.dump(2) << "\n";
    }
  }
  return 0;
}
