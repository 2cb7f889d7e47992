#include "fdcalc/choice.hpp"

#include "fdcalc/evaluate.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/polyalg.hpp"
#include "fdcalc/syntax.hpp"

#include <random>

namespace fdc {

constexpr std::size_t kRegionBudget = 8;

char case_letter(ChoiceCase c) { return "ABCD"[static_cast<int>(c)]; }

struct ChoiceFunction::StepData {
  Formula admissible;       // over (lambda, x_1..x_k)
  std::vector<Poly> polys;  // fiber polynomials in x_0..x_{p+k-1}
};

namespace {

// Builds the region, bound and section formulas of one coordinate from its
// family over (lambda, x).
class StepBuilder {
 public:
  explicit StepBuilder(const Formula& family) : fam_(family) {
    lam_.assign(family.free_vars.begin(), family.free_vars.end() - 1);
    x_ = family.free_vars.back();
    taken_ = family.free_vars;
    for (const auto& b : bound_variables(family.root)) taken_.push_back(b);
  }

  ChoiceStep build(std::size_t coordinate) {
    ChoiceStep s;
    s.coordinate = coordinate;
    s.family = fam_;
    std::string M = fresh("m"), t = fresh("t");
    NodePtr below = f::forall(M, f::exists(t, f::conj({member(t), lt(t, M)})));
    std::string v = fresh("s"), w = fresh("w");
    NodePtr right = f::forall(v, f::implies(f::exists(w, f::conj({member(w), lt(w, v)})), member(v)));
    s.unbounded_below = {lam_, below};
    s.unbounded_right = {lam_, right};
    s.regions = {Formula{lam_, f::conj({below, right})}, Formula{lam_, f::conj({below, f::neg(right)})},
                 Formula{lam_, f::conj({f::neg(below), right})},
                 Formula{lam_, f::conj({f::neg(below), f::neg(right)})}};

    std::string val = fresh("v");
    s.graph_a = {with(val), graph_a(val)};
    s.graph_b = {with(val), graph_b(val)};

    std::vector<std::string> over = with(x_);
    std::string u = fresh("u"), u2 = fresh("u");
    Poly X = var(over.size() + 2, lam_.size());
    Poly U = var(over.size() + 2, lam_.size() + 1), U2 = var(over.size() + 2, lam_.size() + 2);
    std::vector<std::string> ext = over;
    ext.push_back(u);
    ext.push_back(u2);
    auto eq = [&](const Poly& p) { return f::atom(p, ext, Rel::Eq); };
    Poly one = Poly::constant(ext.size(), Rational(1));
    s.sections = {Formula{over, eq(X)}, Formula{over, f::exists(u, f::conj({graph_b(u), eq(X - U + one)}))},
                  Formula{over, f::exists(u, f::conj({graph_a(u), eq(X - U - one)}))},
                  Formula{over, f::exists(u, f::exists(u2, f::conj({graph_a(u), graph_b(u2),
                                                                   eq(X + X - U - U2)})))}};
    std::vector<NodePtr> pieces;
    for (int i = 0; i < 4; ++i) {
      s.region_fd[i] = fd_of_formula(s.regions[i]);
      s.section_fd[i] = fd_of_formula(s.sections[i]);
      pieces.push_back(f::conj({s.regions[i].root, s.sections[i].root}));
    }
    s.graph = {over, f::disj(pieces)};
    s.fd = fd_of_formula(s.graph);
    return s;
  }

 private:
  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, taken_);
    taken_.push_back(n);
    return n;
  }
  std::vector<std::string> with(const std::string& v) const {
    auto out = lam_;
    out.push_back(v);
    return out;
  }
  static Poly var(std::size_t n, std::size_t i) { return Poly::variable(n, i); }
  // a < b for variable names.
  NodePtr lt(const std::string& a, const std::string& b) {
    std::vector<std::string> names{a, b};
    return f::atom(var(2, 0) - var(2, 1), names, Rel::Lt);
  }
  NodePtr member(const std::string& t) {
    return rename_free(freshen_bound(fam_.root, taken_), {{x_, t}});
  }
  // v = inf of the fiber.
  NodePtr graph_a(const std::string& v) {
    std::string t = fresh("t"), e = fresh("e"), z = fresh("z");
    std::vector<std::string> n3{v, e, z};
    Poly V = var(3, 0), E = var(3, 1), Z = var(3, 2);
    return f::conj({f::forall(t, f::implies(member(t), f::nonneg(var(2, 1) - var(2, 0), {v, t}))),
                    f::forall(e, f::implies(f::atom(E, n3, Rel::Gt),
                                            f::exists(z, f::conj({member(z), f::atom(V + E - Z, n3, Rel::Gt)}))))});
  }
  // Every point of (a, v) lies in the fiber.
  NodePtr run_to(const std::string& v) {
    std::string z = fresh("z"), w = fresh("w");
    return f::forall(z, f::implies(f::conj({lt(z, v), f::exists(w, f::conj({member(w), lt(w, z)}))}), member(z)));
  }
  // v = sup{x : (a, x) in the fiber}.
  NodePtr graph_b(const std::string& v) {
    std::string t = fresh("t");
    return f::conj({run_to(v), f::forall(t, f::implies(lt(v, t), f::neg(run_to(t))))});
  }

  Formula fam_;
  std::vector<std::string> lam_;
  std::string x_;
  std::vector<std::string> taken_;
};

// Fiber cells of the admissible set over a base point: positions 1..2n+1.
struct FiberCells {
  Fiber fiber;
  std::vector<bool> in;  // index 1..2n+1
};

FiberCells fiber_cells(const ChoiceFunction::StepData& sd, const RealPoint& base) {
  FiberCells fc{Fiber(base, sd.polys), {}};
  const std::size_t n = fc.fiber.size();
  fc.in.assign(2 * n + 2, false);
  for (std::size_t j = 1; j <= 2 * n + 1; ++j) {
    RealPoint pt = j % 2 == 1 ? base.extended(fc.fiber.gap_point((j - 1) / 2)) : fc.fiber.root(j / 2 - 1);
    Verdict v = evaluate(sd.admissible, pt);
    if (v.certainty != Certainty::Exact)
      throw std::runtime_error("choice: fiber membership could not be decided exactly");
    fc.in[j] = v.value;
  }
  return fc;
}

RealPoint shifted_root(const RealPoint& base, const std::vector<Poly>& polys, std::size_t i, const Rational& c) {
  const std::size_t var = base.dim(), n = var + 1;
  Poly X = Poly::variable(n, var) - Poly::constant(n, c);
  std::vector<Poly> sh;
  for (const auto& p : polys) sh.push_back(p.with_nvars(n).compose(var, X));
  Fiber fs(base, sh);
  return fs.root(i);
}

RealPoint midpoint(const RealPoint& base, const RealPoint& a, const RealPoint& b) {
  const std::size_t m = base.dim();
  if (a.is_rational(m) && b.is_rational(m)) return base.extended((a.rational(m) + b.rational(m)) / 2);
  const std::size_t n = m + 2;
  Poly X = Poly::variable(n, m), Y = Poly::variable(n, m + 1);
  Poly pa = a.defining_poly(m).with_nvars(n).compose(m, Y);
  Poly pb = b.defining_poly(m).with_nvars(n).compose(m, X + X - Y);
  Poly r = resultant(pa, pb, m + 1).with_nvars(m + 1);
  if (r.is_zero()) throw std::logic_error("choice: degenerate midpoint resultant");
  Fiber fm(base, {r});
  while (true) {
    Interval ia = a.bounds(m), ib = b.bounds(m);
    Rational lo = (ia.lo + ib.lo) / 2, hi = (ia.hi + ib.hi) / 2;
    std::size_t first = (fm.locate(lo) - 1) / 2, last1 = fm.locate(hi) / 2;  // roots first..last1-1
    if (last1 == first + 1) return fm.root(first);
    a.refine(m, (ia.hi - ia.lo) / 2);
    b.refine(m, (ib.hi - ib.lo) / 2);
  }
}

std::vector<Rational> random_lambda(std::size_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-64, 64);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < p; ++i) out.push_back(ratio(num(rng), 16));
  return out;
}

}  // namespace

ChoiceValue ChoiceFunction::evaluate(const std::vector<Rational>& lambda) const {
  if (lambda.size() != param_dim) throw std::invalid_argument("choice: expected " + std::to_string(param_dim) + " parameters");
  ChoiceValue out;
  out.lambda = lambda;
  RealPoint base(lambda);
  for (std::size_t k = 0; k < fiber_dim; ++k) {
    const StepData& sd = *data[k];
    FiberCells fc = fiber_cells(sd, base);
    const std::size_t top = fc.in.size() - 1;
    std::size_t f = 1;
    while (f <= top && !fc.in[f]) ++f;
    if (f > top) throw EmptyFiberError("choice: empty fiber at coordinate " + std::to_string(k + 1));
    const bool a_inf = f == 1;
    // First cell of the run that must lie in X for (a, x) to be inside.
    std::size_t s = a_inf ? 1 : (f % 2 == 0 ? f + 1 : f);
    std::optional<std::size_t> b_root;  // 1-based root index of b
    bool b_inf = false;
    if (s > top || !fc.in[s]) {
      b_root = f / 2;  // a is an isolated point: b = a
    } else {
      std::size_t e = s;
      while (e + 1 <= top && fc.in[e + 1]) ++e;
      if (e == top) b_inf = true;
      else b_root = (e + 1) / 2;
    }
    ChoiceCase c = a_inf ? (b_inf ? ChoiceCase::A : ChoiceCase::B) : (b_inf ? ChoiceCase::C : ChoiceCase::D);
    out.cases.push_back(c);
    const Fiber& fb = fc.fiber;
    switch (c) {
      case ChoiceCase::A: base = base.extended(Rational(0)); break;
      case ChoiceCase::B: base = shifted_root(base, sd.polys, *b_root - 1, Rational(-1)); break;
      case ChoiceCase::C: base = shifted_root(base, sd.polys, f / 2 - 1, Rational(1)); break;
      case ChoiceCase::D:
        if (*b_root == f / 2) base = fb.root(f / 2 - 1);
        else base = midpoint(base, fb.root(f / 2 - 1), fb.root(*b_root - 1));
        break;
    }
  }
  out.point = base;
  return out;
}

ChoiceCase ChoiceFunction::region_of(std::size_t k, const std::vector<Rational>& lambda) const {
  const ChoiceStep& s = steps.at(k);
  EvalOptions eo;
  // Later coordinates nest the earlier graphs and blow past any exact budget.
  eo.exact_bound_vars = std::min<std::size_t>(kRegionBudget, std::max(bound_variables(s.unbounded_below.root).size(),
                                                                      bound_variables(s.unbounded_right.root).size()));
  Verdict lo = fdc::evaluate(s.unbounded_below, lambda, nullptr, eo);
  Verdict ri = fdc::evaluate(s.unbounded_right, lambda, nullptr, eo);
  if (lo.certainty != Certainty::Exact || ri.certainty != Certainty::Exact)
    throw std::runtime_error("choice: region predicates could not be decided exactly");
  return lo.value ? (ri.value ? ChoiceCase::A : ChoiceCase::B) : (ri.value ? ChoiceCase::C : ChoiceCase::D);
}

ChoiceFunction choice(const Formula& total, std::size_t fiber_dim, const ChoiceOptions& opts) {
  if (fiber_dim == 0 || fiber_dim > total.dimension())
    throw std::invalid_argument("choice: fiber dimension must be between 1 and the set's dimension");
  if (total.dimension() > opts.ceiling)
    throw CeilingError("choice: parameter plus fiber dimension " + std::to_string(total.dimension()) +
                       " exceeds ceiling " + std::to_string(opts.ceiling));
  ChoiceFunction g;
  g.total = total;
  g.fiber_dim = fiber_dim;
  g.param_dim = total.dimension() - fiber_dim;
  const std::size_t p = g.param_dim;
  const auto& names = total.free_vars;
  std::vector<std::string> lam(names.begin(), names.begin() + p);

  std::vector<std::string> taken = names;
  for (const auto& b : bound_variables(total.root)) taken.push_back(b);
  std::vector<std::pair<std::string, NodePtr>> graphs;  // chosen coordinates so far
  for (std::size_t k = 0; k < fiber_dim; ++k) {
    // Points (lambda, x_1..x_{k+1}) that extend to a point of the set.
    NodePtr adm = total.root;
    for (std::size_t j = fiber_dim; j-- > k + 1;) adm = f::exists(names[p + j], adm);
    std::vector<std::string> adm_vars(names.begin(), names.begin() + p + k + 1);
    auto sd = std::make_shared<ChoiceFunction::StepData>();
    sd->admissible = {adm_vars, adm};

    Prenex pr = prenex(sd->admissible);
    auto all = pr.all_vars();
    std::vector<Poly> polys;
    for (const Atom* a : atoms(pr.matrix)) polys.push_back(a->over(all));
    const std::size_t level = p + k;
    ProjectionSet ps = projection_factors(polys, all.size(), ProjectionKind::Collins, level);
    for (const auto& q : ps.levels[level]) sd->polys.push_back(q.with_nvars(level + 1));
    g.data.push_back(sd);

    // The family of coordinate k over (lambda, x): earlier coordinates are
    // fixed through their graphs.
    std::vector<std::string> fam_vars = lam;
    fam_vars.push_back(names[p + k]);
    NodePtr fam = adm;
    if (!graphs.empty()) {
      std::vector<NodePtr> parts;
      for (const auto& [v, gr] : graphs) parts.push_back(freshen_bound(gr, taken));
      parts.push_back(adm);
      fam = f::conj(parts);
      for (std::size_t j = graphs.size(); j-- > 0;) fam = f::exists(graphs[j].first, fam);
    }
    ChoiceStep step = StepBuilder(Formula{fam_vars, fam}).build(k);
    graphs.emplace_back(names[p + k], step.graph.root);
    g.steps.push_back(std::move(step));
  }
  std::vector<NodePtr> parts;
  for (const auto& [v, gr] : graphs) parts.push_back(gr);
  g.graph = {names, parts.size() == 1 ? parts[0] : f::conj(parts)};
  g.fd = fd_of_formula(g.graph);

  // Nonempty fibers.
  if (opts.strict) {
    NodePtr proj = total.root;
    for (std::size_t j = fiber_dim; j-- > 0;) proj = f::exists(names[p + j], proj);
    if (p == 0) {
      if (!evaluate(Formula{{}, proj}, RealPoint()).value) throw EmptyFiberError("choice: the set is empty");
    } else {
      CadOptions co;
      co.ceiling = opts.ceiling;
      CellDecomposition d = compatible_decomposition({Formula{lam, proj}}, p, co);
      for (std::size_t c = 0; c < d.size(); ++c)
        if (!d.member[c][0])
          throw EmptyFiberError("choice: empty fiber over parameters near " + d.cells()[c].sample.to_string());
    }
    g.certified_nonempty = true;
  } else {
    std::mt19937_64 rng(opts.seed);
    std::size_t n = p == 0 ? 1 : opts.samples;
    for (std::size_t i = 0; i < n; ++i) g.evaluate(random_lambda(p, rng));
  }
  return g;
}

ChoiceFunction choice_1d(const Formula& total, const ChoiceOptions& opts) { return choice(total, 1, opts); }

std::string exact_coordinate(const RealPoint& p, std::size_t i) {
  if (p.is_rational(i)) return to_string(p.rational(i));
  Interval b = p.bounds(i);
  auto names = default_names(p.dim());
  return "root of " + p.defining_poly(i).to_string(std::span<const std::string>(names.data(), i + 1)) + " in (" +
         to_string(b.lo) + ", " + to_string(b.hi) + ")";
}

namespace {

nlohmann::json fd_json(const FDPair& fd) { return {fd.format, fd.degree}; }

}  // namespace

nlohmann::json to_json(const ChoiceFunction& g) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : g.steps) {
    nlohmann::json regions, sections;
    for (int i = 0; i < 4; ++i) {
      std::string key(1, "ABCD"[i]);
      regions[key] = {{"formula", to_string(s.regions[i])}, {"fd", fd_json(s.region_fd[i])}};
      sections[key] = {{"formula", to_string(s.sections[i])}, {"fd", fd_json(s.section_fd[i])}};
    }
    steps.push_back({{"coordinate", s.coordinate + 1},
                     {"regions", regions},
                     {"sections", sections},
                     {"fd", fd_json(s.fd)}});
  }
  return {{"schema", "fdcalc.choice/1"},
          {"param_dim", g.param_dim},
          {"fiber_dim", g.fiber_dim},
          {"set", to_string(g.total)},
          {"steps", steps},
          {"fd", fd_json(g.fd)},
          {"fibers_certified_nonempty", g.certified_nonempty}};
}

nlohmann::json to_json(const ChoiceValue& v) {
  nlohmann::json lam = nlohmann::json::array(), exact = nlohmann::json::array(), approx = nlohmann::json::array(),
                 cases = nlohmann::json::array();
  for (const auto& q : v.lambda) lam.push_back(to_string(q));
  auto ap = v.point.approx();
  for (std::size_t i = v.lambda.size(); i < v.point.dim(); ++i) {
    exact.push_back(exact_coordinate(v.point, i));
    approx.push_back(ap[i]);
  }
  for (auto c : v.cases) cases.push_back(std::string(1, case_letter(c)));
  return {{"schema", "fdcalc.choice-value/1"}, {"lambda", lam}, {"cases", cases}, {"value", exact}, {"approx", approx}};
}

}  // namespace fdc
