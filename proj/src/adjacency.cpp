#include "fdcalc/fd.hpp"
#include "fdcalc/syntax.hpp"
#include "fdcalc/topology.hpp"
#include "fdcalc/upoly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace fdc {

namespace {

std::vector<Poly> level_polys(const CellDecomposition& d, std::size_t k) {
  std::vector<Poly> out;
  for (const auto& p : d.projection.levels[k]) out.push_back(p.with_nvars(k + 1));
  return out;
}

struct Stack {
  std::size_t begin, end;
};

Stack stack_of(const CellDecomposition& d, std::size_t k, std::size_t parent) {
  if (k == 0) return {0, d.layers[0].size()};
  const Cell& p = d.layers[k - 1][parent];
  return {p.child_begin, p.child_end};
}

std::size_t find_index(const CellDecomposition& d, std::size_t k, Stack s, std::uint32_t idx) {
  for (std::size_t i = s.begin; i < s.end; ++i)
    if (d.layers[k][i].index.back() == idx) return i;
  return npos;
}

// Where the root functions of a stack go when the base approaches a cell in
// its closure. pos[0] stands for -infinity, pos[N+1] for +infinity; in
// between, pos[i] is the cell index (in the target stack) of the limit of the
// i-th root function: 2m for the m-th root, 0 or 2n+2 when it escapes.
struct Limits {
  std::vector<std::uint32_t> pos;
  std::uint32_t n = 0;  // roots over the target cell
};

// Counts roots of the approach fiber below each separator of the target fiber.
Limits match_roots(const Fiber& target, const Fiber& approach) {
  const std::size_t n = target.size(), N = approach.size();
  std::vector<std::size_t> below(n + 1);
  for (std::size_t m = 0; m <= n; ++m) below[m] = (approach.locate(target.gap_point(m)) - 1) / 2;
  Limits L;
  L.n = static_cast<std::uint32_t>(n);
  L.pos.assign(N + 2, 0);
  L.pos[N + 1] = 2 * L.n + 2;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t m = 0;
    while (m <= n && below[m] <= k) ++m;
    if (m == 0)
      L.pos[k + 1] = 0;
    else if (m > n)
      L.pos[k + 1] = 2 * L.n + 2;
    else
      L.pos[k + 1] = static_cast<std::uint32_t>(2 * m);
  }
  return L;
}

// R^2: the base is a sector of the line and the target one of its endpoints.
// A rational x* between the endpoint and the nearest root of any f(x, c_m)
// (c_m separating the roots over the endpoint) certifies that no root
// function crosses a separator on the way, so the separators read at x* give
// the limits.
Limits exact_limits(const CellDecomposition& d, std::size_t sector, std::size_t point) {
  auto polys = level_polys(d, 1);
  const RealPoint& p = d.layers[0][point].sample;
  Fiber target(p, polys);
  std::vector<std::vector<UPoly>> chains;
  for (std::size_t m = 0; m <= target.size(); ++m) {
    Rational c = target.gap_point(m);
    for (const auto& f : polys) {
      UPoly g = UPoly::from_poly(f.substitute(1, c), 0);
      if (g.degree() > 0) chains.push_back(sturm_chain(squarefree_part(g)));
    }
  }
  UPoly H(std::vector<Rational>{Rational(1)});
  for (const auto& q : level_polys(d, 0)) H = H * UPoly::from_poly(q, 0);
  auto Hc = sturm_chain(squarefree_part(H));
  auto isolated = [&](const Rational& lo, const Rational& hi) {
    if (H.sign_at(lo) == 0 || sturm_count(Hc, lo, hi) != 1) return false;
    for (const auto& ch : chains)
      if (ch[0].sign_at(lo) == 0 || sturm_count(ch, lo, hi) != 0) return false;
    return true;
  };
  Rational lo, hi;
  if (p.is_rational(0)) {
    Rational v = p.rational(0), delta(1);
    while (!isolated(v - delta, v + delta)) delta /= 2;
    lo = v - delta;
    hi = v + delta;
  } else {
    while (true) {
      Interval b = p.bounds(0);
      if (isolated(b.lo, b.hi)) {
        lo = b.lo;
        hi = b.hi;
        break;
      }
      p.refine(0, (b.hi - b.lo) / 2);
    }
  }
  bool sector_left = d.layers[0][sector].index[0] < d.layers[0][point].index[0];
  Fiber approach(RealPoint({sector_left ? lo : hi}), polys);
  return match_roots(target, approach);
}

// A point of cell `cell` (layer k) near q, walking down the index path.
RealPoint approach_point(const CellDecomposition& d, std::size_t k, std::size_t cell, const RealPoint& q,
                         const Rational& t) {
  std::vector<std::size_t> chain(k + 1);
  for (std::size_t j = k + 1; j-- > 0;) {
    chain[j] = cell;
    cell = d.layers[j][cell].parent;
  }
  RealPoint pt;
  for (std::size_t j = 0; j <= k; ++j) {
    std::uint32_t idx = d.layers[j][chain[j]].index.back();
    Fiber fb(pt, level_polys(d, j));
    if (idx % 2 == 0) {
      pt = fb.root(idx / 2 - 1);
      continue;
    }
    q.refine(j, t / 16);
    Interval b = q.bounds(j);
    Rational mid = (b.lo + b.hi) / 2;
    std::size_t at = fb.locate(mid);
    std::size_t gap = (idx - 1) / 2;
    if (at == idx)
      pt = pt.extended(mid);
    else
      pt = pt.extended(fb.gap_random(gap, at < idx ? 1e-5 : 1 - 1e-5));
  }
  return pt;
}

Limits approach_limits(const CellDecomposition& d, std::size_t k, std::size_t base, std::size_t target) {
  auto polys = level_polys(d, k);
  const RealPoint& q = d.layers[k - 1][target].sample;
  Fiber tf(q, polys);
  RealPoint a = approach_point(d, k - 1, base, q, Rational(1, 1 << 16));
  Fiber af(a, polys);
  return match_roots(tf, af);
}

void add_unique(std::vector<std::size_t>& v, std::size_t x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

Formula union_of_cells(const CellDecomposition& d, const std::vector<std::size_t>& cells) {
  std::vector<NodePtr> parts;
  for (std::size_t c : cells) parts.push_back(d.cell_formula(c).root);
  auto names = default_names(d.dim);
  if (parts.empty()) return Formula{names, f::falsity()};
  return Formula{names, parts.size() == 1 ? parts[0] : f::disj(parts)};
}

double eval_linear(const std::vector<Rational>& c, const std::vector<double>& x) {
  double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += to_double(c[i]) * x[i];
  return s;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < neighbours.size(); ++a)
    for (std::size_t b : neighbours[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

bool AdjacencyGraph::adjacent(std::size_t a, std::size_t b) const {
  return std::binary_search(neighbours.at(a).begin(), neighbours.at(a).end(), b);
}

AdjacencyGraph adjacency(const CellDecomposition& d) {
  if (d.dim == 0 || d.layers.empty()) throw std::invalid_argument("adjacency: empty decomposition");
  if (d.dim > 3) throw CeilingError("adjacency: supported up to R^3, got R^" + std::to_string(d.dim));
  std::vector<std::vector<std::vector<std::size_t>>> cl(d.dim);
  std::vector<std::vector<bool>> bounded(d.dim);
  for (std::size_t k = 0; k < d.dim; ++k) {
    const auto& layer = d.layers[k];
    cl[k].assign(layer.size(), {});
    bounded[k].assign(layer.size(), false);
    std::size_t nparents = k == 0 ? 1 : d.layers[k - 1].size();
    for (std::size_t P = 0; P < nparents; ++P) {
      Stack s = stack_of(d, k, P);
      if (s.begin == s.end) continue;
      const std::uint32_t N = layer[s.begin].stack_roots;
      // Within the stack: a sector's closure holds the sections around it.
      for (std::size_t c = s.begin; c < s.end; ++c) {
        std::uint32_t j = layer[c].index.back();
        if (j % 2 == 0) continue;
        for (std::uint32_t nb : {j - 1, j + 1})
          if (nb >= 1) {
            std::size_t o = find_index(d, k, s, nb);
            if (o != npos) cl[k][c].push_back(o);
          }
      }
      std::vector<bool> fin(N + 2, k == 0 || bounded[k - 1][P]);
      fin[0] = fin[N + 1] = false;
      if (k > 0)
        for (std::size_t Pt : cl[k - 1][P]) {
          Limits L = k == 1 ? exact_limits(d, P, Pt) : approach_limits(d, k, P, Pt);
          if (L.pos.size() != N + 2) throw std::logic_error("adjacency: root count mismatch near a boundary cell");
          Stack ts = stack_of(d, k, Pt);
          const std::uint32_t top = 2 * L.n + 1;
          for (std::uint32_t i = 1; i <= N; ++i)
            if (L.pos[i] == 0 || L.pos[i] > top) fin[i] = false;
          for (std::size_t c = s.begin; c < s.end; ++c) {
            std::uint32_t j = layer[c].index.back();
            std::uint32_t lo, hi;
            if (j % 2 == 0) {
              lo = hi = L.pos[j / 2];
            } else {
              lo = std::max<std::uint32_t>(L.pos[(j - 1) / 2], 1);
              hi = std::min(L.pos[(j + 1) / 2], top);
            }
            for (std::uint32_t idx = lo; idx <= hi; ++idx) {
              if (idx == 0 || idx > top) continue;
              std::size_t o = find_index(d, k, ts, idx);
              if (o != npos) add_unique(cl[k][c], o);
            }
          }
        }
      for (std::size_t c = s.begin; c < s.end; ++c) {
        std::uint32_t j = layer[c].index.back();
        bounded[k][c] = j % 2 == 0 ? fin[j / 2] : fin[(j - 1) / 2] && fin[(j + 1) / 2];
      }
    }
  }
  AdjacencyGraph g;
  g.dim = d.dim;
  g.certified = d.dim <= 2;
  g.closure = cl.back();
  for (auto& c : g.closure) std::sort(c.begin(), c.end());
  g.bounded = bounded.back();
  g.neighbours.assign(d.size(), {});
  for (std::size_t c = 0; c < d.size(); ++c)
    for (std::size_t o : g.closure[c]) {
      g.neighbours[c].push_back(o);
      g.neighbours[o].push_back(c);
    }
  for (auto& n : g.neighbours) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return g;
}

ComponentResult connected_components(const Formula& X, const CadOptions& opts) {
  ComponentResult r;
  r.decomposition = compatible_decomposition({X}, X.dimension(), opts);
  const auto& d = r.decomposition;
  r.graph = adjacency(d);
  r.certified = r.graph.certified;
  r.inside.assign(d.size(), false);
  for (std::size_t c = 0; c < d.size(); ++c) r.inside[c] = d.member[c][0];
  UnionFind uf(d.size());
  for (auto [a, b] : r.graph.edges())
    if (r.inside[a] && r.inside[b]) uf.unite(a, b);
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (!r.inside[c]) continue;
    auto [it, fresh] = slot.emplace(uf.find(c), r.components.size());
    if (fresh) r.components.emplace_back();
    r.components[it->second].cells.push_back(c);
  }
  for (auto& comp : r.components) {
    comp.formula = union_of_cells(d, comp.cells);
    comp.fd = fd_of_formula(comp.formula);
  }
  return r;
}

double envelope_exponent(const std::map<unsigned, std::size_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("envelope_exponent: no data");
  auto [D0, n0] = *counts.begin();
  if (D0 == 0) throw std::invalid_argument("envelope_exponent: degrees must be positive");
  double c0 = static_cast<double>(std::max<std::size_t>(n0, 1));
  double e = 0;
  for (auto [D, n] : counts) {
    if (D == D0) continue;
    double v = std::log(static_cast<double>(std::max<std::size_t>(n, 1)) / c0) / std::log(double(D) / D0);
    e = std::max(e, v);
  }
  return e;
}

double loglog_slope(const std::map<unsigned, std::size_t>& counts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (auto [D, n] : counts) {
    if (D == 0) continue;
    double x = std::log(double(D)), y = std::log(double(std::max<std::size_t>(n, 1)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  double den = m * sxx - sx * sx;
  if (m < 2 || den == 0) return 0;
  return (m * sxy - sx * sy) / den;
}

std::string ComponentBoundReport::table() const {
  std::ostringstream os;
  os << "degree  components\n";
  for (auto [D, n] : counts) os << std::setw(6) << D << "  " << std::setw(10) << n << "\n";
  os << std::fixed << std::setprecision(3) << "envelope exponent " << exponent << " (cap " << to_string(cap)
     << "), least-squares slope " << slope << "\n";
  if (witness) {
    const auto& w = *witness;
    os << "local maxima witness on degree " << w.degree << ": f =";
    for (std::size_t i = 0; i < w.functional.size(); ++i) os << (i ? " + " : " ") << to_string(w.functional[i]) << "*x" << i;
    std::size_t met = static_cast<std::size_t>(std::count(w.meets.begin(), w.meets.end(), true));
    os << "; no open-cell maximum: " << (w.lower_dimensional ? "yes" : "no") << "; sampled maximum inside "
       << met << " of " << w.meets.size() << " components\n";
  }
  os << (passes ? "PASS" : "FAIL") << "\n";
  return os.str();
}

ComponentBoundReport check_component_bound(const std::map<unsigned, Formula>& family, const Rational& cap,
                                           const CadOptions& opts, std::uint64_t seed) {
  if (family.empty()) throw std::invalid_argument("check_component_bound: empty family");
  ComponentBoundReport rep;
  rep.cap = cap;
  std::optional<ComponentResult> last;
  for (const auto& [D, X] : family) {
    auto r = connected_components(X, opts);
    rep.counts[D] = r.components.size();
    last = std::move(r);
  }
  rep.exponent = envelope_exponent(rep.counts);
  rep.slope = loglog_slope(rep.counts);
  rep.passes = rep.exponent <= to_double(cap) + 1e-12;

  const auto& r = *last;
  const auto& d = r.decomposition;
  MaximaWitness w;
  w.degree = family.rbegin()->first;
  for (std::size_t i = 0; i < d.dim; ++i) w.functional.push_back(Rational(1, static_cast<long>(std::pow(3, i))));
  // An open cell cannot hold a local maximum of a nonconstant linear map:
  // stepping along the gradient stays in the cell and increases f.
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (!r.inside[c] || d.cells()[c].dimension() != d.dim) continue;
    auto s = d.cells()[c].sample.rationals();
    bool moved = false;
    for (Rational eps(1, 1024); !moved && eps > Rational(1, 1 << 30); eps /= 2) {
      auto t = s;
      for (std::size_t i = 0; i < t.size(); ++i) t[i] += eps * w.functional[i];
      moved = d.locate(t) == c;
    }
    if (!moved) w.lower_dimensional = false;
  }
  std::mt19937_64 rng(seed);
  for (const auto& comp : r.components) {
    std::vector<std::size_t> cand = comp.cells;
    for (std::size_t c : comp.cells)
      for (std::size_t o : r.graph.closure[c]) add_unique(cand, o);
    std::size_t best = npos;
    double best_v = -INFINITY;
    for (std::size_t c : cand) {
      double v = eval_linear(w.functional, d.cells()[c].sample.approx());
      for (int i = 0; i < 8 && d.cells()[c].dimension() > 0; ++i)
        v = std::max(v, eval_linear(w.functional, d.random_point(c, rng).approx()));
      if (v > best_v) {
        best_v = v;
        best = c;
      }
    }
    w.argmax_cell.push_back(best);
    w.meets.push_back(std::find(comp.cells.begin(), comp.cells.end(), best) != comp.cells.end());
  }
  rep.witness = std::move(w);
  return rep;
}

Stratification stratify(const Formula& X, const CadOptions& opts) {
  Stratification s;
  s.decomposition = compatible_decomposition({X}, X.dimension(), opts);
  const auto& d = s.decomposition;
  s.inside.assign(d.size(), false);
  std::map<std::size_t, std::vector<std::size_t>, std::greater<>> groups;
  for (std::size_t c = 0; c < d.size(); ++c) {
    s.inside[c] = d.member[c][0];
    if (s.inside[c]) groups[d.cells()[c].dimension()].push_back(c);
  }
  for (auto& [dim, cells] : groups) {
    Stratum st;
    st.dim = dim;
    st.cells = std::move(cells);
    st.formula = union_of_cells(d, st.cells);
    st.fd = fd_of_formula(st.formula);
    s.strata.push_back(std::move(st));
  }
  return s;
}

bool smoothness_probe(const CellDecomposition& d, std::size_t cell, std::size_t samples, std::uint64_t seed) {
  const Cell& c = d.cells().at(cell);
  // Only graphs over an interval carry a nontrivial root function here.
  if (d.dim != 2 || c.index[0] % 2 == 0 || c.index[1] % 2 == 1) return true;
  std::size_t base = c.parent;
  std::optional<Rational> A, B;
  if (base > 0) A = d.layers[0][base - 1].sample.bounds(0).hi;
  if (base + 1 < d.layers[0].size()) B = d.layers[0][base + 1].sample.bounds(0).lo;
  if (!A && !B) {
    A = Rational(-4);
    B = Rational(4);
  } else if (!A) {
    A = *B - 8;
  } else if (!B) {
    B = *A + 8;
  }
  Rational w = *B - *A;
  Rational h = std::min(Rational(w / 16), Rational(1, 32));
  auto polys = level_polys(d, 1);
  std::size_t r = c.index[1] / 2 - 1;
  auto y = [&](const Rational& x) {
    Fiber fb(RealPoint({x}), polys);
    const RealPoint& p = fb.root(r);
    p.refine(1, Rational(1, 1L << 40));
    return p.approx()[1];
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pos(0, 1000);
  for (std::size_t s = 0; s < samples; ++s) {
    Rational x0 = *A + w * (Rational(1, 4) + ratio(pos(rng), 2000));
    double hd = to_double(h);
    double y0 = y(x0);
    double d1 = (y(x0 + h) - 2 * y0 + y(x0 - h)) / (hd * hd);
    double d2 = (y(x0 + h / 2) - 2 * y0 + y(x0 - h / 2)) / (hd * hd / 4);
    if (!std::isfinite(d1) || !std::isfinite(d2)) return false;
    if (std::abs(d1 - d2) > 0.05 * (1 + std::abs(d1) + std::abs(d2))) return false;
  }
  return true;
}

nlohmann::json to_json(const ComponentResult& r) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components)
    comps.push_back({{"cells", c.cells}, {"fd", {c.fd.format, c.fd.degree}}, {"formula", to_string(c.formula)}});
  return {{"schema", "fdcalc.components/1"},
          {"dim", r.decomposition.dim},
          {"cells", r.decomposition.size()},
          {"certified", r.certified},
          {"count", r.components.size()},
          {"components", comps}};
}

nlohmann::json to_json(const Stratification& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& st : s.strata)
    out.push_back({{"dim", st.dim}, {"cells", st.cells}, {"fd", {st.fd.format, st.fd.degree}}});
  return {{"schema", "fdcalc.strata/1"}, {"dim", s.decomposition.dim}, {"strata", out}};
}

}  // namespace fdc
