#include "fdcalc/topology.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fdc {

namespace {

// Shrinks the enclosing interval of coordinate k until it sits strictly
// between lo and hi, then returns its midpoint. Keeps the order of the model
// coordinates equal to the order of the real ones.
Rational model_coord(const RealPoint& p, std::size_t k, const std::optional<Rational>& lo,
                     const std::optional<Rational>& hi) {
  if (p.is_rational(k)) return p.rational(k);
  while (true) {
    Interval b = p.bounds(k);
    bool ok = (!lo || b.lo > *lo) && (!hi || b.hi < *hi) && b.hi - b.lo < Rational(1, 1 << 20);
    if (ok) return (b.lo + b.hi) / 2;
    p.refine(k, (b.hi - b.lo) / 2);
  }
}

// Model coordinate of a section cell, kept between the samples of its stack neighbours.
Rational section_coord(const CellDecomposition& d, std::size_t k, std::size_t c) {
  const auto& layer = d.layers[k];
  std::uint32_t j = layer[c].index.back();
  std::optional<Rational> lo, hi;
  auto same_stack = [&](std::size_t o) { return k == 0 || layer[o].parent == layer[c].parent; };
  if (c > 0 && same_stack(c - 1) && layer[c - 1].index.back() == j - 1) lo = layer[c - 1].sample.rational(k);
  if (c + 1 < layer.size() && same_stack(c + 1) && layer[c + 1].index.back() == j + 1)
    hi = layer[c + 1].sample.rational(k);
  return model_coord(layer[c].sample, k, lo, hi);
}

struct Builder {
  SimplicialComplex K;
  std::vector<RealPoint> images;
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::size_t> owner;  // cell of each simplex

  std::size_t vertex(std::vector<Rational> model, RealPoint image, std::size_t cell) {
    std::size_t v = K.vertices.size();
    K.vertices.push_back(std::move(model));
    images.push_back(std::move(image));
    add({v}, cell);
    return v;
  }
  std::size_t add(std::vector<std::size_t> s, std::size_t cell) {
    std::sort(s.begin(), s.end());
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    std::size_t id = K.simplices.size();
    index.emplace(s, id);
    K.simplices.push_back(std::move(s));
    owner.push_back(cell);
    return id;
  }
  std::size_t find(std::vector<std::size_t> s) const {
    std::sort(s.begin(), s.end());
    return index.at(s);
  }
};

// Closure cell of c lying over the given base cell (or in the same stack when base == parent).
std::size_t closure_over(const AdjacencyGraph& g, const CellDecomposition& d, std::size_t c, std::size_t base,
                         bool section) {
  for (std::size_t o : g.closure[c]) {
    const Cell& cell = d.cells()[o];
    if (cell.parent == base && (cell.index.back() % 2 == 0) == section) return o;
  }
  throw std::logic_error("triangulate: missing boundary cell");
}

Rational column_coord(const CellDecomposition& d, std::size_t base) { return section_coord(d, 0, base); }

}  // namespace

std::size_t SimplicialComplex::count(std::size_t dim) const {
  return static_cast<std::size_t>(
      std::count_if(simplices.begin(), simplices.end(), [&](const auto& s) { return s.size() == dim + 1; }));
}

std::string SimplicialComplex::validate() const {
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (const auto& v : vertices)
    if (v.size() != ambient) return "vertex with " + std::to_string(v.size()) + " coordinates in R^" + std::to_string(ambient);
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    const auto& s = simplices[i];
    if (s.empty() || s.size() > 3) return "simplex " + std::to_string(i) + " has dimension outside 0..2";
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] >= vertices.size()) return "simplex " + std::to_string(i) + " uses an unknown vertex";
      if (j > 0 && s[j] <= s[j - 1]) return "simplex " + std::to_string(i) + " is not a sorted set of distinct vertices";
    }
    if (!seen.emplace(s, i).second) return "simplex " + std::to_string(i) + " is listed twice";
  }
  for (const auto& s : simplices) {
    if (s.size() == 1) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<std::size_t> f;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != drop) f.push_back(s[j]);
      if (!seen.count(f)) return "complex is not closed under faces";
    }
  }
  if (!labels.empty() && labels.size() != simplices.size()) return "label list does not match the simplices";
  return {};
}

Triangulation triangulate(const Formula& X, const std::vector<Formula>& subsets, const CadOptions& opts) {
  const std::size_t l = X.dimension();
  if (l == 0 || l > 2) throw std::invalid_argument("triangulate: supported in R^1 and R^2");
  std::vector<Formula> sets{X};
  for (const auto& s : subsets) {
    if (s.dimension() != l) throw std::invalid_argument("triangulate: subset of the wrong dimension");
    sets.push_back(s);
  }
  CadOptions o = opts;
  o.unit_box = false;
  Triangulation T;
  T.decomposition = compatible_decomposition(sets, l, o);
  const auto& d = T.decomposition;
  AdjacencyGraph g = adjacency(d);
  auto in = [&](std::size_t c) { return static_cast<bool>(d.member[c][0]); };
  for (std::size_t c = 0; c < d.size(); ++c) {
    for (std::size_t s = 1; s < sets.size(); ++s)
      if (d.member[c][s] && !in(c)) throw std::invalid_argument("triangulate: subset " + std::to_string(s) + " is not inside X");
    if (!in(c)) continue;
    if (!g.bounded[c]) throw std::invalid_argument("triangulate: X is not bounded");
    for (std::size_t b : g.closure[c])
      if (!in(b)) throw std::invalid_argument("triangulate: X is not closed");
  }

  Builder B;
  B.K.ambient = l;
  std::vector<std::size_t> vert(d.size(), npos);  // vertex of a 0-cell, or midpoint/center vertex
  std::vector<std::vector<std::size_t>> owned(d.size());
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (in(c)) order.push_back(c);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.cells()[a].dimension() < d.cells()[b].dimension(); });

  for (std::size_t c : order) {
    const Cell& cell = d.cells()[c];
    CellImage img;
    img.cell = c;
    if (l == 1) {
      if (cell.index[0] % 2 == 0) {
        img.kind = "point";
        vert[c] = B.vertex({column_coord(d, c)}, cell.sample, c);
      } else {
        img.kind = "segment";
        B.add({vert[c - 1], vert[c + 1]}, c);
      }
    } else {
      bool xsec = cell.index[0] % 2 == 0, ysec = cell.index[1] % 2 == 0;
      std::size_t base = cell.parent;
      if (xsec && ysec) {
        img.kind = "point";
        vert[c] = B.vertex({column_coord(d, base), section_coord(d, 1, c)}, cell.sample, c);
      } else if (xsec) {
        img.kind = "segment";
        B.add({vert[c - 1], vert[c + 1]}, c);
      } else if (ysec) {
        img.kind = "graph";
        std::size_t L = closure_over(g, d, c, base - 1, true), R = closure_over(g, d, c, base + 1, true);
        // A lone arc over its interval is one straight edge; otherwise a
        // midpoint keeps the model arcs from crossing.
        const Cell& bc = d.layers[0][base];
        bool alone = true;
        for (std::size_t o = bc.child_begin; o < bc.child_end; ++o)
          if (o != c && in(o)) alone = false;
        if (alone) {
          B.add({vert[L], vert[R]}, c);
        } else {
          Rational xs = bc.sample.rational(0);
          vert[c] = B.vertex({xs, section_coord(d, 1, c)}, cell.sample, c);
          B.add({vert[L], vert[c]}, c);
          B.add({vert[c], vert[R]}, c);
        }
        Poly p = Poly::constant(2, 1);
        for (const auto& q : d.fiber_polys(1, base)) p *= q;
        img.section_poly = p.normalized();
        img.root_index = cell.index[1] / 2;
      } else {
        img.kind = "band";
        const auto& s = cell.sample;
        vert[c] = B.vertex({s.rational(0), s.rational(1)}, s, c);
        std::size_t lo = c - 1, hi = c + 1;  // bounding graphs in the same stack
        // Boundary cycle: bottom graph left to right, right column upwards,
        // top graph right to left, left column downwards.
        std::vector<std::size_t> cycle;
        auto column = [&](std::size_t side, std::size_t from, std::size_t to) {
          std::vector<std::size_t> pts;
          for (std::size_t o : g.closure[c]) {
            const Cell& oc = d.cells()[o];
            if (oc.parent == side && oc.index[1] % 2 == 0) pts.push_back(o);
          }
          std::sort(pts.begin(), pts.end());
          if (d.cells()[from].index[1] > d.cells()[to].index[1]) std::reverse(pts.begin(), pts.end());
          return pts;
        };
        std::size_t Lb = closure_over(g, d, lo, base - 1, true), Rb = closure_over(g, d, lo, base + 1, true);
        std::size_t Lt = closure_over(g, d, hi, base - 1, true), Rt = closure_over(g, d, hi, base + 1, true);
        cycle.push_back(vert[lo]);
        for (std::size_t v : column(base + 1, Rb, Rt)) cycle.push_back(vert[v]);
        cycle.push_back(vert[hi]);
        for (std::size_t v : column(base - 1, Lt, Lb)) cycle.push_back(vert[v]);
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          std::size_t a = cycle[i], b = cycle[(i + 1) % cycle.size()];
          B.add({vert[c], a}, c);
          B.add({vert[c], a, b}, c);
        }
      }
    }
    T.cells.push_back(std::move(img));
  }
  for (std::size_t s = 0; s < B.owner.size(); ++s) owned[B.owner[s]].push_back(s);
  for (auto& img : T.cells) img.simplices = owned[img.cell];
  B.K.labels.resize(B.K.simplices.size());
  for (std::size_t s = 0; s < B.K.simplices.size(); ++s)
    for (std::size_t k = 0; k < sets.size(); ++k)
      if (d.member[B.owner[s]][k]) B.K.labels[s].push_back(k);
  T.complex = std::move(B.K);
  T.vertex_images = std::move(B.images);
  std::string err = T.complex.validate();
  if (!err.empty()) throw std::logic_error("triangulate produced an invalid complex: " + err);
  return T;
}

namespace {

using Column = std::vector<std::pair<std::size_t, Rational>>;  // sorted by row

// Rank by column reduction on the lowest nonzero row.
std::size_t rank(std::vector<Column> cols) {
  std::map<std::size_t, std::size_t> pivot;  // low row -> column
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Column& c = cols[j];
    while (!c.empty()) {
      auto it = pivot.find(c.back().first);
      if (it == pivot.end()) break;
      const Column& p = cols[it->second];
      Rational f = c.back().second / p.back().second;
      Column out;
      std::size_t a = 0, b = 0;
      while (a < c.size() || b < p.size()) {
        if (b == p.size() || (a < c.size() && c[a].first < p[b].first)) {
          out.push_back(c[a++]);
        } else if (a == c.size() || p[b].first < c[a].first) {
          out.emplace_back(p[b].first, -f * p[b].second);
          ++b;
        } else {
          Rational v = c[a].second - f * p[b].second;
          if (v != 0) out.emplace_back(c[a].first, v);
          ++a;
          ++b;
        }
      }
      c = std::move(out);
    }
    if (!c.empty()) {
      pivot.emplace(c.back().first, j);
      ++r;
    }
  }
  return r;
}

}  // namespace

std::vector<std::size_t> betti(const SimplicialComplex& K) {
  std::string err = K.validate();
  if (!err.empty()) throw std::invalid_argument("betti: " + err);
  std::map<std::vector<std::size_t>, std::size_t> id[3];
  for (const auto& s : K.simplices) {
    auto& m = id[s.size() - 1];
    m.emplace(s, m.size());
  }
  std::vector<Column> d1, d2;
  for (const auto& [s, i] : id[1]) d1.push_back({{id[0].at({s[0]}), Rational(-1)}, {id[0].at({s[1]}), Rational(1)}});
  for (const auto& [s, i] : id[2]) {
    Column c{{id[1].at({s[1], s[2]}), Rational(1)}, {id[1].at({s[0], s[2]}), Rational(-1)}, {id[1].at({s[0], s[1]}), Rational(1)}};
    std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    d2.push_back(std::move(c));
  }
  std::size_t r1 = rank(std::move(d1)), r2 = rank(std::move(d2));
  std::size_t V = id[0].size(), E = id[1].size(), F = id[2].size();
  return {V - r1, E - r1 - r2, F - r2};
}

std::string to_off(const SimplicialComplex& K) {
  std::vector<std::vector<std::size_t>> faces;
  std::vector<bool> covered(K.vertices.size(), false);
  std::map<std::vector<std::size_t>, bool> edge_used;
  for (const auto& s : K.simplices)
    if (s.size() == 3) {
      faces.push_back(s);
      edge_used[{s[0], s[1]}] = edge_used[{s[0], s[2]}] = edge_used[{s[1], s[2]}] = true;
    }
  for (const auto& s : K.simplices)
    if (s.size() == 2 && !edge_used.count(s)) faces.push_back(s);
  for (const auto& s : K.simplices)
    for (std::size_t v : s)
      if (s.size() > 1) covered[v] = true;
  for (std::size_t v = 0; v < K.vertices.size(); ++v)
    if (!covered[v]) faces.push_back({v});
  std::ostringstream os;
  os << "OFF\n" << K.vertices.size() << " " << faces.size() << " 0\n";
  for (const auto& v : K.vertices) {
    for (std::size_t i = 0; i < 3; ++i) os << (i ? " " : "") << (i < v.size() ? to_decimal(v[i], 9) : "0");
    os << "\n";
  }
  for (const auto& f : faces) {
    os << f.size();
    for (std::size_t v : f) os << " " << v;
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const SimplicialComplex& K) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : K.vertices) {
    nlohmann::json p = nlohmann::json::array();
    for (const auto& x : v) p.push_back(to_string(x));
    verts.push_back(p);
  }
  return {{"schema", "fdcalc.complex/1"},
          {"ambient", K.ambient},
          {"vertices", verts},
          {"simplices", K.simplices},
          {"labels", K.labels}};
}

SimplicialComplex complex_from_json(const nlohmann::json& j) {
  SimplicialComplex K;
  K.ambient = j.at("ambient").get<std::size_t>();
  for (const auto& v : j.at("vertices")) {
    std::vector<Rational> p;
    for (const auto& x : v) p.push_back(parse_rational(x.get<std::string>()));
    K.vertices.push_back(std::move(p));
  }
  K.simplices = j.at("simplices").get<std::vector<std::vector<std::size_t>>>();
  if (j.contains("labels")) K.labels = j.at("labels").get<std::vector<std::vector<std::size_t>>>();
  std::string err = K.validate();
  if (!err.empty()) throw std::invalid_argument("complex: " + err);
  return K;
}

}  // namespace fdc
