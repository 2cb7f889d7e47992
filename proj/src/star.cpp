#include "fdcalc/choice.hpp"
#include "fdcalc/fd.hpp"
#include "fdcalc/syntax.hpp"
#include "fdcalc/topology.hpp"

#include <map>
#include <numeric>

namespace fdc {

FDPair star_fd(const StarRep& r) {
  if (r.entries.empty()) throw std::invalid_argument("star_fd: empty representation");
  FDPair out{0, 0};
  for (const auto& e : r.entries) {
    if (e.source.dimension() < r.dim) throw std::invalid_argument("star_fd: source of lower dimension than target");
    out.format = std::max(out.format, e.fd.format);
    out.degree += e.fd.degree;
  }
  return out;
}

StarRep star_union(const StarRep& a, const StarRep& b) {
  if (a.dim != b.dim) throw std::invalid_argument("star_union: dimension mismatch");
  StarRep out = a;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

namespace {

CadOptions component_opts(const CadOptions& opts) {
  CadOptions o = opts;
  o.unit_box = false;
  return o;
}

std::size_t ancestor(const CellDecomposition& d, std::size_t level, std::size_t cell, std::size_t target) {
  for (std::size_t k = level; k > target; --k) cell = d.layers[k - 1][cell].parent;
  return cell;
}

std::vector<std::size_t> component_of_cell(const ComponentResult& r) {
  std::vector<std::size_t> comp(r.decomposition.size(), npos);
  for (std::size_t i = 0; i < r.components.size(); ++i)
    for (auto c : r.components[i].cells) comp[c] = i;
  return comp;
}

}  // namespace

StarRep to_star(const Formula& X, const FDPair& fd, const CadOptions& opts) {
  ComponentResult r = connected_components(X, component_opts(opts));
  StarRep out;
  out.dim = X.dimension();
  if (r.components.empty()) out.entries.push_back({X, fd, std::nullopt});
  for (std::size_t i = 0; i < r.components.size(); ++i) out.entries.push_back({X, fd, i});
  return out;
}

std::optional<std::size_t> component_containing(const Formula& X, const std::vector<Rational>& pt,
                                                const CadOptions& opts) {
  ComponentResult r = connected_components(X, component_opts(opts));
  std::size_t c = r.decomposition.locate(pt);
  if (c == npos || !r.inside[c]) return std::nullopt;
  return component_of_cell(r)[c];
}

bool star_member(const StarRep& r, const std::vector<Rational>& pt, const CadOptions& opts) {
  if (pt.size() != r.dim) throw std::invalid_argument("star_member: point dimension");
  for (const auto& e : r.entries) {
    if (!e.component) continue;
    ComponentResult cr = connected_components(e.source, component_opts(opts));
    const auto& d = cr.decomposition;
    std::size_t target = d.locate_in(pt, r.dim);
    if (target == npos) continue;
    for (auto c : cr.components.at(*e.component).cells)
      if (ancestor(d, d.dim, c, r.dim) == target) return true;
  }
  return false;
}

StarDecomposition star_ccd(const std::vector<StarRep>& sets, std::size_t n, const CadOptions& opts) {
  if (n == 0) throw std::invalid_argument("star_ccd: n must be positive");
  std::size_t m = n;
  for (const auto& r : sets) {
    if (r.dim < n) throw std::invalid_argument("star_ccd: represented set of dimension below n");
    star_fd(r);  // validates
    for (const auto& e : r.entries) m = std::max(m, e.source.dimension());
  }
  if (m > opts.ceiling)
    throw CeilingError("star_ccd: source dimension " + std::to_string(m) + " exceeds ceiling " +
                       std::to_string(opts.ceiling));
  const auto names = default_names(m);

  // Distinct sources, padded with trailing coordinates.
  std::vector<Formula> padded;
  std::vector<const StarEntry*> source_of;
  std::vector<std::vector<std::size_t>> entry_src(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (const auto& e : sets[s].entries) {
      std::size_t found = npos;
      for (std::size_t i = 0; i < source_of.size(); ++i)
        if (source_of[i]->source == e.source) found = i;
      if (found == npos) {
        std::vector<std::string> taken = names;
        NodePtr root = freshen_bound(e.source.root, taken);
        std::vector<std::pair<std::string, std::string>> ren;
        for (std::size_t i = 0; i < e.source.dimension(); ++i) ren.emplace_back(e.source.free_vars[i], names[i]);
        padded.push_back({names, rename_free(root, ren)});
        found = source_of.size();
        source_of.push_back(&e);
      }
      entry_src[s].push_back(found);
    }

  CadOptions box = opts;
  box.unit_box = true;
  StarDecomposition out;
  out.n = n;
  out.decomposition = compatible_decomposition(padded, m, box);
  const CellDecomposition& d = out.decomposition;
  const std::size_t ntop = d.size();

  // Component of each source holding each top cell, read off by locating
  // the cell's projection in the source's own decomposition.
  std::vector<std::vector<std::size_t>> comp(source_of.size(), std::vector<std::size_t>(ntop, npos));
  for (std::size_t i = 0; i < source_of.size(); ++i) {
    const Formula& src = source_of[i]->source;
    ComponentResult cr = connected_components(src, component_opts(opts));
    auto cc = component_of_cell(cr);
    const std::size_t la = src.dimension();
    std::map<std::size_t, std::size_t> memo;
    for (std::size_t c = 0; c < ntop; ++c) {
      if (!d.member[c][i]) continue;
      std::size_t a = ancestor(d, m, c, la);
      auto it = memo.find(a);
      if (it == memo.end()) {
        std::size_t sc = cr.decomposition.locate_point(d.layers[la - 1][a].sample, la);
        it = memo.emplace(a, sc == npos ? npos : cc[sc]).first;
      }
      comp[i][c] = it->second;
    }
  }

  // Sign vectors of the top cells on every projection factor, and the
  // components of each sign-condition set.
  std::vector<Poly> all;
  for (const auto& lvl : d.projection.levels)
    for (const auto& p : lvl) all.push_back(p.with_nvars(m));
  std::vector<std::vector<int>> sig(ntop);
  for (std::size_t c = 0; c < ntop; ++c)
    for (const auto& p : all) sig[c].push_back(d.cells()[c].sample.sign(p));
  AdjacencyGraph g = adjacency(d);
  out.certified = g.certified;
  std::vector<std::size_t> parent(ntop);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : g.edges())
    if (sig[a] == sig[b]) parent[find(a)] = find(b);
  // Component index: rank of the root among roots of the same signature,
  // ordered by first cell.
  std::map<std::size_t, std::size_t> rank;
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t c = 0; c < ntop; ++c) {
    std::size_t r = find(c);
    if (!rank.count(r)) rank[r] = seen[sig[c]]++;
  }

  const auto& layer = d.layers[n - 1];
  for (std::size_t c = 0; c < layer.size(); ++c) {
    std::size_t lo = c, hi = c + 1;
    for (std::size_t k = n; k < m; ++k) {
      lo = d.layers[k - 1][lo].child_begin;
      hi = d.layers[k - 1][hi - 1].child_end;
    }
    StarCell sc;
    sc.cell = c;
    std::vector<NodePtr> conj;
    for (std::size_t j = 0; j < all.size(); ++j)
      conj.push_back(f::atom(all[j], names, sig[lo][j] == 0 ? Rel::Eq : (sig[lo][j] > 0 ? Rel::Gt : Rel::Lt)));
    Formula S{names, conj.empty() ? f::truth() : f::conj(conj)};
    sc.rep.dim = n;
    sc.rep.entries.push_back({S, fd_of_formula(S), rank[find(lo)]});
    sc.star = star_fd(sc.rep);
    auto cn = default_names(n);
    sc.naive = fd_of_formula(d.cell_formula(n, c, cn));
    for (std::size_t s = 0; s < sets.size(); ++s) {
      bool in = false;
      for (std::size_t e = 0; e < sets[s].entries.size() && !in; ++e) {
        const auto& ent = sets[s].entries[e];
        if (!ent.component) continue;
        for (std::size_t t = lo; t < hi && !in; ++t) in = comp[entry_src[s][e]][t] == *ent.component;
      }
      sc.in.push_back(in);
    }
    out.max_star = {std::max(out.max_star.format, sc.star.format), std::max(out.max_star.degree, sc.star.degree)};
    out.max_naive = {std::max(out.max_naive.format, sc.naive.format),
                     std::max(out.max_naive.degree, sc.naive.degree)};
    out.cells.push_back(std::move(sc));
  }
  return out;
}

namespace {

nlohmann::json fd_json(const FDPair& fd) { return {fd.format, fd.degree}; }

}  // namespace

nlohmann::json to_json(const StarRep& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"source", to_string(e.source)},
                       {"source_dim", e.source.dimension()},
                       {"fd", fd_json(e.fd)},
                       {"component", e.component ? nlohmann::json(*e.component) : nlohmann::json(nullptr)}});
  nlohmann::json j{{"schema", "fdcalc.star/1"}, {"dim", r.dim}, {"entries", entries}};
  if (!r.entries.empty()) j["star_fd"] = fd_json(star_fd(r));
  return j;
}

StarRep star_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("entries")) throw std::invalid_argument("star: expected an object with entries");
  StarRep r;
  r.dim = j.at("dim").get<std::size_t>();
  for (const auto& e : j.at("entries")) {
    StarEntry se;
    se.source = parse_formula(e.at("source").get<std::string>());
    const auto& fd = e.at("fd");
    if (!fd.is_array() || fd.size() != 2) throw std::invalid_argument("star: fd must be [format, degree]");
    se.fd = {fd[0].get<unsigned>(), fd[1].get<unsigned>()};
    if (e.contains("component") && !e.at("component").is_null()) se.component = e.at("component").get<std::size_t>();
    r.entries.push_back(std::move(se));
  }
  star_fd(r);
  return r;
}

nlohmann::json to_json(const StarDecomposition& s) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : s.cells) {
    const Cell& cell = s.decomposition.layers[s.n - 1][c.cell];
    nlohmann::json sample = nlohmann::json::array();
    for (std::size_t i = 0; i < s.n; ++i) sample.push_back(exact_coordinate(cell.sample, i));
    cells.push_back({{"index", cell.index},
                     {"sample", sample},
                     {"star_fd", fd_json(c.star)},
                     {"naive_fd", fd_json(c.naive)},
                     {"in", c.in}});
  }
  return {{"schema", "fdcalc.star-ccd/1"},
          {"n", s.n},
          {"source_dim", s.decomposition.dim},
          {"cells", cells},
          {"count", s.cells.size()},
          {"max_star_fd", fd_json(s.max_star)},
          {"max_naive_fd", fd_json(s.max_naive)},
          {"certified", s.certified}};
}

}  // namespace fdc
