#include "fdcalc/cad.hpp"

#include "fdcalc/evaluate.hpp"
#include "fdcalc/fd.hpp"

#include <algorithm>
#include <chrono>

namespace fdc {

std::size_t Cell::dimension() const {
  return static_cast<std::size_t>(std::count_if(index.begin(), index.end(), [](std::uint32_t i) { return i % 2 == 1; }));
}

std::vector<std::string> default_names(std::size_t n) {
  static const std::vector<std::string> xyz{"x", "y", "z"};
  if (n <= 3) return {xyz.begin(), xyz.begin() + static_cast<std::ptrdiff_t>(n)};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

namespace {

bool nullified_at(const RealPoint& pt, const Poly& f, std::size_t k) {
  for (const auto& c : f.coefficients(k))
    if (!c.is_zero() && pt.sign(c) != 0) return false;
  return true;
}

std::vector<Poly> level_polys(const ProjectionSet& ps, std::size_t k) {
  std::vector<Poly> out;
  for (const auto& p : ps.levels[k]) out.push_back(p.with_nvars(k + 1));
  return out;
}

bool is_value(const RealPoint& p, std::size_t k, int v) { return p.is_rational(k) && p.rational(k) == v; }

// Builds the stack over `base`; returns false on a McCallum well-orientedness
// violation (the offending polynomial is written to `reason`).
bool build_layers(CellDecomposition& d, std::size_t box_levels, bool check, std::string& reason) {
  d.layers.assign(d.dim, {});
  for (std::size_t k = 0; k < d.dim; ++k) {
    auto polys = level_polys(d.projection, k);
    std::size_t nparents = k == 0 ? 1 : d.layers[k - 1].size();
    for (std::size_t pi = 0; pi < nparents; ++pi) {
      RealPoint base = k == 0 ? RealPoint() : d.layers[k - 1][pi].sample;
      std::vector<std::uint32_t> pidx = k == 0 ? std::vector<std::uint32_t>{} : d.layers[k - 1][pi].index;
      if (check && k > 0) {
        std::size_t pdim = d.layers[k - 1][pi].dimension();
        for (const auto& f : polys)
          if ((pdim > 0 || k + 1 < d.dim) && nullified_at(base, f, k)) {
            reason = f.to_string(default_names(d.dim));
            return false;
          }
      }
      Fiber fb(base, polys);
      auto r = static_cast<std::uint32_t>(fb.size());
      std::uint32_t first = 1, last = 2 * r + 1;
      if (k < box_levels) {
        std::uint32_t r0 = r, r1 = r;
        for (std::uint32_t i = 0; i < r; ++i) {
          if (is_value(fb.root(i), k, 0)) r0 = i;
          if (is_value(fb.root(i), k, 1)) r1 = i;
        }
        if (r0 == r || r1 == r) throw std::logic_error("unit box walls missing from the fiber");
        first = 2 * r0 + 3;
        last = 2 * r1 + 1;
      }
      std::size_t begin = d.layers[k].size();
      for (std::uint32_t idx = first; idx <= last; ++idx) {
        Cell c;
        c.index = pidx;
        c.index.push_back(idx);
        c.sample = idx % 2 == 1 ? base.extended(fb.gap_point((idx - 1) / 2)) : fb.root(idx / 2 - 1);
        c.parent = k == 0 ? npos : pi;
        c.stack_roots = r;
        d.layers[k].push_back(std::move(c));
      }
      if (k > 0) {
        d.layers[k - 1][pi].child_begin = begin;
        d.layers[k - 1][pi].child_end = d.layers[k].size();
      }
    }
  }
  return true;
}

CellDecomposition cad_impl(const std::vector<Poly>& polys, std::size_t dim, const CadOptions& opts,
                           std::size_t box_levels) {
  if (dim == 0) throw std::invalid_argument("cad: ambient dimension must be positive");
  if (dim > opts.ceiling)
    throw CeilingError("cad: dimension " + std::to_string(dim) + " exceeds ceiling " + std::to_string(opts.ceiling));
  auto start = std::chrono::steady_clock::now();
  CellDecomposition d;
  d.dim = dim;
  d.unit_box = box_levels > 0;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    d.inputs.push_back(p.with_nvars(dim));
  }
  std::vector<Poly> all = d.inputs;
  for (std::size_t k = 0; k < box_levels; ++k) {
    all.push_back(Poly::variable(dim, k));
    all.push_back(Poly::variable(dim, k) - Poly::constant(dim, 1));
  }
  ProjectionKind kind = opts.projection;
  std::string reason;
  d.projection = projection_factors(all, dim, kind);
  if (!build_layers(d, box_levels, kind == ProjectionKind::McCallum, reason)) {
    if (!opts.fallback) throw std::runtime_error("projection degeneracy: " + reason + " is nullified");
    kind = ProjectionKind::Collins;
    d.projection = projection_factors(all, dim, kind);
    build_layers(d, box_levels, false, reason);
    d.stats.fallback_reason = reason;
  }
  d.stats.dim = dim;
  d.stats.npolys = d.inputs.size();
  for (const auto& p : d.inputs) d.stats.max_degree = std::max(d.stats.max_degree, p.total_degree());
  d.stats.ncells = d.size();
  d.stats.projection = kind;
  d.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

}  // namespace

CellDecomposition cad(const std::vector<Poly>& polys, std::size_t dim, const CadOptions& opts) {
  return cad_impl(polys, dim, opts, opts.unit_box ? dim : 0);
}

std::size_t CellDecomposition::locate_in(const std::vector<Rational>& pt, std::size_t level) const {
  if (level == 0 || level > dim || pt.size() != level) throw std::invalid_argument("locate: bad point dimension");
  std::size_t cur = npos;
  std::vector<Rational> prefix;
  for (std::size_t k = 0; k < level; ++k) {
    Fiber fb(RealPoint(prefix), level_polys(projection, k));
    auto idx = static_cast<std::uint32_t>(fb.locate(pt[k]));
    std::size_t b = k == 0 ? 0 : layers[k - 1][cur].child_begin;
    std::size_t e = k == 0 ? layers[0].size() : layers[k - 1][cur].child_end;
    cur = npos;
    for (std::size_t i = b; i < e; ++i)
      if (layers[k][i].index.back() == idx) cur = i;
    if (cur == npos) return npos;
    prefix.push_back(pt[k]);
  }
  return cur;
}

std::size_t CellDecomposition::locate_point(const RealPoint& pt, std::size_t level) const {
  if (level == 0 || level > dim || pt.dim() != level) throw std::invalid_argument("locate: bad point dimension");
  std::size_t cur = npos;
  for (std::size_t k = 0; k < level; ++k) {
    Fiber fb(pt.prefix(k), level_polys(projection, k));
    auto idx = static_cast<std::uint32_t>(2 * fb.size() + 1);
    for (std::size_t i = 0; i < fb.size(); ++i) {
      int c = compare_coordinate(pt, fb.root(i), k);
      if (c <= 0) {
        idx = static_cast<std::uint32_t>(c == 0 ? 2 * i + 2 : 2 * i + 1);
        break;
      }
    }
    std::size_t b = k == 0 ? 0 : layers[k - 1][cur].child_begin;
    std::size_t e = k == 0 ? layers[0].size() : layers[k - 1][cur].child_end;
    cur = npos;
    for (std::size_t i = b; i < e; ++i)
      if (layers[k][i].index.back() == idx) cur = i;
    if (cur == npos) return npos;
  }
  return cur;
}

std::size_t CellDecomposition::locate(const std::vector<Rational>& pt) const { return locate_in(pt, dim); }

RealPoint CellDecomposition::random_point_in(std::size_t level, std::size_t cell, std::mt19937_64& rng) const {
  std::vector<std::size_t> chain(level);
  for (std::size_t k = level; k-- > 0;) {
    chain[k] = cell;
    cell = layers[k][cell].parent;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealPoint pt;
  for (std::size_t k = 0; k < level; ++k) {
    const Cell& c = layers[k][chain[k]];
    std::uint32_t idx = c.index.back();
    Fiber fb(pt, level_polys(projection, k));
    if (fb.size() != c.stack_roots) throw std::logic_error("random_point: fiber root count changed inside a cell");
    if (idx % 2 == 0)
      pt = fb.root(idx / 2 - 1);
    else
      pt = pt.extended(fb.gap_random((idx - 1) / 2, unit(rng)));
  }
  return pt;
}

RealPoint CellDecomposition::random_point(std::size_t cell, std::mt19937_64& rng) const {
  return random_point_in(dim, cell, rng);
}

std::vector<Poly> CellDecomposition::fiber_polys(std::size_t level, std::size_t cell) const {
  std::vector<Poly> out;
  for (const auto& p : level_polys(projection, level))
    if (level == 0 || !nullified_at(layers[level - 1][cell].sample, p, level)) out.push_back(p);
  return out;
}

Formula CellDecomposition::cell_formula(std::size_t level, std::size_t cell, const std::vector<std::string>& names) const {
  if (level == 0 || level > dim || names.size() < level) throw std::invalid_argument("cell_formula: bad level");
  std::vector<std::string> vars(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(level));
  std::vector<std::size_t> chain(level);
  for (std::size_t k = level, c = cell; k-- > 0;) {
    chain[k] = c;
    c = layers[k][c].parent;
  }
  std::vector<std::string> taken = vars;
  std::vector<NodePtr> parts;
  for (std::size_t k = 0; k < level; ++k) {
    const Cell& c = layers[k][chain[k]];
    std::uint32_t r = c.stack_roots;
    if (r == 0) continue;
    Poly p = Poly::constant(k + 1, 1);
    for (const auto& q : fiber_polys(k, k == 0 ? 0 : chain[k - 1])) p *= q;
    p = p.normalized();
    std::uint32_t idx = c.index.back();
    bool section = idx % 2 == 0;
    // Position of the cell's own coordinate among the ordered roots t_1 < ... < t_r.
    std::uint32_t below = section ? idx / 2 - 1 : (idx - 1) / 2;
    std::vector<std::string> chainv;
    std::vector<std::string> aux;
    for (std::uint32_t i = 0; i < r; ++i) {
      if (section && i == below) {
        chainv.push_back(vars[k]);
        continue;
      }
      if (!section && i == below) chainv.push_back(vars[k]);
      std::string t = fresh_name("t", taken);
      taken.push_back(t);
      aux.push_back(t);
      chainv.push_back(t);
    }
    if (!section && below == r) chainv.push_back(vars[k]);
    std::vector<std::string> local(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(k + 1));
    std::vector<NodePtr> conj;
    for (std::size_t i = 0; i + 1 < chainv.size(); ++i) {
      std::vector<std::string> two{chainv[i], chainv[i + 1]};
      conj.push_back(f::atom(Poly::variable(2, 1) - Poly::variable(2, 0), two, Rel::Gt));
    }
    for (const auto& t : aux) {
      local[k] = t;
      conj.push_back(f::atom(p, local, Rel::Eq));
    }
    if (section) {
      local[k] = vars[k];
      conj.push_back(f::atom(p, local, Rel::Eq));
    }
    NodePtr body = f::conj(conj);
    for (std::size_t i = aux.size(); i-- > 0;) body = f::exists(aux[i], body);
    parts.push_back(body);
  }
  return Formula{vars, f::conj(parts)};
}

Formula CellDecomposition::cell_formula(std::size_t cell) const { return cell_formula(dim, cell, default_names(dim)); }

FDPair cell_fd(const CellDecomposition& d, std::size_t cell) { return fd_of_formula(d.cell_formula(cell)); }

std::vector<Cell> cylinder_cells(const CellDecomposition& d, std::size_t l) {
  if (l == 0) throw std::invalid_argument("cylinder_cells: l must be positive");
  if (l <= d.dim) return d.layers[l - 1];
  std::vector<Cell> out;
  for (const auto& c : d.cells()) {
    Cell e = c;
    e.child_begin = e.child_end = 0;
    e.stack_roots = 0;
    for (std::size_t k = d.dim; k < l; ++k) {
      e.index.push_back(1);
      e.sample = e.sample.extended(Rational(0));
    }
    out.push_back(std::move(e));
  }
  return out;
}

CellDecomposition compatible_decomposition(const std::vector<Formula>& sets, std::size_t l, const CadOptions& opts) {
  if (l == 0) throw std::invalid_argument("compatible_decomposition: l must be positive");
  std::vector<Prenex> pre;
  std::size_t bound = 0;
  for (const auto& s : sets) {
    if (s.dimension() != l) throw std::invalid_argument("compatible_decomposition: set has the wrong dimension");
    pre.push_back(prenex(s));
    bound = std::max(bound, pre.back().prefix.size());
  }
  std::size_t total = l + bound;
  if (total > opts.ceiling)
    throw CeilingError("compatible_decomposition: elimination needs dimension " + std::to_string(total) +
                       ", ceiling is " + std::to_string(opts.ceiling));
  std::vector<std::vector<std::string>> names;
  std::vector<Poly> polys;
  for (const auto& p : pre) {
    auto nm = p.all_vars();
    while (nm.size() < total) nm.push_back(fresh_name("pad", nm));
    for (const Atom* a : atoms(p.matrix)) polys.push_back(a->over(nm));
    names.push_back(std::move(nm));
  }
  auto start = std::chrono::steady_clock::now();
  CellDecomposition full = cad_impl(polys, total, opts, opts.unit_box ? l : 0);
  std::vector<std::vector<bool>> truth(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    std::vector<bool> cur;
    for (const auto& c : full.layers[total - 1]) cur.push_back(eval_qf(pre[s].matrix, names[s], c.sample));
    for (std::size_t k = total - 1; k >= l; --k) {
      std::size_t q = k - l;
      bool exists = q >= pre[s].prefix.size() || pre[s].prefix[q].first == Kind::Exists;
      std::vector<bool> up;
      for (const auto& c : full.layers[k - 1]) {
        bool v = !exists;
        for (std::size_t i = c.child_begin; i < c.child_end; ++i)
          if (cur[i] == exists) v = exists;
        up.push_back(v);
      }
      cur = std::move(up);
    }
    truth[s] = std::move(cur);
  }
  CellDecomposition d;
  d.dim = l;
  d.unit_box = opts.unit_box;
  d.inputs = full.inputs;
  d.provenance = sets;
  d.projection = full.projection;
  d.layers.assign(full.layers.begin(), full.layers.begin() + static_cast<std::ptrdiff_t>(l));
  for (auto& c : d.layers.back()) c.child_begin = c.child_end = 0;
  d.member.assign(d.size(), std::vector<bool>(sets.size()));
  for (std::size_t c = 0; c < d.size(); ++c)
    for (std::size_t s = 0; s < sets.size(); ++s) d.member[c][s] = truth[s][c];
  d.stats = full.stats;
  d.stats.dim = l;
  d.stats.ncells = d.size();
  d.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

}  // namespace fdc
