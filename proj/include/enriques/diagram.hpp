#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "enriques/errors.hpp"

namespace enriques {

// ---------------------------------------------------------------------------
// Core combinatorial types.

struct UnweightedDiagram {
  // Vertex ids are 0..n-1.  parent[v] is the immediate predecessor in the
  // forest; prox[v] lists the vertices v is proximate to (sorted).
  std::vector<std::optional<int>> parent;
  std::vector<std::vector<int>> prox;

  int size() const { return (int)parent.size(); }

  int add_vertex(std::optional<int> par, std::vector<int> pr = {}) {
    parent.push_back(par);
    std::sort(pr.begin(), pr.end());
    pr.erase(std::unique(pr.begin(), pr.end()), pr.end());
    prox.push_back(std::move(pr));
    return size() - 1;
  }

  bool is_root(int v) const { return !parent[v].has_value(); }

  // Proper ancestors, nearest first.
  std::vector<int> ancestors(int v) const {
    std::vector<int> out;
    std::optional<int> cur = parent[v];
    while (cur) {
      out.push_back(*cur);
      cur = parent[*cur];
      check_internal(out.size() <= parent.size(), "parent cycle");
    }
    return out;
  }

  bool proximate(int v, int u) const {
    return std::binary_search(prox[v].begin(), prox[v].end(), u);
  }

  std::vector<std::vector<int>> children_lists() const {
    std::vector<std::vector<int>> ch(size());
    for (int v = 0; v < size(); ++v)
      if (parent[v]) ch[*parent[v]].push_back(v);
    return ch;
  }

  // Satellite: proximate to a remote (non-immediate) predecessor.
  bool is_satellite(int v) const {
    if (is_root(v)) return false;
    for (int u : prox[v])
      if (u != *parent[v]) return true;
    return false;
  }

  // Remote proximity target, when v is a satellite.
  std::optional<int> remote_target(int v) const {
    if (is_root(v)) return std::nullopt;
    for (int u : prox[v])
      if (u != *parent[v]) return u;
    return std::nullopt;
  }

  // 2 = root, 1 = free non-root, 0 = satellite.
  int type_of(int v) const {
    if (is_root(v)) return 2;
    return is_satellite(v) ? 0 : 1;
  }

  int depth(int v) const { return (int)ancestors(v).size(); }

  bool operator==(const UnweightedDiagram&) const = default;
};

struct WeightedDiagram {
  UnweightedDiagram base;
  std::vector<long> weight;  // m_V >= 1

  int size() const { return base.size(); }
  bool operator==(const WeightedDiagram&) const = default;
};

// ---------------------------------------------------------------------------
// Validation.

struct Violation {
  std::string law;  // "forest", "law_of_proximity", "law_of_succession",
                    // "proximity_inequality", "law_of_minimality"
  std::vector<int> vertices;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> items;
  bool ok() const { return items.empty(); }
};

namespace detail {

inline bool forest_ok(const UnweightedDiagram& d, ValidationReport& rep) {
  int n = d.size();
  for (int v = 0; v < n; ++v) {
    if (d.parent[v] && (*d.parent[v] < 0 || *d.parent[v] >= n)) {
      rep.items.push_back({"forest", {v}, "parent out of range"});
      return false;
    }
    for (int u : d.prox[v])
      if (u < 0 || u >= n) {
        rep.items.push_back({"forest", {v}, "proximity target out of range"});
        return false;
      }
  }
  // cycle detection on the parent map
  std::vector<int> state(n, 0);
  for (int v = 0; v < n; ++v) {
    int cur = v;
    std::vector<int> path;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      if (!d.parent[cur]) break;
      cur = *d.parent[cur];
      if (state[cur] == 1) {
        rep.items.push_back({"forest", {cur}, "parent cycle"});
        return false;
      }
    }
    for (int w : path) state[w] = 2;
  }
  return true;
}

}  // namespace detail

inline ValidationReport validate(const UnweightedDiagram& d) {
  ValidationReport rep;
  if (!detail::forest_ok(d, rep)) return rep;
  int n = d.size();
  for (int v = 0; v < n; ++v) {
    if (d.is_root(v)) {
      if (!d.prox[v].empty())
        rep.items.push_back({"law_of_proximity", {v}, "root is proximate to a vertex"});
      continue;
    }
    int par = *d.parent[v];
    if (!d.proximate(v, par))
      rep.items.push_back({"law_of_proximity", {v}, "not proximate to immediate predecessor"});
    if (d.prox[v].size() > 2)
      rep.items.push_back({"law_of_proximity", {v}, "proximate to more than two vertices"});
    auto anc = d.ancestors(v);
    for (int u : d.prox[v]) {
      if (u == par) continue;
      // the other target must be a remote predecessor
      auto it = std::find(anc.begin(), anc.end(), u);
      if (it == anc.end() || u == par) {
        rep.items.push_back({"law_of_proximity", {v, u}, "second target is not a remote predecessor"});
        continue;
      }
      // everything strictly between v and u must be proximate to u
      for (auto w = anc.begin(); w != it; ++w)
        if (!d.proximate(*w, u))
          rep.items.push_back(
              {"law_of_proximity", {v, *w, u}, "vertex between satellite and target not proximate"});
    }
  }
  // Law of Succession
  auto ch = d.children_lists();
  for (int v = 0; v < n; ++v) {
    std::vector<int> sat_targets;
    for (int c : ch[v])
      if (d.is_satellite(c)) {
        auto rt = d.remote_target(c);
        if (rt) sat_targets.push_back(*rt);
      }
    if (sat_targets.size() > 2)
      rep.items.push_back({"law_of_succession", {v}, "more than two satellite successors"});
    std::sort(sat_targets.begin(), sat_targets.end());
    if (std::adjacent_find(sat_targets.begin(), sat_targets.end()) != sat_targets.end())
      rep.items.push_back({"law_of_succession", {v}, "two satellite successors of the same vertex"});
  }
  return rep;
}

inline ValidationReport validate(const WeightedDiagram& d, bool require_minimal = false) {
  ValidationReport rep = validate(d.base);
  int n = d.size();
  if ((int)d.weight.size() != n) {
    rep.items.push_back({"forest", {}, "weight array size mismatch"});
    return rep;
  }
  for (int v = 0; v < n; ++v)
    if (d.weight[v] < 1) rep.items.push_back({"proximity_inequality", {v}, "weight below 1"});
  if (!rep.ok()) return rep;
  for (int v = 0; v < n; ++v) {
    long s = 0;
    for (int w = 0; w < n; ++w)
      if (d.base.proximate(w, v)) s += d.weight[w];
    if (d.weight[v] < s)
      rep.items.push_back({"proximity_inequality",
                           {v},
                           std::to_string(d.weight[v]) + " < " + std::to_string(s)});
  }
  if (require_minimal) {
    auto ch = d.base.children_lists();
    for (int v = 0; v < n; ++v)
      if (ch[v].empty() && d.weight[v] == 1 && !d.base.is_satellite(v))
        rep.items.push_back({"law_of_minimality", {v}, "free leaf of weight 1"});
  }
  return rep;
}

inline void require_valid(const UnweightedDiagram& d) {
  auto rep = validate(d);
  if (!rep.ok())
    fail(Errc::InvalidDiagram, "diagram violates " + rep.items[0].law + " (" +
                                   rep.items[0].detail + ")");
}

inline void require_valid(const WeightedDiagram& d, bool minimal = false) {
  auto rep = validate(d, minimal);
  if (!rep.ok()) {
    Errc code = rep.items[0].law == "law_of_minimality" ? Errc::NotMinimal : Errc::InvalidDiagram;
    fail(code, "diagram violates " + rep.items[0].law + " (" + rep.items[0].detail + ")");
  }
}

// ---------------------------------------------------------------------------
// Numerical characters.

struct Characters {
  long dim = 0;
  long deg = 0;
  long cod = 0;
  std::vector<int> type_of;
};

inline long binom2(long m) { return m * (m - 1) / 2; }  // binom(m, 2)

inline Characters characters(const WeightedDiagram& d) {
  require_valid(d);
  Characters c;
  int n = d.size();
  c.type_of.resize(n);
  long cod_by_sum = 0;
  for (int v = 0; v < n; ++v) {
    c.type_of[v] = d.base.type_of(v);
    c.dim += c.type_of[v];
    long b = binom2(d.weight[v] + 1);
    c.deg += b;
    cod_by_sum += b - c.type_of[v];
  }
  c.cod = c.deg - c.dim;
  check_internal(c.cod == cod_by_sum, "codimension formulas disagree");
  return c;
}

// dim extends to unweighted diagrams (roots count twice).
inline long dim_of(const UnweightedDiagram& d) {
  long s = 0;
  for (int v = 0; v < d.size(); ++v) s += d.type_of(v);
  return s;
}

// ---------------------------------------------------------------------------
// Orderings and proximity matrices.

// theta[v] = position of vertex v in {0..n-1}; precedence-compatible.
using Ordering = std::vector<int>;

inline bool is_ordering(const UnweightedDiagram& d, const Ordering& th) {
  int n = d.size();
  if ((int)th.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int v = 0; v < n; ++v) {
    if (th[v] < 0 || th[v] >= n || seen[th[v]]) return false;
    seen[th[v]] = true;
  }
  for (int v = 0; v < n; ++v)
    if (d.parent[v] && th[*d.parent[v]] > th[v]) return false;
  return true;
}

inline void require_ordering(const UnweightedDiagram& d, const Ordering& th) {
  require(is_ordering(d, th), Errc::NotAnOrdering, "map is not an ordering of the diagram");
}

inline Ordering identity_ordering(int n) {
  Ordering th(n);
  for (int i = 0; i < n; ++i) th[i] = i;
  return th;
}

using IntMat = std::vector<std::vector<long>>;

inline IntMat proximity_matrix(const UnweightedDiagram& d, const Ordering& th) {
  require_valid(d);
  require_ordering(d, th);
  int n = d.size();
  IntMat p(n, std::vector<long>(n, 0));
  for (int v = 0; v < n; ++v) {
    p[th[v]][th[v]] = 1;
    for (int u : d.prox[v]) p[th[v]][th[u]] = -1;
  }
  return p;
}

// Inverse of a unit lower triangular integer matrix (exact).
inline IntMat unit_lower_inverse(const IntMat& p) {
  int n = (int)p.size();
  IntMat inv(n, std::vector<long>(n, 0));
  for (int j = 0; j < n; ++j) {
    inv[j][j] = 1;
    for (int i = j + 1; i < n; ++i) {
      long s = 0;
      for (int k = j; k < i; ++k) s += p[i][k] * inv[k][j];
      inv[i][j] = -s;
    }
  }
  return inv;
}

inline IntMat int_mul(const IntMat& a, const IntMat& b) {
  int n = (int)a.size(), m = (int)b[0].size(), k = (int)b.size();
  IntMat r(n, std::vector<long>(m, 0));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (int j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
  return r;
}

inline bool int_nonneg(const IntMat& a) {
  for (auto& row : a)
    for (long v : row)
      if (v < 0) return false;
  return true;
}

// Enumerate orderings: backtracking over vertices whose parent is placed.
inline void orderings_visit(const UnweightedDiagram& d, Ordering& th, std::vector<bool>& placed,
                            int pos, const std::function<bool(const Ordering&)>& emit,
                            bool& stop) {
  int n = d.size();
  if (pos == n) {
    if (!emit(th)) stop = true;
    return;
  }
  for (int v = 0; v < n && !stop; ++v) {
    if (placed[v]) continue;
    if (d.parent[v] && !placed[*d.parent[v]]) continue;
    placed[v] = true;
    th[v] = pos;
    orderings_visit(d, th, placed, pos + 1, emit, stop);
    placed[v] = false;
  }
}

inline std::vector<Ordering> orderings_list(const UnweightedDiagram& d) {
  require_valid(d);
  std::vector<Ordering> out;
  Ordering th(d.size(), -1);
  std::vector<bool> placed(d.size(), false);
  bool stop = false;
  orderings_visit(
      d, th, placed, 0,
      [&](const Ordering& o) {
        out.push_back(o);
        return true;
      },
      stop);
  return out;
}

// Linear-extension count of the forest via the hook length formula.
inline mpz_class orderings_count(const UnweightedDiagram& d) {
  require_valid(d);
  int n = d.size();
  auto ch = d.children_lists();
  std::vector<long> sub(n, 0);
  // subtree sizes bottom-up (vertices may appear in any order; iterate by depth)
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.depth(a) > d.depth(b); });
  for (int v : order) {
    sub[v] = 1;
    for (int c : ch[v]) sub[v] += sub[c];
  }
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), n);
  for (int v = 0; v < n; ++v) num /= sub[v];
  return num;
}

// ---------------------------------------------------------------------------
// Automorphisms: permutations preserving parent, proximity, and weights.

namespace detail {

inline void aut_visit(const UnweightedDiagram& d, const std::vector<long>* wt,
                      const std::vector<int>& order, size_t k, std::vector<int>& img,
                      std::vector<bool>& used, std::vector<std::vector<int>>& out) {
  int n = d.size();
  if (k == order.size()) {
    out.push_back(img);
    return;
  }
  int v = order[k];
  for (int u = 0; u < n; ++u) {
    if (used[u]) continue;
    if (d.is_root(v) != d.is_root(u)) continue;
    if (wt && (*wt)[v] != (*wt)[u]) continue;
    if (!d.is_root(v) && img[*d.parent[v]] != *d.parent[u]) continue;
    // proximity sets must correspond; all targets are ancestors, already mapped
    auto pv = d.prox[v];
    std::vector<int> mapped;
    for (int t : pv) mapped.push_back(img[t]);
    std::sort(mapped.begin(), mapped.end());
    if (mapped != d.prox[u]) continue;
    img[v] = u;
    used[u] = true;
    aut_visit(d, wt, order, k + 1, img, used, out);
    used[u] = false;
    img[v] = -1;
  }
}

inline std::vector<std::vector<int>> automorphisms_impl(const UnweightedDiagram& d,
                                                        const std::vector<long>* wt) {
  int n = d.size();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int da = d.depth(a), db = d.depth(b);
    if (da != db) return da < db;
    return a < b;
  });
  std::vector<int> img(n, -1);
  std::vector<bool> used(n, false);
  std::vector<std::vector<int>> out;
  aut_visit(d, wt, order, 0, img, used, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline std::vector<std::vector<int>> automorphisms(const UnweightedDiagram& d) {
  require_valid(d);
  return detail::automorphisms_impl(d, nullptr);
}

inline std::vector<std::vector<int>> automorphisms(const WeightedDiagram& d) {
  require_valid(d);
  return detail::automorphisms_impl(d.base, &d.weight);
}

// ---------------------------------------------------------------------------
// Proximity structures (the parent-free description).

struct ProximityStructureData {
  int n = 0;
  std::vector<std::vector<int>> prox;  // sorted per vertex
};

inline ProximityStructureData to_proximity_structure(const UnweightedDiagram& d) {
  return {d.size(), d.prox};
}

// P1-P3 check; violations are reported, not thrown.
inline ValidationReport validate_structure(const ProximityStructureData& ps) {
  ValidationReport rep;
  int n = ps.n;
  auto proximate = [&](int v, int u) {
    return std::binary_search(ps.prox[v].begin(), ps.prox[v].end(), u);
  };
  for (int v = 0; v < n; ++v) {
    for (int u : ps.prox[v]) {
      if (u < 0 || u >= n) {
        rep.items.push_back({"format", {v}, "target out of range"});
        return rep;
      }
      if (u == v) rep.items.push_back({"P1", {v}, "vertex proximate to itself"});
      else if (proximate(u, v) && u < v)
        rep.items.push_back({"P1", {v, u}, "mutually proximate pair"});
    }
    if (ps.prox[v].size() > 2)
      rep.items.push_back({"P2", {v}, "proximate to more than two vertices"});
    if (ps.prox[v].size() == 2) {
      int a = ps.prox[v][0], b = ps.prox[v][1];
      if (!proximate(a, b) && !proximate(b, a))
        rep.items.push_back({"P2", {v, a, b}, "two targets, neither proximate to the other"});
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int count = 0;
      for (int v = 0; v < n; ++v)
        if (proximate(v, a) && proximate(v, b)) ++count;
      if (count > 1) rep.items.push_back({"P3", {a, b}, "two vertices proximate to both"});
    }
  return rep;
}

// Builds the associated directed graph (edge rule of the correspondence) and
// returns the diagram; loops raise LoopDetected, P1-P3 failures LawViolation.
inline UnweightedDiagram from_proximity_structure(const ProximityStructureData& ps) {
  auto rep = validate_structure(ps);
  if (!rep.ok())
    fail(Errc::LawViolation, "proximity structure violates " + rep.items[0].law + " (" +
                                 rep.items[0].detail + ")",
         {rep.items[0].vertices.begin(), rep.items[0].vertices.end()});
  int n = ps.n;
  auto proximate = [&](int v, int u) {
    return std::binary_search(ps.prox[v].begin(), ps.prox[v].end(), u);
  };
  UnweightedDiagram d;
  d.parent.resize(n);
  d.prox = ps.prox;
  for (int v = 0; v < n; ++v) {
    if (ps.prox[v].empty()) continue;  // root
    if (ps.prox[v].size() == 1) {
      d.parent[v] = ps.prox[v][0];
    } else {
      int a = ps.prox[v][0], b = ps.prox[v][1];
      d.parent[v] = proximate(a, b) ? a : b;
    }
  }
  // loop check on the parent chains
  for (int v = 0; v < n; ++v) {
    int steps = 0;
    std::optional<int> cur = v;
    while (cur) {
      cur = d.parent[*cur];
      if (++steps > n)
        fail(Errc::LoopDetected, "associated graph has a loop through vertex " + std::to_string(v),
             {v});
    }
  }
  auto final_rep = validate(d);
  if (!final_rep.ok())
    fail(Errc::LawViolation,
         "reconstructed diagram violates " + final_rep.items[0].law + " (unexpected)",
         {final_rep.items[0].vertices.begin(), final_rep.items[0].vertices.end()});
  return d;
}

// ---------------------------------------------------------------------------
// Canonical encoding for isomorphism tests of (weighted) forests.

namespace detail {

inline std::string canon_tree(const UnweightedDiagram& d, const std::vector<long>* wt, int v,
                              const std::vector<std::vector<int>>& ch) {
  // signature: weight, remote-target offset (ancestor distance), children multiset
  std::string sig = "(";
  sig += wt ? std::to_string((*wt)[v]) : "?";
  auto rt = d.remote_target(v);
  if (rt) {
    int off = 0;
    std::optional<int> cur = v;
    while (cur && *cur != *rt) {
      cur = d.parent[*cur];
      ++off;
    }
    sig += ",s" + std::to_string(off);
  }
  std::vector<std::string> subs;
  for (int c : ch[v]) subs.push_back(canon_tree(d, wt, c, ch));
  std::sort(subs.begin(), subs.end());
  for (auto& s : subs) sig += s;
  sig += ")";
  return sig;
}

}  // namespace detail

// Relabel vertices by an ordering: vertex v becomes theta[v].
inline UnweightedDiagram relabel(const UnweightedDiagram& d, const Ordering& th) {
  require_ordering(d, th);
  int n = d.size();
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[th[v]] = v;
  UnweightedDiagram out;
  for (int i = 0; i < n; ++i) {
    int v = inv[i];
    std::optional<int> par;
    if (d.parent[v]) par = th[*d.parent[v]];
    std::vector<int> pr;
    for (int u : d.prox[v]) pr.push_back(th[u]);
    out.add_vertex(par, pr);
  }
  return out;
}

inline WeightedDiagram relabel(const WeightedDiagram& d, const Ordering& th) {
  WeightedDiagram out;
  out.base = relabel(d.base, th);
  int n = d.size();
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[th[v]] = v;
  for (int i = 0; i < n; ++i) out.weight.push_back(d.weight[inv[i]]);
  return out;
}

inline std::string canonical_form(const WeightedDiagram& d) {
  auto ch = d.base.children_lists();
  std::vector<std::string> roots;
  for (int v = 0; v < d.size(); ++v)
    if (d.base.is_root(v)) roots.push_back(detail::canon_tree(d.base, &d.weight, v, ch));
  std::sort(roots.begin(), roots.end());
  std::string out;
  for (auto& r : roots) out += r;
  return out;
}

inline bool isomorphic(const WeightedDiagram& a, const WeightedDiagram& b) {
  return canonical_form(a) == canonical_form(b);
}

}  // namespace enriques
