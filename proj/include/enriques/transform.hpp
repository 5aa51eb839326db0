#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "enriques/algebra.hpp"
#include "enriques/diagram.hpp"

namespace enriques {

// ---------------------------------------------------------------------------
// Reordering: the permutation shadow of Phi_{theta,theta'}.

struct ReorderResult {
  std::vector<int> alpha;  // alpha[i] = theta'(theta^{-1}(i))
  IntMat matrix;           // proximity matrix of (d, theta')
};

inline ReorderResult reorder(const UnweightedDiagram& d, const Ordering& th,
                             const Ordering& th2) {
  require_valid(d);
  require_ordering(d, th);
  require_ordering(d, th2);
  int n = d.size();
  std::vector<int> alpha(n);
  for (int v = 0; v < n; ++v) alpha[th[v]] = th2[v];
  // proximate => alpha-increasing (automatic for valid orderings)
  for (int v = 0; v < n; ++v)
    for (int u : d.prox[v])
      check_internal(alpha[th[v]] > alpha[th[u]], "ordering compatibility broken");
  IntMat p2 = proximity_matrix(d, th2);
  // cross-check the conjugation identity P' = A P A^T
  IntMat p = proximity_matrix(d, th);
  int nn = n;
  IntMat conj(nn, std::vector<long>(nn, 0));
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) conj[alpha[i]][alpha[j]] = p[i][j];
  check_internal(conj == p2, "conjugation identity failed");
  return {alpha, p2};
}

// ---------------------------------------------------------------------------
// E-set comparison via the matrix criterion.

enum class ESetOrder { Equal, Contains, ContainedIn, Incomparable };

inline const char* eset_order_name(ESetOrder r) {
  switch (r) {
    case ESetOrder::Equal: return "Equal";
    case ESetOrder::Contains: return "Contains";
    case ESetOrder::ContainedIn: return "ContainedIn";
    case ESetOrder::Incomparable: return "Incomparable";
  }
  return "?";
}

struct ESetRelation {
  ESetOrder order;
  IntMat q_left;   // P'^{-1} P   (nonnegative iff E(U',th') contained in E(U,th))
  IntMat q_right;  // P^{-1} P'
};

inline ESetRelation eset_relation(const UnweightedDiagram& d, const Ordering& th,
                                  const UnweightedDiagram& d2, const Ordering& th2) {
  require(d.size() == d2.size(), Errc::SizeMismatch,
          "diagrams on " + std::to_string(d.size()) + " and " + std::to_string(d2.size()) +
              " vertices");
  IntMat p = proximity_matrix(d, th);
  IntMat p2 = proximity_matrix(d2, th2);
  IntMat q_left = int_mul(unit_lower_inverse(p2), p);
  IntMat q_right = int_mul(unit_lower_inverse(p), p2);
  bool contained_in = int_nonneg(q_left);
  bool contains = int_nonneg(q_right);
  ESetOrder ord;
  if (contained_in && contains) {
    check_internal(p == p2, "mutual containment without equal matrices");
    ord = ESetOrder::Equal;
  } else if (contained_in) {
    ord = ESetOrder::ContainedIn;
  } else if (contains) {
    ord = ESetOrder::Contains;
  } else {
    ord = ESetOrder::Incomparable;
  }
  return {ord, q_left, q_right};
}

// ---------------------------------------------------------------------------
// Blowup at a root; the combinatorial transforms D' and D''.

struct BlowupResult {
  WeightedDiagram d_prime;         // may be empty
  WeightedDiagram d_double_prime;
  long cod_delta_prime = 0;        // cod(D) - cod(D')
  long cod_delta_double = 0;       // cod(D) - cod(D'')
  bool ordinary = false;           // root has no successors
};

namespace detail {

inline WeightedDiagram drop_vertices(const WeightedDiagram& d, const std::vector<bool>& del,
                                     const std::vector<int>& strip_prox_of) {
  int n = d.size();
  std::vector<int> remap(n, -1);
  int k = 0;
  for (int v = 0; v < n; ++v)
    if (!del[v]) remap[v] = k++;
  WeightedDiagram out;
  for (int v = 0; v < n; ++v) {
    if (del[v]) continue;
    std::optional<int> par;
    if (d.base.parent[v] && !del[*d.base.parent[v]]) par = remap[*d.base.parent[v]];
    std::vector<int> pr;
    for (int u : d.base.prox[v])
      if (!del[u] &&
          std::find(strip_prox_of.begin(), strip_prox_of.end(), u) == strip_prox_of.end())
        pr.push_back(remap[u]);
    out.base.add_vertex(par, pr);
    out.weight.push_back(d.weight[v]);
  }
  return out;
}

}  // namespace detail

inline BlowupResult blowup_at_root(const WeightedDiagram& d, int root) {
  {
    auto rep = validate(d, true);
    for (auto& item : rep.items)
      if (item.law == "law_of_minimality")
        fail(Errc::NotMinimal, "blowup requires a minimal diagram");
    require(rep.ok(), Errc::InvalidDiagram, "invalid diagram");
  }
  require(root >= 0 && root < d.size() && d.base.is_root(root), Errc::NotARoot,
          "vertex " + std::to_string(root) + " is not a root");

  int n = d.size();
  long m = d.weight[root];
  auto ch = d.base.children_lists();
  Characters base_chars = characters(d);

  // D': delete the root and, recursively, the weight-1 vertices proximate to
  // it all of whose successors are deleted too.
  std::vector<bool> del(n, false);
  del[root] = true;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.base.depth(a) > d.base.depth(b); });
  for (int v : order) {
    if (v == root) continue;
    if (d.weight[v] != 1 || !d.base.proximate(v, root)) continue;
    bool all_children_deleted = true;
    for (int c : ch[v])
      if (!del[c]) all_children_deleted = false;
    if (all_children_deleted) del[v] = true;
  }
  WeightedDiagram d_prime = detail::drop_vertices(d, del, {root});

  // D'': delete the root only, add 1 to the weight of each vertex proximate
  // to it, then adjoin m - sum of those weights isolated roots of weight 2.
  std::vector<bool> del2(n, false);
  del2[root] = true;
  WeightedDiagram d_double = detail::drop_vertices(d, del2, {root});
  long prox_weight_sum = 0;
  {
    int k = 0;
    for (int v = 0; v < n; ++v) {
      if (v == root) continue;
      if (d.base.proximate(v, root)) {
        d_double.weight[k] += 1;
        prox_weight_sum += d.weight[v];
      }
      ++k;
    }
  }
  long adjoined = m - prox_weight_sum;
  check_internal(adjoined >= 0, "proximity inequality broken at the root");
  for (long i = 0; i < adjoined; ++i) {
    d_double.base.add_vertex(std::nullopt, {});
    d_double.weight.push_back(2);
  }

  require_valid(d_prime);
  require_valid(d_double);

  BlowupResult out;
  out.ordinary = ch[root].empty();
  long cod_prime = d_prime.size() == 0 ? 0 : characters(d_prime).cod;
  long cod_double = d_double.size() == 0 ? 0 : characters(d_double).cod;
  out.cod_delta_prime = base_chars.cod - cod_prime;
  out.cod_delta_double = base_chars.cod - cod_double;
  check_internal(out.cod_delta_double == binom2(m) - 2, "cod(D)-cod(D'') identity failed");
  check_internal(out.cod_delta_prime >= binom2(m + 1) - 2, "cod(D)-cod(D') inequality failed");
  check_internal((out.cod_delta_prime == binom2(m + 1) - 2) == out.ordinary,
                 "ordinary equality case failed");
  out.d_prime = std::move(d_prime);
  out.d_double_prime = std::move(d_double);
  return out;
}

// ---------------------------------------------------------------------------
// Minimality pruning: repeatedly remove free leaves of weight 1.

inline WeightedDiagram prune_to_minimal(const WeightedDiagram& d) {
  require_valid(d);
  WeightedDiagram cur = d;
  for (;;) {
    auto ch = cur.base.children_lists();
    std::vector<bool> del(cur.size(), false);
    bool any = false;
    for (int v = 0; v < cur.size(); ++v)
      if (ch[v].empty() && cur.weight[v] == 1 && !cur.base.is_satellite(v)) {
        del[v] = true;
        any = true;
      }
    if (!any) break;
    cur = detail::drop_vertices(cur, del, {});
  }
  require_valid(cur, true);
  return cur;
}

// ---------------------------------------------------------------------------
// Families from the examples appendix.

enum class FamilyKind { M, N, AllRoots };

struct Family {
  WeightedDiagram diagram;
  Ordering theta;
  std::string id;
};

// M(p, m): chain of p+1 vertices, V_k proximate to V_{k-1} and to V_0,
// weights (m, 1, ..., 1).  N(m): two vertices, V_1 proximate to V_0,
// weights (m, 2).  AllRoots: disjoint roots with the given weights.
inline Family build_family(FamilyKind kind, long p, long m,
                           const std::vector<long>& weights = {}) {
  Family out;
  switch (kind) {
    case FamilyKind::M: {
      require(is_prime(p), Errc::BadParams, "M(p, m) needs prime p, got " + std::to_string(p));
      require(m >= p, Errc::BadParams, "M(p, m) needs m >= p");
      out.diagram.base.add_vertex(std::nullopt, {});
      out.diagram.weight.push_back(m);
      for (long k = 1; k <= p; ++k) {
        std::vector<int> pr{(int)k - 1};
        if (k >= 2) pr.push_back(0);
        out.diagram.base.add_vertex((int)k - 1, pr);
        out.diagram.weight.push_back(1);
      }
      out.id = "M(" + std::to_string(p) + "," + std::to_string(m) + ")";
      break;
    }
    case FamilyKind::N: {
      require(m >= 2, Errc::BadParams, "N(m) needs m >= 2");
      out.diagram.base.add_vertex(std::nullopt, {});
      out.diagram.base.add_vertex(0, {0});
      out.diagram.weight = {m, 2};
      out.id = "N(" + std::to_string(m) + ")";
      break;
    }
    case FamilyKind::AllRoots: {
      require(!weights.empty(), Errc::BadParams, "all_roots needs at least one weight");
      out.id = "roots(";
      for (size_t i = 0; i < weights.size(); ++i) {
        require(weights[i] >= 1, Errc::BadParams, "weights must be >= 1");
        out.diagram.base.add_vertex(std::nullopt, {});
        out.diagram.weight.push_back(weights[i]);
        out.id += (i ? "," : "") + std::to_string(weights[i]);
      }
      out.id += ")";
      break;
    }
  }
  out.theta = identity_ordering(out.diagram.size());
  require_valid(out.diagram);
  return out;
}

}  // namespace enriques
