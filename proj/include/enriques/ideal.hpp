#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <vector>

#include "enriques/cluster.hpp"
#include "enriques/linalg.hpp"

namespace enriques {

struct WeightedCluster {
  Cluster cluster;
  std::vector<long> weights;  // per point, in build order
};

inline void require_weighted_cluster(const WeightedCluster& wc) {
  int n = wc.cluster.size();
  require((int)wc.weights.size() == n, Errc::BadParams, "one weight per cluster point");
  for (long m : wc.weights)
    require(m >= 1, Errc::BadParams, "weights must be >= 1");
  // Proximity Inequality against the derived relation
  for (int i = 0; i < n; ++i) {
    long s = 0;
    for (int w = 0; w < n; ++w) {
      auto& pr = wc.cluster.points[w].prox;
      if (std::find(pr.begin(), pr.end(), i) != pr.end()) s += wc.weights[w];
    }
    if (wc.weights[i] < s)
      fail(Errc::ProximityInequalityViolated,
           "weight " + std::to_string(wc.weights[i]) + " at point " + std::to_string(i) +
               " is below the proximate sum " + std::to_string(s),
           {i});
  }
}

inline WeightedCluster weighted_cluster_of(const Cluster& c, const WeightedDiagram& d) {
  WeightedCluster wc{c, {}};
  for (auto& p : c.points) wc.weights.push_back(d.weight[p.vertex]);
  require_weighted_cluster(wc);
  return wc;
}

// The degree-<=N slice of a complete ideal, as exact coefficient vectors.
struct TruncatedIdeal {
  FieldSpec field;
  int degree_bound = 0;
  std::vector<BiPoly> basis;
  long colength = 0;
  bool stabilized = false;
};

// ---------------------------------------------------------------------------
// Monomial bookkeeping: the degree-<=N monomials in graded-lex order.

inline std::vector<Exp> monomials_upto(int n) {
  std::vector<Exp> out;
  for (int g = 0; g <= n; ++g)
    for (int dx = g; dx >= 0; --dx) out.push_back({dx, g - dx});
  return out;
}

inline std::vector<Scalar> poly_to_vec(const BiPoly& f, const std::vector<Exp>& mons) {
  std::vector<Scalar> v(mons.size(), Scalar::zero(f.spec()));
  size_t used = 0;
  for (size_t i = 0; i < mons.size(); ++i) {
    Scalar c = f.coeff(mons[i].dx, mons[i].dy);
    if (!c.is_zero()) ++used;
    v[i] = c;
  }
  check_internal(used == f.term_count(), "polynomial exceeds the degree bound");
  return v;
}

inline BiPoly vec_to_poly(const std::vector<Scalar>& v, const std::vector<Exp>& mons,
                          const FieldSpec& fs) {
  BiPoly f(fs);
  for (size_t i = 0; i < mons.size(); ++i) f.add_term(mons[i], v[i]);
  return f;
}

// ---------------------------------------------------------------------------
// Cluster conditions.  A polynomial of degree <= N lies in the ideal of the
// weighted cluster iff, point by point, every term of total degree < m_i of
// its virtual transform vanishes; the transform is then stripped of those
// terms and divided by the exceptional coordinate to the power m_i before
// being passed down the chart chain.

struct ClusterSlice {
  int N = 0;
  std::vector<Exp> monomials;
  KernelResult kernel;  // of the condition matrix; kernel = ideal slice
  long condition_rows = 0;
};

inline ExactMatrix cluster_condition_matrix(const WeightedCluster& wc, int N,
                                            std::vector<Exp>* mons_out = nullptr) {
  const FieldSpec fs = wc.cluster.field;
  const int n = wc.cluster.size();
  auto mons = monomials_upto(N);
  if (mons_out) *mons_out = mons;

  long rows = 0;
  for (long m : wc.weights) rows += binom2(m + 1);
  ExactMatrix mat(fs, (size_t)rows, mons.size());

  // row layout: points in build order, local monomials of grade < m_i in
  // graded-lex order
  std::vector<long> row_base(n + 1, 0);
  for (int i = 0; i < n; ++i) row_base[i + 1] = row_base[i] + binom2(wc.weights[i] + 1);

  for (size_t col = 0; col < mons.size(); ++col) {
    BiPoly mono = BiPoly::monomial(fs, mons[col].dx, mons[col].dy, Scalar::one(fs));
    std::vector<BiPoly> transform(n, BiPoly(fs));
    for (int i = 0; i < n; ++i) {
      const PointRecord& pt = wc.cluster.points[i];
      if (!pt.parent_point) {
        transform[i] = mono.subst(pt.sub_x, pt.sub_y);
      } else {
        int p = *pt.parent_point;
        BiPoly high = transform[p].drop_below_grade((int)wc.weights[p]);
        BiPoly img = high.subst(pt.sub_x, pt.sub_y);
        transform[i] = pt.exc_var == 0 ? img.divide_pow_x((int)wc.weights[p])
                                       : img.divide_pow_y((int)wc.weights[p]);
      }
      long r = row_base[i];
      for (int g = 0; g < wc.weights[i]; ++g)
        for (int dx = g; dx >= 0; --dx)
          mat.set((size_t)r++, col, transform[i].coeff(dx, g - dx));
    }
  }
  return mat;
}

inline ClusterSlice solve_cluster_slice(const WeightedCluster& wc, int N) {
  ClusterSlice out;
  out.N = N;
  auto mat = cluster_condition_matrix(wc, N, &out.monomials);
  out.condition_rows = (long)mat.rows();
  out.kernel = solve_kernel(mat);
  return out;
}

namespace detail {

inline TruncatedIdeal slice_to_ideal(const ClusterSlice& s, const FieldSpec& fs, bool stabilized) {
  TruncatedIdeal out;
  out.field = fs;
  out.degree_bound = s.N;
  out.colength = (long)s.kernel.rank;
  out.stabilized = stabilized;
  for (auto& v : s.kernel.kernel) out.basis.push_back(vec_to_poly(v, s.monomials, fs));
  return out;
}

}  // namespace detail

// Starting bound: the largest per-tree weight sum.
inline int initial_degree_bound(const WeightedCluster& wc) {
  std::map<int, long> tree_sum;
  for (int i = 0; i < wc.cluster.size(); ++i) {
    int r = i;
    while (wc.cluster.points[r].parent_point) r = *wc.cluster.points[r].parent_point;
    tree_sum[r] += wc.weights[i];
  }
  long best = 0;
  for (auto& [r, s] : tree_sum) best = std::max(best, s);
  return (int)best;
}

inline TruncatedIdeal complete_ideal_at(const WeightedCluster& wc, int N) {
  require_weighted_cluster(wc);
  return detail::slice_to_ideal(solve_cluster_slice(wc, N), wc.cluster.field, false);
}

// The degree-truncated complete ideal; the bound is grown until the
// colength is stable at two consecutive bounds.
inline TruncatedIdeal complete_ideal(const WeightedCluster& wc, int degree_cap = 64) {
  require_weighted_cluster(wc);
  const FieldSpec fs = wc.cluster.field;
  if (wc.cluster.size() == 0) {
    TruncatedIdeal out;
    out.field = fs;
    out.degree_bound = 0;
    out.basis = {BiPoly::constant(Scalar::one(fs))};
    out.colength = 0;
    out.stabilized = true;
    return out;
  }
  int N = std::max(initial_degree_bound(wc), 1);
  for (;;) {
    if (N > degree_cap)
      fail(Errc::DegreeOverflow,
           "degree bound " + std::to_string(N) + " exceeds the cap " + std::to_string(degree_cap));
    auto s1 = solve_cluster_slice(wc, N);
    auto s2 = solve_cluster_slice(wc, N + 1);
    if ((long)s1.kernel.rank == (long)s2.kernel.rank) {
      auto out = detail::slice_to_ideal(s1, fs, true);
      out.stabilized = true;
      return out;
    }
    N *= 2;
  }
}

inline long colength(const TruncatedIdeal& ideal) {
  require(ideal.stabilized, Errc::NotStabilized, "colength read before stabilization");
  return ideal.colength;
}

// A bound whose slice provably generates the ideal: the maximal ideal to
// the power of the colength lies inside, so everything of higher degree is
// a combination of slice multiples.
inline int generating_bound(const TruncatedIdeal& ideal) {
  require(ideal.stabilized, Errc::NotStabilized, "generating bound needs a stabilized ideal");
  return std::max(ideal.degree_bound, (int)ideal.colength);
}

struct EnriquesReport {
  long colength = 0;
  long deg_formula = 0;  // sum of binom(m_i + 1, 2)
  bool match = false;
};

inline EnriquesReport enriques_check(const WeightedCluster& wc, int degree_cap = 64) {
  auto ideal = complete_ideal(wc, degree_cap);
  EnriquesReport rep;
  rep.colength = ideal.colength;
  for (long m : wc.weights) rep.deg_formula += binom2(m + 1);
  rep.match = rep.colength == rep.deg_formula;
  return rep;
}

// ---------------------------------------------------------------------------
// Spans of generator multiples (the independent route used by product
// ideals and by the recursion below).

inline TruncatedIdeal generated_slice_at(const std::vector<BiPoly>& gens, const FieldSpec& fs,
                                         int N) {
  auto mons = monomials_upto(N);
  std::vector<std::vector<Scalar>> rows;
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    for (int dx = 0; dx + g.degree() <= N; ++dx)
      for (int dy = 0; dx + dy + g.degree() <= N; ++dy) {
        BiPoly mult = g * BiPoly::monomial(fs, dx, dy, Scalar::one(fs));
        if (mult.degree() > N) continue;
        rows.push_back(poly_to_vec(mult, mons));
      }
  }
  auto r = rref(ExactMatrix::from_rows(fs, rows));
  TruncatedIdeal out;
  out.field = fs;
  out.degree_bound = N;
  out.colength = (long)mons.size() - (long)r.rank();
  out.stabilized = false;
  for (size_t i = 0; i < r.rank(); ++i) {
    std::vector<Scalar> v(mons.size(), Scalar::zero(fs));
    for (size_t c = 0; c < mons.size(); ++c) v[c] = r.mat.at(i, c);
    out.basis.push_back(vec_to_poly(v, mons, fs));
  }
  return out;
}

inline TruncatedIdeal generated_slice(const std::vector<BiPoly>& gens, const FieldSpec& fs,
                                      int start, int degree_cap,
                                      Errc overflow = Errc::DegreeOverflow) {
  int N = std::max(start, 1);
  for (;;) {
    if (N > degree_cap) fail(overflow, "degree bound exceeds the cap during stabilization");
    auto a = generated_slice_at(gens, fs, N);
    auto b = generated_slice_at(gens, fs, N + 1);
    if (a.colength == b.colength) {
      a.stabilized = true;
      return a;
    }
    N *= 2;
  }
}

// Equality of slices at a common degree bound (row spaces compared by RREF).
inline bool same_slice(const TruncatedIdeal& a, const TruncatedIdeal& b) {
  require(a.field == b.field, Errc::MixedFields, "slice comparison across fields");
  require(a.degree_bound == b.degree_bound, Errc::SizeMismatch,
          "slice comparison at different degree bounds");
  auto mons = monomials_upto(a.degree_bound);
  auto canon = [&](const std::vector<BiPoly>& basis) {
    std::vector<std::vector<Scalar>> rows;
    for (auto& f : basis) rows.push_back(poly_to_vec(f, mons));
    auto r = rref(ExactMatrix::from_rows(a.field, rows));
    std::vector<std::vector<Scalar>> out;
    for (size_t i = 0; i < r.rank(); ++i) {
      std::vector<Scalar> v;
      for (size_t c = 0; c < mons.size(); ++c) v.push_back(r.mat.at(i, c));
      out.push_back(std::move(v));
    }
    return out;
  };
  return canon(a.basis) == canon(b.basis);
}

// Membership of a polynomial in the slice.
inline bool slice_contains(const TruncatedIdeal& ideal, const BiPoly& f) {
  if (f.is_zero()) return true;
  require(f.degree() <= ideal.degree_bound, Errc::SizeMismatch,
          "membership query above the degree bound");
  auto mons = monomials_upto(ideal.degree_bound);
  std::vector<std::vector<Scalar>> rows;
  for (auto& g : ideal.basis) rows.push_back(poly_to_vec(g, mons));
  size_t base_rank = rref(ExactMatrix::from_rows(ideal.field, rows)).rank();
  rows.push_back(poly_to_vec(f, mons));
  return rref(ExactMatrix::from_rows(ideal.field, rows)).rank() == base_rank;
}

// ---------------------------------------------------------------------------
// Products of powers of point ideals (the all-roots case).

inline TruncatedIdeal product_ideal(const std::vector<std::pair<Scalar, Scalar>>& points,
                                    const std::vector<long>& mults, const FieldSpec& fs,
                                    int degree_cap = 64, int forced_N = -1) {
  require(points.size() == mults.size(), Errc::BadParams, "one multiplicity per point");
  require(!points.empty(), Errc::BadParams, "empty point list");
  for (long m : mults) require(m >= 1, Errc::BadParams, "multiplicities must be >= 1");
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first == points[j].first && points[i].second == points[j].second)
        fail(Errc::DuplicatePoints, "points " + std::to_string(i) + " and " + std::to_string(j) +
                                        " coincide");

  // generators: one factor (x-a)^k (y-b)^(m-k) from each point
  std::vector<BiPoly> gens{BiPoly::constant(Scalar::one(fs))};
  for (size_t i = 0; i < points.size(); ++i) {
    BiPoly xa = BiPoly::var_x(fs) - BiPoly::constant(points[i].first);
    BiPoly yb = BiPoly::var_y(fs) - BiPoly::constant(points[i].second);
    std::vector<BiPoly> next;
    for (long k = 0; k <= mults[i]; ++k) {
      BiPoly factor = xa.pow((int)k) * yb.pow((int)(mults[i] - k));
      for (auto& g : gens) next.push_back(g * factor);
    }
    gens = std::move(next);
  }
  long start = *std::max_element(mults.begin(), mults.end());
  if (forced_N >= 0) return generated_slice_at(gens, fs, forced_N);
  return generated_slice(gens, fs, (int)start, degree_cap);
}

// ---------------------------------------------------------------------------
// Recovering the weighted cluster (and diagram) from an ideal's generators.

struct IdealDiagramResult {
  WeightedDiagram diagram;
  WeightedCluster cluster;
  long colength = 0;
};

namespace detail {

struct IdealWalker {
  FieldSpec fs;
  Cluster cluster;
  std::vector<long> weights;
  int depth_cap = 64;

  // Process the just-added point `idx` whose local generator transforms are
  // `gens` (all vanishing at the local origin).
  void expand(int idx, const std::vector<BiPoly>& gens, int depth) {
    require(depth <= depth_cap, Errc::IterationCap,
            "blowup recursion exceeded " + std::to_string(depth_cap) + " levels");
    long m = LONG_MAX;
    for (auto& g : gens)
      if (!g.is_zero()) m = std::min(m, (long)g.min_grade());
    check_internal(m >= 1 && m != LONG_MAX, "expansion at a point off the support");
    weights[idx] = m;

    ChildContext cc = child_context(cluster.points[idx]);

    // common zeros on E in chart 1: roots of the gcd of the restrictions
    std::vector<BiPoly> t1;
    {
      BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
      for (auto& g : gens) t1.push_back(g.subst(x, x * y).divide_pow_x((int)m));
    }
    UniPoly common;
    bool first = true;
    for (auto& g : t1) {
      UniPoly r = restrict_x0(g);
      if (uni_degree(r) < 0) continue;
      common = first ? r : uni_gcd(common, r);
      first = false;
    }
    check_internal(!first, "transformed ideal vanishes on the exceptional line");
    std::vector<ProjParam> children;
    if (uni_degree(common) >= 1) {
      UniPoly residual;
      auto roots = uni_roots(common, fs, &residual);
      if (uni_degree(residual) >= 1)
        fail(Errc::FieldExtensionRequired,
             "infinitely near support requires a field extension of " + fs.str());
      for (auto& [lambda, mult] : roots) children.push_back(ProjParam::finite(lambda));
    }
    {
      // the [0:1] point, visible only in chart 2
      BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
      bool at_inf = true;
      for (auto& g : gens)
        if (!g.subst(x * y, y).divide_pow_y((int)m).eval(Scalar::zero(fs), Scalar::zero(fs))
                 .is_zero())
          at_inf = false;
      if (at_inf) children.push_back(ProjParam::infinite(fs));
    }

    for (auto& pos : children) {
      PointRecord rec = make_child(idx, cc, pos, fs);
      rec.vertex = cluster.size();
      int child = cluster.size();
      cluster.point_of_vertex.push_back(child);
      cluster.points.push_back(rec);
      weights.push_back(0);
      std::vector<BiPoly> local;
      for (auto& g : gens) local.push_back(curve_into_child(g, rec, (int)m));
      expand(child, local, depth + 1);
    }
  }
};

}  // namespace detail

inline IdealDiagramResult diagram_of_ideal(const std::vector<BiPoly>& gens_in,
                                           const FieldSpec& fs, int degree_cap = 64) {
  require(!fs.dual, Errc::DualFieldInput, "ideal recursion runs over a base field");
  std::vector<BiPoly> gens;
  for (auto& g : gens_in)
    if (!g.is_zero()) gens.push_back(g);
  require(!gens.empty(), Errc::BadParams, "no nonzero generators");
  for (auto& g : gens)
    require(g.spec() == fs, Errc::MixedFields, "generator field mismatch");

  // a common factor means one-dimensional support
  {
    BiPoly g = gens[0];
    for (size_t i = 1; i < gens.size() && !g.is_zero(); ++i) g = bipoly_gcd(g, gens[i]);
    require(g.degree() == 0, Errc::NotFiniteColength,
            "generators share the factor " + std::string("(degree ") +
                std::to_string(g.degree()) + ")");
  }

  int maxdeg = 0;
  for (auto& g : gens) maxdeg = std::max(maxdeg, g.degree());
  auto slice = generated_slice(gens, fs, maxdeg, degree_cap, Errc::NotFiniteColength);
  long target_colength = slice.colength;

  // rational support points
  std::vector<std::pair<Scalar, Scalar>> support;
  if (fs.kind == FieldKind::PrimeField) {
    for (long a = 0; a < fs.p; ++a)
      for (long b = 0; b < fs.p; ++b) {
        Scalar sa = Scalar::of_int(fs, a), sb = Scalar::of_int(fs, b);
        bool zero = true;
        for (auto& g : gens)
          if (!g.eval(sa, sb).is_zero()) zero = false;
        if (zero) support.push_back({sa, sb});
      }
  } else {
    // univariate members of the slice single out candidate coordinates
    auto mons = monomials_upto(slice.degree_bound);
    auto univariate_member = [&](bool in_x) -> UniPoly {
      std::vector<std::vector<Scalar>> rows;
      for (auto& f : slice.basis) rows.push_back(poly_to_vec(f, mons));
      // columns of monomials involving the other variable must cancel
      std::vector<size_t> other_cols;
      for (size_t c = 0; c < mons.size(); ++c)
        if ((in_x ? mons[c].dy : mons[c].dx) > 0) other_cols.push_back(c);
      ExactMatrix m(fs, other_cols.size(), rows.size());
      for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < other_cols.size(); ++c) m.set(c, r, rows[r][other_cols[c]]);
      auto k = solve_kernel(m);
      require(!k.kernel.empty(), Errc::FieldExtensionRequired,
              "no univariate member found in the truncated slice");
      UniPoly u(slice.degree_bound + 1, Scalar::zero(fs));
      for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < mons.size(); ++c) {
          Scalar contrib = k.kernel[0][r] * rows[r][c];
          if (contrib.is_zero()) continue;
          u[in_x ? mons[c].dx : mons[c].dy] += contrib;
        }
      check_internal(uni_degree(u) >= 0, "univariate member collapsed to zero");
      return u;
    };
    auto xs = uni_roots(univariate_member(true), fs);
    auto ys = uni_roots(univariate_member(false), fs);
    for (auto& [a, ma] : xs)
      for (auto& [b, mb] : ys) {
        bool zero = true;
        for (auto& g : gens)
          if (!g.eval(a, b).is_zero()) zero = false;
        if (zero) support.push_back({a, b});
      }
  }

  detail::IdealWalker walker{fs, Cluster{fs, {}, {}}, {}, degree_cap};
  for (auto& [a, b] : support) {
    PointRecord rec;
    rec.vertex = walker.cluster.size();
    rec.chart = ChartKind::Origin;
    rec.root_a = a;
    rec.root_b = b;
    rec.sub_x = BiPoly::var_x(fs) + BiPoly::constant(a);
    rec.sub_y = BiPoly::var_y(fs) + BiPoly::constant(b);
    int idx = walker.cluster.size();
    walker.cluster.point_of_vertex.push_back(idx);
    walker.cluster.points.push_back(std::move(rec));
    walker.weights.push_back(0);
    std::vector<BiPoly> local;
    for (auto& g : gens) local.push_back(g.shift(a, b));
    walker.expand(idx, local, 0);
  }

  IdealDiagramResult out;
  out.colength = target_colength;
  out.cluster = WeightedCluster{walker.cluster, walker.weights};
  auto [d, th] = diagram_of_cluster(walker.cluster);
  out.diagram = WeightedDiagram{d, walker.weights};

  long found = 0;
  for (long m : walker.weights) found += binom2(m + 1);
  if (found != target_colength)
    fail(Errc::FieldExtensionRequired,
         "cluster accounts for colength " + std::to_string(found) + " of " +
             std::to_string(target_colength) +
             " (support not fully rational, or the input is not the complete ideal of a cluster)");
  return out;
}

}  // namespace enriques
