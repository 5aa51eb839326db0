#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "enriques/ideal.hpp"
#include "enriques/polytext.hpp"
#include "enriques/transform.hpp"

namespace enriques {

struct CurveInput {
  BiPoly f;
  FieldSpec field;
  // analyze this point only, or all rational singular points when absent
  std::optional<std::pair<Scalar, Scalar>> base_point;
};

struct CurveDiagramResult {
  WeightedDiagram diagram;  // minimal
  Cluster cluster;          // the surviving points
  std::vector<std::string> trace;    // one line per blowup
  std::vector<std::string> notices;  // smooth input, unresolved residuals
};

// ---------------------------------------------------------------------------
// Squarefreeness.  Over Q and F_p alike, a reduced polynomial has constant
// gcd(f, f_x, f_y); a p-th power has vanishing partials and is caught both
// by the gcd and by direct exponent inspection.

inline bool is_pth_power_candidate(const BiPoly& f) {
  long p = f.spec().characteristic();
  if (p == 0) return false;
  for (auto& [e, c] : f.terms())
    if (e.dx % p != 0 || e.dy % p != 0) return false;
  return true;
}

inline void require_squarefree(const BiPoly& f) {
  require(!f.is_zero(), Errc::ZeroPolynomial, "curve polynomial is zero");
  if (f.spec().characteristic() > 0 && f.degree() > 0)
    require(!is_pth_power_candidate(f), Errc::NotSquarefree,
            "every exponent is divisible by the characteristic: a p-th power");
  BiPoly g = bipoly_gcd(bipoly_gcd(f, f.deriv_x()), f.deriv_y());
  require(g.degree() <= 0, Errc::NotSquarefree,
          "gcd with the partial derivatives is not constant: " + poly_to_string(g));
}

// ---------------------------------------------------------------------------
// Rational singular points: f = f_x = f_y = 0.

struct SingularPoints {
  std::vector<std::pair<Scalar, Scalar>> points;
  std::vector<std::string> notices;
};

inline SingularPoints singular_points(const BiPoly& f, int degree_cap = 64) {
  const FieldSpec fs = f.spec();
  SingularPoints out;
  std::vector<BiPoly> sys{f, f.deriv_x(), f.deriv_y()};
  if (fs.kind == FieldKind::PrimeField) {
    for (long a = 0; a < fs.p; ++a)
      for (long b = 0; b < fs.p; ++b) {
        Scalar sa = Scalar::of_int(fs, a), sb = Scalar::of_int(fs, b);
        bool zero = true;
        for (auto& g : sys)
          if (!g.eval(sa, sb).is_zero()) zero = false;
        if (zero) out.points.push_back({sa, sb});
      }
    return out;
  }
  // over Q: candidate coordinates from univariate members of the slice
  std::vector<BiPoly> gens;
  for (auto& g : sys)
    if (!g.is_zero()) gens.push_back(g);
  check_internal(!gens.empty(), "zero system");
  {
    BiPoly g = gens[0];
    for (size_t i = 1; i < gens.size() && !g.is_zero(); ++i) g = bipoly_gcd(g, gens[i]);
    require(g.degree() <= 0, Errc::NotSquarefree, "singular locus is one-dimensional");
  }
  int maxdeg = 0;
  for (auto& g : gens) maxdeg = std::max(maxdeg, g.degree());
  auto slice = generated_slice(gens, fs, maxdeg, degree_cap);
  auto mons = monomials_upto(slice.degree_bound);
  auto univariate_member = [&](bool in_x) -> UniPoly {
    std::vector<std::vector<Scalar>> rows;
    for (auto& h : slice.basis) rows.push_back(poly_to_vec(h, mons));
    std::vector<size_t> other_cols;
    for (size_t c = 0; c < mons.size(); ++c)
      if ((in_x ? mons[c].dy : mons[c].dx) > 0) other_cols.push_back(c);
    ExactMatrix m(fs, other_cols.size(), rows.size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < other_cols.size(); ++c) m.set(c, r, rows[r][other_cols[c]]);
    auto k = solve_kernel(m);
    require(!k.kernel.empty(), Errc::FieldExtensionRequired,
            "no univariate member in the singular-locus slice");
    UniPoly u(slice.degree_bound + 1, Scalar::zero(fs));
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < mons.size(); ++c) {
        Scalar contrib = k.kernel[0][r] * rows[r][c];
        if (!contrib.is_zero()) u[in_x ? mons[c].dx : mons[c].dy] += contrib;
      }
    return u;
  };
  UniPoly rx, ry;
  auto xs = uni_roots(univariate_member(true), fs, &rx);
  auto ys = uni_roots(univariate_member(false), fs, &ry);
  if (uni_degree(rx) >= 1 || uni_degree(ry) >= 1)
    out.notices.push_back(
        "unresolved residual factor in the singular-point search; non-rational "
        "singular points may have been skipped (FieldExtensionRequired to refine)");
  for (auto& [a, ma] : xs)
    for (auto& [b, mb] : ys) {
      bool zero = true;
      for (auto& g : sys)
        if (!g.eval(a, b).is_zero()) zero = false;
      if (zero) out.points.push_back({a, b});
    }
  return out;
}

// ---------------------------------------------------------------------------
// The resolver: iterated blowups of a local equation, recording weights and
// proximities, with the stopping test of the essential-point construction.

namespace detail {

class CurveResolver {
 public:
  CurveResolver(const FieldSpec& fs, int depth_cap) : fs_(fs), depth_cap_(depth_cap) {
    cluster_.field = fs;
  }

  // Returns the root point index of the tree resolved at the given local
  // equation (which must vanish at the local origin).
  int resolve_at(const Scalar& a, const Scalar& b, const BiPoly& local) {
    PointRecord rec;
    rec.vertex = cluster_.size();
    rec.chart = ChartKind::Origin;
    rec.root_a = a;
    rec.root_b = b;
    rec.sub_x = BiPoly::var_x(fs_) + BiPoly::constant(a);
    rec.sub_y = BiPoly::var_y(fs_) + BiPoly::constant(b);
    int idx = push(std::move(rec));
    expand(idx, local, 0);
    return idx;
  }

  const Cluster& cluster() const { return cluster_; }
  const std::vector<long>& weights() const { return weights_; }
  const std::vector<std::string>& trace() const { return trace_; }

  WeightedDiagram diagram() const {
    auto [d, th] = diagram_of_cluster(cluster_);
    return WeightedDiagram{d, weights_};
  }

 private:
  int push(PointRecord rec) {
    int idx = cluster_.size();
    cluster_.point_of_vertex.push_back(idx);
    cluster_.points.push_back(std::move(rec));
    weights_.push_back(0);
    return idx;
  }

  // Tangent direction of a smooth local curve.
  static ProjParam tangent_of(const BiPoly& g) {
    BiPoly lf = g.lowest_form();
    check_internal(lf.degree() == 1, "tangent of a singular curve");
    return ProjParam::of(-lf.coeff(0, 1), lf.coeff(1, 0));
  }

  void expand(int idx, const BiPoly& g, int depth) {
    require(depth <= depth_cap_, Errc::IterationCap,
            "blowup recursion exceeded " + std::to_string(depth_cap_) + " levels per point");
    check_internal(!g.is_zero() && g.min_grade() >= 1, "expansion off the curve");
    long m = g.min_grade();
    weights_[idx] = m;
    const PointRecord& here = cluster_.points[idx];
    {
      std::ostringstream line;
      line << "t" << idx << ": " << chart_name(here.chart);
      if (here.chart == ChartKind::Origin)
        line << " (" << here.root_a.str() << "," << here.root_b.str() << ")";
      else
        line << " " << here.param.str();
      line << " mult=" << m << " prox={";
      for (size_t i = 0; i < here.prox.size(); ++i) line << (i ? "," : "") << here.prox[i];
      line << "}";
      trace_.push_back(line.str());
    }

    // Essential-point stopping test: smooth, on at most one exceptional
    // strict transform, and transversal to it.  Over-expansion is pruned
    // afterwards, so stopping is an optimization with teeth: it must only
    // fire where nothing below would survive.
    if (m == 1 && here.inventory.size() <= 1) {
      bool transversal = true;
      ProjParam tg = tangent_of(g);
      for (auto& [j, dv] : here.inventory)
        if (tangent_of(dv) == tg) transversal = false;
      if (transversal) return;
    }

    ChildContext cc = child_context(here);
    auto dirs = tangent_directions(g, Scalar::zero(fs_), Scalar::zero(fs_));
    long child_mult_sum = 0;
    for (auto& [pos, mu] : dirs.dirs) {
      PointRecord rec = make_child(idx, cc, pos, fs_);
      rec.vertex = cluster_.size();
      BiPoly next = curve_into_child(g, rec, (int)m);
      int child = push(std::move(rec));
      check_internal(!next.is_zero() && next.min_grade() >= 1,
                     "strict transform misses the tangent direction");
      // classical monotonicity of the multiplicity sequence
      check_internal(next.min_grade() <= m, "multiplicity increased under blowup");
      child_mult_sum += next.min_grade();
      expand(child, next, depth + 1);
    }
    // the strict transform meets E with total multiplicity m
    check_internal(child_mult_sum <= m, "intersection with E exceeds the multiplicity");
  }

  FieldSpec fs_;
  int depth_cap_;
  Cluster cluster_;
  std::vector<long> weights_;
  std::vector<std::string> trace_;
};

// Drop the non-essential tail: repeatedly delete free weight-1 leaves from
// the resolver output, keeping cluster and diagram aligned.
inline CurveDiagramResult assemble_minimal(const CurveResolver& rz) {
  CurveDiagramResult out;
  out.trace = rz.trace();
  const Cluster& full = rz.cluster();
  std::vector<long> w = rz.weights();
  int n = full.size();
  std::vector<bool> alive(n, true);
  for (;;) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      if (!alive[v] || w[v] != 1) continue;
      if (full.points[v].prox.size() >= 2) continue;  // satellite
      bool leaf = true;
      for (int c = 0; c < n; ++c)
        if (alive[c] && full.points[c].parent_point == std::optional<int>(v)) leaf = false;
      if (leaf) {
        alive[v] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::vector<int> remap(n, -1);
  Cluster pruned;
  pruned.field = full.field;
  for (int v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    PointRecord rec = full.points[v];
    remap[v] = pruned.size();
    rec.vertex = remap[v];
    if (rec.parent_point) {
      check_internal(remap[*rec.parent_point] >= 0, "pruned an interior vertex");
      rec.parent_point = remap[*rec.parent_point];
    }
    for (auto& [j, g] : rec.inventory) j = remap[j];
    for (auto& j : rec.prox) j = remap[j];
    pruned.point_of_vertex.push_back(pruned.size());
    pruned.points.push_back(std::move(rec));
    out.diagram.weight.push_back(w[v]);
  }
  out.cluster = pruned;
  if (pruned.size() > 0) {
    out.diagram.base = diagram_of_cluster(pruned).first;
  }
  if (out.diagram.size() > 0) require_valid(out.diagram, true);
  return out;
}

}  // namespace detail

// Minimal Enriques diagram of a plane curve by iterated blowups.
inline CurveDiagramResult curve_diagram(const CurveInput& input, int depth_cap = 64) {
  require(!input.field.dual, Errc::DualFieldInput, "curve analysis runs over a base field");
  require(!input.f.is_zero(), Errc::ZeroPolynomial, "curve polynomial is zero");
  require_squarefree(input.f);

  std::vector<std::pair<Scalar, Scalar>> points;
  std::vector<std::string> notices;
  if (input.base_point) {
    auto [a, b] = *input.base_point;
    require(input.f.eval(a, b).is_zero(), Errc::PointNotOnCurve,
            "the base point does not lie on the curve");
    points.push_back(*input.base_point);
  } else {
    auto sp = singular_points(input.f);
    points = sp.points;
    notices = sp.notices;
  }

  detail::CurveResolver rz(input.field, depth_cap);
  for (auto& [a, b] : points) {
    BiPoly local = input.f.shift(a, b);
    if (local.min_grade() <= 1) {
      notices.push_back("point (" + a.str() + "," + b.str() + ") is a smooth point; skipped");
      continue;
    }
    rz.resolve_at(a, b, local);
  }
  auto out = detail::assemble_minimal(rz);
  out.notices = notices;
  if (out.diagram.size() == 0 && points.empty())
    out.notices.push_back("curve is not singular at any rational point");
  return out;
}

// ---------------------------------------------------------------------------
// Independent cross-check of the blowup transforms: resolve C' and C'' from
// their equations in the charts and compare with the combinatorial recipe.

struct CrossCheckReport {
  long mult = 0;
  bool ordinary = false;
  long delta_prime = 0;   // cod(D) - cod(D'), from the independent resolutions
  long delta_double = 0;  // cod(D) - cod(D'')
  bool match_prime = false;
  bool match_double = false;
  bool identity_prime_ok = false;
  bool identity_double_ok = false;
  WeightedDiagram d_at_p, d_prime, d_double;
};

inline CrossCheckReport blowup_cross_check(const CurveInput& input,
                                           const std::pair<Scalar, Scalar>& point,
                                           int depth_cap = 64) {
  const FieldSpec fs = input.field;
  require(!fs.dual, Errc::DualFieldInput, "curve analysis runs over a base field");
  require_squarefree(input.f);
  require(input.f.eval(point.first, point.second).is_zero(), Errc::PointNotOnCurve,
          "the point does not lie on the curve");
  BiPoly local = input.f.shift(point.first, point.second);
  long m = local.min_grade();
  require(m >= 2, Errc::BadParams, "the point is a smooth point of the curve");

  CurveInput at_p{input.f, fs, point};
  auto d_res = curve_diagram(at_p, depth_cap);
  CrossCheckReport rep;
  rep.mult = m;
  rep.d_at_p = d_res.diagram;
  auto recipe = blowup_at_root(d_res.diagram, 0);
  rep.ordinary = recipe.ordinary;

  BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
  BiPoly f1 = local.subst(x, x * y).divide_pow_x((int)m);  // strict transform, chart 1
  BiPoly f2 = local.subst(x * y, y).divide_pow_y((int)m);  // chart 2

  auto resolve_on_e = [&](bool with_e) -> WeightedDiagram {
    detail::CurveResolver rz(fs, depth_cap);
    BiPoly g1 = with_e ? x * f1 : f1;
    BiPoly g2 = with_e ? y * f2 : f2;
    // candidate points on E in chart 1: for C' the singular points of f1 on
    // u = 0; for C'' every intersection with E is singular on the union
    UniPoly candidates = restrict_x0(f1);
    if (!with_e) {
      UniPoly du = restrict_x0(f1.deriv_x());
      UniPoly dv = restrict_x0(f1.deriv_y());
      if (uni_degree(du) >= 0) candidates = uni_gcd(candidates, du);
      if (uni_degree(dv) >= 0) candidates = uni_gcd(candidates, dv);
      // gcd with a zero derivative restriction: keep the previous candidates
    }
    if (uni_degree(candidates) >= 1) {
      UniPoly residual;
      auto roots = uni_roots(candidates, fs, &residual);
      require(uni_degree(residual) < 1, Errc::FieldExtensionRequired,
              "singular points of the transform are not rational over " + fs.str());
      for (auto& [lam, mu] : roots) {
        BiPoly loc = g1.shift(Scalar::zero(fs), lam);
        if (loc.min_grade() >= 2)
          rz.resolve_at(Scalar::zero(fs), lam, loc);  // chart-1 coordinates as labels
      }
    }
    if (f2.eval(Scalar::zero(fs), Scalar::zero(fs)).is_zero()) {
      if (g2.min_grade() >= 2) rz.resolve_at(Scalar::one(fs), Scalar::zero(fs), g2);
    }
    return detail::assemble_minimal(rz).diagram;
  };

  rep.d_prime = resolve_on_e(false);
  rep.d_double = resolve_on_e(true);
  rep.match_prime = isomorphic(rep.d_prime, recipe.d_prime);
  rep.match_double = isomorphic(rep.d_double, recipe.d_double_prime);

  long cod_d = characters(d_res.diagram).cod;
  long cod_p = rep.d_prime.size() ? characters(rep.d_prime).cod : 0;
  long cod_pp = rep.d_double.size() ? characters(rep.d_double).cod : 0;
  rep.delta_prime = cod_d - cod_p;
  rep.delta_double = cod_d - cod_pp;
  rep.identity_double_ok = rep.delta_double == binom2(m) - 2;
  rep.identity_prime_ok =
      rep.delta_prime >= binom2(m + 1) - 2 &&
      ((rep.delta_prime == binom2(m + 1) - 2) == rep.ordinary);
  return rep;
}

}  // namespace enriques
