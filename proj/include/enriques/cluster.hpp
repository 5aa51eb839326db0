#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enriques/bipoly.hpp"
#include "enriques/diagram.hpp"

namespace enriques {

// ---------------------------------------------------------------------------
// A cluster is a realized sequence of arbitrarily near points, kept as
// blowup-chart records.  Every point sits at the origin of its own local
// coordinates; sub_x/sub_y express the parent chart's coordinates in the
// local ones, and the inventory carries the strict transforms of earlier
// exceptional divisors that pass through the point.

enum class ChartKind { Origin, Chart1, Chart2 };

inline const char* chart_name(ChartKind c) {
  switch (c) {
    case ChartKind::Origin: return "origin";
    case ChartKind::Chart1: return "chart1";
    case ChartKind::Chart2: return "chart2";
  }
  return "?";
}

struct PointRecord {
  int vertex = 0;                        // diagram vertex this point realizes
  std::optional<int> parent_point;       // index of the tree parent's point
  ChartKind chart = ChartKind::Origin;
  Scalar root_a, root_b;                 // Origin only: coordinates in the plane
  ProjParam param{Scalar(), Scalar()};   // non-root only: position on E
  BiPoly sub_x, sub_y;                   // parent-local coords in local coords
  int exc_var = -1;                      // 0: x is exceptional, 1: y, -1: root
  std::vector<std::pair<int, BiPoly>> inventory;  // (point index j, transform of E_j)
  std::vector<int> prox;                 // derived proximities, point indices
};

struct Cluster {
  FieldSpec field;
  std::vector<PointRecord> points;       // in build order
  std::vector<int> point_of_vertex;      // vertex id -> point index

  int size() const { return (int)points.size(); }
};

// Realization data: roots get plane coordinates, free non-roots a position
// on the exceptional line, satellites nothing.
struct RealizationParams {
  std::map<int, std::pair<Scalar, Scalar>> roots;  // vertex -> (a, b)
  std::map<int, ProjParam> free_points;            // vertex -> [l0 : l1]
};

namespace detail {

// Chart-1 strict transform of a curve through the parent origin.
inline BiPoly chart1_transform(const BiPoly& g) {
  const FieldSpec& fs = g.spec();
  BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
  return g.subst(x, x * y).divide_pow_x(g.min_grade());
}

inline BiPoly chart2_transform(const BiPoly& g) {
  const FieldSpec& fs = g.spec();
  BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
  return g.subst(x * y, y).divide_pow_y(g.min_grade());
}

// Value of the chart-1 transform at the point (0, lambda) of E.
inline Scalar on_e_chart1(const BiPoly& g1, const Scalar& lambda) {
  return g1.eval(Scalar::zero(g1.spec()), lambda);
}

// The strict transforms of a point's inventory in both blowup charts.
struct ChildContext {
  std::vector<std::pair<int, BiPoly>> inv1, inv2;
};

inline ChildContext child_context(const PointRecord& parent) {
  ChildContext cc;
  for (auto& [j, g] : parent.inventory) {
    check_internal(g.min_grade() == 1, "inventory divisor not smooth at the point");
    cc.inv1.push_back({j, chart1_transform(g)});
    cc.inv2.push_back({j, chart2_transform(g)});
  }
  return cc;
}

inline Scalar divisor_value_at(const ChildContext& cc, size_t k, const ProjParam& pos) {
  if (pos.at_infinity())
    return cc.inv2[k].second.eval(pos.l0, Scalar::zero(pos.l0.spec()));
  return on_e_chart1(cc.inv1[k].second, pos.l1);
}

// Child point record at `pos` on the exceptional line of `parent_idx`:
// chart choice, recentered substitutions, surviving inventory, and the
// derived proximities.  The caller assigns the vertex id.
inline PointRecord make_child(int parent_idx, const ChildContext& cc, const ProjParam& pos,
                              const FieldSpec& fs) {
  PointRecord rec;
  rec.parent_point = parent_idx;
  rec.param = pos;
  BiPoly x = BiPoly::var_x(fs), y = BiPoly::var_y(fs);
  if (!pos.at_infinity()) {
    rec.chart = ChartKind::Chart1;
    rec.exc_var = 0;
    rec.sub_x = x;
    rec.sub_y = x * (y + BiPoly::constant(pos.l1));
    rec.inventory.push_back({parent_idx, x});
    for (auto& [j, g] : cc.inv1)
      if (on_e_chart1(g, pos.l1).is_zero())
        rec.inventory.push_back({j, g.shift(Scalar::zero(fs), pos.l1)});
  } else {
    rec.chart = ChartKind::Chart2;
    rec.exc_var = 1;
    rec.sub_x = (x + BiPoly::constant(pos.l0)) * y;
    rec.sub_y = y;
    rec.inventory.push_back({parent_idx, y});
    for (auto& [j, g] : cc.inv2)
      if (g.eval(pos.l0, Scalar::zero(fs)).is_zero())
        rec.inventory.push_back({j, g.shift(pos.l0, Scalar::zero(fs))});
  }
  for (auto& [j, g] : rec.inventory) rec.prox.push_back(j);
  std::sort(rec.prox.begin(), rec.prox.end());
  rec.prox.erase(std::unique(rec.prox.begin(), rec.prox.end()), rec.prox.end());
  return rec;
}

// Strict transform of a local curve into the child's recentered chart.
inline BiPoly curve_into_child(const BiPoly& g, const PointRecord& child, int drop_power) {
  BiPoly img = g.subst(child.sub_x, child.sub_y);
  return child.exc_var == 0 ? img.divide_pow_x(drop_power) : img.divide_pow_y(drop_power);
}

class Realizer {
 public:
  Realizer(const UnweightedDiagram& d, const Ordering& th, const FieldSpec& fs)
      : d_(d), th_(th), fs_(fs) {
    require_valid(d);
    require_ordering(d, th);
    cluster_.field = fs;
    cluster_.point_of_vertex.assign(d.size(), -1);
  }

  // candidates_for(v) yields the positions to try for a free vertex; the
  // first admissible one wins.  Fixed-parameter realization passes a single
  // candidate, the standard placement a ladder of them.
  Cluster run(const std::map<int, std::pair<Scalar, Scalar>>& roots,
              const std::function<std::vector<ProjParam>(int)>& candidates_for) {
    int n = d_.size();
    std::vector<int> vertex_at(n);
    for (int v = 0; v < n; ++v) vertex_at[th_[v]] = v;

    for (int pos = 0; pos < n; ++pos) {
      int v = vertex_at[pos];
      if (d_.is_root(v)) {
        place_root(v, roots.at(v));
      } else {
        place_near_point(v, candidates_for);
      }
    }
    return cluster_;
  }

 private:
  void place_root(int v, const std::pair<Scalar, Scalar>& ab) {
    for (auto& p : cluster_.points)
      if (p.chart == ChartKind::Origin && p.root_a.value_part() == ab.first.value_part() &&
          p.root_b.value_part() == ab.second.value_part())
        fail(Errc::CollisionError, "two roots at the same point of the plane",
             {p.vertex, v});
    PointRecord rec;
    rec.vertex = v;
    rec.chart = ChartKind::Origin;
    rec.root_a = ab.first;
    rec.root_b = ab.second;
    rec.sub_x = BiPoly::var_x(fs_) + BiPoly::constant(ab.first);
    rec.sub_y = BiPoly::var_y(fs_) + BiPoly::constant(ab.second);
    push(std::move(rec));
  }

  void place_near_point(int v, const std::function<std::vector<ProjParam>(int)>& candidates_for) {
    int pv = *d_.parent[v];
    int pi = cluster_.point_of_vertex[pv];
    check_internal(pi >= 0, "parent point not built yet");
    const PointRecord& par = cluster_.points[pi];
    ChildContext cc = child_context(par);

    bool satellite = d_.is_satellite(v);
    std::vector<ProjParam> candidates;
    if (satellite) {
      candidates.push_back(forced_position(v, pi, par));
    } else {
      candidates = candidates_for(v);
      require(!candidates.empty(), Errc::ArityMismatch,
              "no position supplied for free vertex " + std::to_string(v));
    }

    std::string last_clash;
    for (auto& pos : candidates) {
      auto outcome = try_position(v, pi, pos, cc);
      if (outcome.first) return;  // placed
      last_clash = outcome.second;
    }
    if (candidates.size() > 1)
      fail(Errc::RealizationImpossible, "no admissible position on E for vertex " +
                                            std::to_string(v) + " over " + fs_.str());
    fail(last_clash.substr(0, 9) == "collision" ? Errc::CollisionError : Errc::ProximityClash,
         last_clash, {v});
  }

  // The satellite position: tangent direction of the required divisor.
  ProjParam forced_position(int v, int pi, const PointRecord& par) {
    int remote_vertex = *d_.remote_target(v);
    int rj = cluster_.point_of_vertex[remote_vertex];
    const BiPoly* g = nullptr;
    for (auto& [j, gj] : par.inventory)
      if (j == rj) g = &gj;
    if (!g)
      fail(Errc::ForcedPointMissing,
           "strict transform of E_" + std::to_string(remote_vertex) +
               " does not pass through the parent of vertex " + std::to_string(v),
           {v, remote_vertex});
    BiPoly lf = g->lowest_form();
    check_internal(lf.degree() == 1, "inventory divisor with nonlinear tangent");
    Scalar alpha = lf.coeff(1, 0), beta = lf.coeff(0, 1);
    return ProjParam::of(-beta, alpha);
  }

  // Returns (placed, clash message).
  std::pair<bool, std::string> try_position(int v, int pi, const ProjParam& pos,
                                            const ChildContext& cc) {
    // sibling collisions: value parts must differ
    for (auto& p : cluster_.points) {
      if (p.parent_point != std::optional<int>(pi)) continue;
      bool same = p.param.at_infinity() == pos.at_infinity() &&
                  (pos.at_infinity()
                       ? p.param.l0.value_part() == pos.l0.value_part()
                       : p.param.l1.value_part() == pos.l1.value_part());
      if (same)
        return {false, "collision: vertices " + std::to_string(p.vertex) + " and " +
                           std::to_string(v) + " coincide on E"};
    }

    // strictness: required divisors vanish exactly, forbidden ones are units
    for (size_t k = 0; k < cc.inv1.size(); ++k) {
      int j = cc.inv1[k].first;
      Scalar val = divisor_value_at(cc, k, pos);
      bool required = d_.proximate(v, cluster_.points[j].vertex);
      if (required) {
        check_internal(val.is_zero(), "forced position misses its divisor");
      } else if (!val.is_unit()) {
        return {false, "position of vertex " + std::to_string(v) +
                           " lies on the strict transform of E_" +
                           std::to_string(cluster_.points[j].vertex)};
      }
    }

    PointRecord rec = make_child(pi, cc, pos, fs_);
    rec.vertex = v;

    // the derived relation must equal the diagram's
    std::vector<int> expected;
    for (int u : d_.prox[v]) expected.push_back(cluster_.point_of_vertex[u]);
    std::sort(expected.begin(), expected.end());
    check_internal(rec.prox == expected, "derived proximity disagrees with the diagram");

    push(std::move(rec));
    return {true, ""};
  }

  void push(PointRecord rec) {
    cluster_.point_of_vertex[rec.vertex] = cluster_.size();
    cluster_.points.push_back(std::move(rec));
  }

  const UnweightedDiagram& d_;
  const Ordering& th_;
  FieldSpec fs_;
  Cluster cluster_;
};

}  // namespace detail

// Realize an ordered diagram over a field with explicit parameters.
inline Cluster realize(const UnweightedDiagram& d, const Ordering& th,
                       const RealizationParams& params, const FieldSpec& fs) {
  // arity: exactly the roots and the free non-roots carry data, nothing else
  for (int v = 0; v < d.size(); ++v) {
    int t = d.type_of(v);
    if (t == 2) {
      require(params.roots.count(v), Errc::ArityMismatch,
              "missing coordinates for root " + std::to_string(v));
    } else if (t == 1) {
      require(params.free_points.count(v), Errc::ArityMismatch,
              "missing exceptional parameter for free vertex " + std::to_string(v));
    }
  }
  for (auto& [v, ab] : params.roots)
    require(v >= 0 && v < d.size() && d.type_of(v) == 2, Errc::ArityMismatch,
            "plane coordinates supplied for non-root vertex " + std::to_string(v));
  for (auto& [v, pp] : params.free_points)
    require(v >= 0 && v < d.size() && d.type_of(v) == 1, Errc::ArityMismatch,
            "exceptional parameter supplied for vertex " + std::to_string(v) +
                " which is not a free non-root");
  require(2 * (long)params.roots.size() + (long)params.free_points.size() == dim_of(d),
          Errc::ArityMismatch, "parameter count differs from dim of the diagram");
  detail::Realizer rz(d, th, fs);
  return rz.run(params.roots, [&](int v) {
    return std::vector<ProjParam>{params.free_points.at(v)};
  });
}

// Standard placement: roots on a fixed grid, free points at the smallest
// admissible positions.  Mirrors the coordinates of the worked examples.
inline Cluster realize_standard(const UnweightedDiagram& d, const Ordering& th,
                                const FieldSpec& fs) {
  detail::Realizer rz(d, th, fs);
  std::map<int, std::pair<Scalar, Scalar>> roots;
  long k = 0;
  for (int pos = 0; pos < d.size(); ++pos) {
    int v = -1;
    for (int w = 0; w < d.size(); ++w)
      if (th[w] == pos) v = w;
    if (!d.is_root(v)) continue;
    long a, b;
    if (fs.kind == FieldKind::PrimeField) {
      require(k < fs.p * fs.p, Errc::RealizationImpossible,
              "more roots than points of the plane over " + fs.str());
      a = k % fs.p;
      b = k / fs.p;
    } else {
      a = k;
      b = 0;
    }
    roots[v] = {Scalar::of_int(fs, a), Scalar::of_int(fs, b)};
    ++k;
  }
  return rz.run(roots, [&](int) {
    std::vector<ProjParam> cand;
    long limit = fs.kind == FieldKind::PrimeField ? fs.p : 64;
    for (long t = 0; t < limit; ++t) cand.push_back(ProjParam::finite(Scalar::of_int(fs, t)));
    cand.push_back(ProjParam::infinite(fs));
    return cand;
  });
}

// Extract the parameters a cluster was built from (vertex-keyed).
inline RealizationParams params_of_cluster(const Cluster& c, const UnweightedDiagram& d) {
  RealizationParams out;
  for (auto& p : c.points) {
    if (p.chart == ChartKind::Origin)
      out.roots[p.vertex] = {p.root_a, p.root_b};
    else if (d.type_of(p.vertex) == 1)
      out.free_points[p.vertex] = p.param;
  }
  return out;
}

// Read the diagram back off the realized cluster: proximities come from the
// stored strict-transform incidences, the ordering is the build order.
inline std::pair<UnweightedDiagram, Ordering> diagram_of_cluster(const Cluster& c) {
  ProximityStructureData ps;
  ps.n = c.size();
  ps.prox.resize(ps.n);
  for (int i = 0; i < c.size(); ++i) ps.prox[i] = c.points[i].prox;
  UnweightedDiagram d = from_proximity_structure(ps);
  return {d, identity_ordering(ps.n)};
}

}  // namespace enriques
