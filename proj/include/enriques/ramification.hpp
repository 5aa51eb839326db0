#pragma once

#include <string>
#include <vector>

#include "enriques/ideal.hpp"
#include "enriques/transform.hpp"

namespace enriques {

// ---------------------------------------------------------------------------
// First-order deformation parameters of a cluster: two plane directions per
// root, one slide along E per free non-root, nothing at satellites.

struct TangentFrame {
  enum Kind { RootX = 0, RootY = 1, Slide = 2 };
  struct Param {
    int vertex;
    Kind kind;
  };
  std::vector<Param> params;
};

inline TangentFrame tangent_frame(const WeightedDiagram& d, const Ordering& th) {
  require_valid(d);
  require_ordering(d.base, th);
  int n = d.size();
  std::vector<int> vertex_at(n);
  for (int v = 0; v < n; ++v) vertex_at[th[v]] = v;
  TangentFrame out;
  for (int pos = 0; pos < n; ++pos) {
    int v = vertex_at[pos];
    switch (d.base.type_of(v)) {
      case 2:
        out.params.push_back({v, TangentFrame::RootX});
        out.params.push_back({v, TangentFrame::RootY});
        break;
      case 1:
        out.params.push_back({v, TangentFrame::Slide});
        break;
      default:
        break;
    }
  }
  check_internal((long)out.params.size() == dim_of(d.base), "frame arity mismatch");
  return out;
}

struct DifferentialReport {
  long dim = 0;
  size_t rank = 0;
  size_t kernel_dim = 0;
  std::vector<std::vector<Scalar>> kernel_basis;  // coordinates in frame order
  TangentFrame frame;
  FieldSpec field;
};

namespace detail {

inline Scalar eps(const FieldSpec& dual_fs) { return Scalar::dual(dual_fs, 0, 1); }

// Parameters of the cluster, promoted to K[e] and nudged by e in one slot.
inline RealizationParams deformed_params(const RealizationParams& base, const FieldSpec& dual_fs,
                                         const TangentFrame::Param& dir) {
  RealizationParams out;
  for (auto& [v, ab] : base.roots) {
    Scalar a = ab.first.promoted(), b = ab.second.promoted();
    if (v == dir.vertex && dir.kind == TangentFrame::RootX) a += eps(dual_fs);
    if (v == dir.vertex && dir.kind == TangentFrame::RootY) b += eps(dual_fs);
    out.roots[v] = {a, b};
  }
  for (auto& [v, pp] : base.free_points) {
    Scalar l0 = pp.l0.promoted(), l1 = pp.l1.promoted();
    if (v == dir.vertex && dir.kind == TangentFrame::Slide) {
      if (pp.at_infinity())
        l0 += eps(dual_fs);  // slide in the chart-2 coordinate
      else
        l1 += eps(dual_fs);
    }
    out.free_points[v] = ProjParam{l0, l1};
  }
  return out;
}

}  // namespace detail

// The kernel of the tangent map of the cluster-to-subscheme assignment,
// computed with dual numbers: deform the cluster to first order in each
// frame direction, recompute the truncated ideal with the same pivots, and
// read the epsilon-parts of the generators modulo the base ideal.
inline DifferentialReport differential_kernel(const WeightedCluster& wc, int degree_cap = 64) {
  const FieldSpec fs = wc.cluster.field;
  require(!fs.dual, Errc::DualFieldInput, "differential of an already-dual cluster");
  require_weighted_cluster(wc);

  auto [dia, th] = diagram_of_cluster(wc.cluster);
  WeightedDiagram wd{dia, wc.weights};
  require_valid(wd);
  TangentFrame frame = tangent_frame(wd, th);

  DifferentialReport rep;
  rep.dim = (long)frame.params.size();
  rep.frame = frame;
  rep.field = fs;

  auto ideal = complete_ideal(wc, degree_cap);

  // The differential must be read off a generating set, and the stabilized
  // slice need not generate (all of its members can share a factor).  The
  // slice at the generating bound always does: m^d lies in any ideal of
  // colength d, so every member splits into slice multiples plus a
  // low-degree part.
  int N = generating_bound(ideal);
  require(N <= degree_cap, Errc::DegreeOverflow, "generating bound exceeds the degree cap");
  std::vector<Exp> mons;
  ExactMatrix cond = cluster_condition_matrix(wc, N, &mons);
  Rref base = rref(cond);
  const size_t rows = cond.rows(), cols = cond.cols();

  // A tangent direction kills every generator's epsilon-part modulo the
  // ideal iff the derivative matrix of the deformed conditions lies in the
  // row space of the base conditions: the quotient by the ideal slice
  // embeds through the condition matrix, so the class of the epsilon-part
  // of a generator u is (up to sign) M1 u, and M1 kills ker(M) exactly
  // when its rows reduce to zero against M.
  const FieldSpec dual_fs = fs.with_dual();
  RealizationParams params = params_of_cluster(wc.cluster, dia);
  ExactMatrix differential(fs, rows * cols, frame.params.size());
  for (size_t j = 0; j < frame.params.size(); ++j) {
    auto dparams = detail::deformed_params(params, dual_fs, frame.params[j]);
    Cluster dc = realize(dia, th, dparams, dual_fs);
    WeightedCluster dwc{dc, wc.weights};
    ExactMatrix dcond = cluster_condition_matrix(dwc, N);
    check_internal(dcond.rows() == rows && dcond.cols() == cols, "deformed shape mismatch");
    // split; the value part must reproduce the base conditions
    ExactMatrix deriv(fs, rows, cols);
    for (size_t r = 0; r < rows; ++r)
      for (size_t c = 0; c < cols; ++c) {
        check_internal(dcond.at(r, c).value_part() == cond.at(r, c),
                       "deformed conditions disagree at order zero");
        deriv.set(r, c, dcond.at(r, c).deriv_part());
      }
    // reduce each derivative row against the base row space
    for (size_t r = 0; r < rows; ++r) {
      std::vector<Scalar> h(cols, Scalar::zero(fs));
      for (size_t c = 0; c < cols; ++c) h[c] = deriv.at(r, c);
      for (size_t i = 0; i < base.pivot_cols.size(); ++i) {
        Scalar f = h[base.pivot_cols[i]];
        if (f.is_zero()) continue;
        for (size_t c = 0; c < cols; ++c) h[c] -= f * base.mat.at(i, c);
      }
      for (size_t c = 0; c < cols; ++c) differential.set(r * cols + c, j, h[c]);
    }
  }

  auto k = solve_kernel(differential);
  rep.rank = k.rank;
  rep.kernel_dim = k.kernel.size();
  rep.kernel_basis = k.kernel;
  check_internal(rep.rank + rep.kernel_dim == (size_t)rep.dim, "rank-nullity failed");
  return rep;
}

// ---------------------------------------------------------------------------
// Characteristic sweep probing the unramifiedness guess: tabulate the kernel
// dimension of each diagram over each prime against the predicate
// p > (sum of weights) / 2, and flag any counterexample loudly.

struct ScanRow {
  std::string id;
  long p = 0;
  long dim = 0;
  long sum_m = 0;
  bool predicate = false;
  long kernel_dim = -1;
  std::string status;  // "ok", "COUNTEREXAMPLE", or an error class
};

inline std::vector<ScanRow> inseparability_scan(const std::vector<Family>& families,
                                                const std::vector<long>& primes,
                                                int degree_cap = 64) {
  std::vector<ScanRow> table;
  for (auto& fam : families) {
    long sum_m = 0;
    for (long m : fam.diagram.weight) sum_m += m;
    for (long p : primes) {
      ScanRow row;
      row.id = fam.id;
      row.p = p;
      row.dim = dim_of(fam.diagram.base);
      row.sum_m = sum_m;
      row.predicate = 2 * p > sum_m;
      try {
        FieldSpec fs = FieldSpec::prime_field(p);
        auto cluster = realize_standard(fam.diagram.base, fam.theta, fs);
        auto wc = weighted_cluster_of(cluster, fam.diagram);
        auto rep = differential_kernel(wc, degree_cap);
        row.kernel_dim = (long)rep.kernel_dim;
        row.status = (row.kernel_dim > 0 && row.predicate) ? "COUNTEREXAMPLE" : "ok";
      } catch (const Error& e) {
        row.status = errc_name(e.code());
      }
      table.push_back(row);
    }
  }
  return table;
}

}  // namespace enriques
