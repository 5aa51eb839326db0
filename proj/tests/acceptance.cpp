// Acceptance suite: one pass/fail line per criterion, exact tolerances.

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "enriques/curve.hpp"
#include "enriques/json_io.hpp"
#include "enriques/ramification.hpp"
#include "../tests/gen.hpp"

using namespace enriques;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int idx, const std::string& what, bool ok, double secs) {
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << what;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << " (" << secs << " s)";
  std::cout << line.str() << std::endl;
  if (!ok) ++failures;
}

WeightedCluster standard_wc(const Family& fam, const FieldSpec& fs) {
  auto c = realize_standard(fam.diagram.base, fam.theta, fs);
  return weighted_cluster_of(c, fam.diagram);
}

const std::vector<FieldSpec> kFields = {FieldSpec::rationals(), FieldSpec::prime_field(2),
                                        FieldSpec::prime_field(3), FieldSpec::prime_field(5)};

// --------------------------------------------------------------- criterion 1
void criterion_colength() {
  Timer t;
  bool ok = true;
  double worst_case = 0;
  std::vector<Family> fams;
  for (auto [p, m] : std::vector<std::pair<long, long>>{{2, 2}, {2, 3}, {3, 3}, {3, 4}, {5, 5}})
    fams.push_back(build_family(FamilyKind::M, p, m));
  for (long m : {2, 3, 4}) fams.push_back(build_family(FamilyKind::N, 0, m));
  for (auto& fam : fams) {
    long expected = characters(fam.diagram).deg;
    for (auto& fs : kFields) {
      Timer tc;
      auto rep = enriques_check(standard_wc(fam, fs));
      worst_case = std::max(worst_case, tc.seconds());
      if (!rep.match || rep.colength != expected || rep.deg_formula != expected) {
        ok = false;
        std::cout << "  mismatch: " << fam.id << " over " << fs.str() << " colength "
                  << rep.colength << " vs " << expected << "\n";
      }
      if (tc.seconds() >= 10.0) ok = false;
    }
  }
  report(1, "Enriques colength formula on the M and N families over Q/F2/F3/F5", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 2
void criterion_generators() {
  Timer t;
  bool ok = true;
  struct Case {
    long p, m;
    std::vector<std::string> gens;
    FieldSpec fs;
  };
  std::vector<Case> cases = {
      {2, 2, {"x^3", "x^2*y", "y^2"}, FieldSpec::prime_field(2)},
      {2, 2, {"x^3", "x^2*y", "y^2"}, FieldSpec::rationals()},
      {3, 3, {"x^4", "x^3*y", "x^2*y^2", "y^3"}, FieldSpec::prime_field(3)},
      {3, 3, {"x^4", "x^3*y", "x^2*y^2", "y^3"}, FieldSpec::rationals()},
  };
  for (auto& c : cases) {
    auto fam = build_family(FamilyKind::M, c.p, c.m);
    auto ideal = complete_ideal(standard_wc(fam, c.fs));
    std::vector<BiPoly> gens;
    for (auto& g : c.gens) gens.push_back(parse_polynomial(g, c.fs));
    auto span = generated_slice_at(gens, c.fs, ideal.degree_bound);
    bool mutual = same_slice(ideal, span);
    for (auto& g : gens) mutual = mutual && slice_contains(ideal, g);
    for (auto& f : ideal.basis) mutual = mutual && slice_contains(span, f);
    if (!mutual) {
      ok = false;
      std::cout << "  generator family mismatch for " << fam.id << " over " << c.fs.str()
                << "\n";
    }
  }
  report(2, "computed slices equal the monomial generator families for M(2,2), M(3,3)", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 3
void criterion_kernels() {
  Timer t;
  bool ok = true;
  auto expect_kernel = [&](const Family& fam, const FieldSpec& fs, long want) {
    auto rep = differential_kernel(standard_wc(fam, fs));
    if ((long)rep.kernel_dim != want) {
      ok = false;
      std::cout << "  kernel of " << fam.id << " over " << fs.str() << " is " << rep.kernel_dim
                << ", wanted " << want << "\n";
    }
  };
  for (auto [p, m] : std::vector<std::pair<long, long>>{{2, 2}, {2, 3}, {3, 3}}) {
    auto fam = build_family(FamilyKind::M, p, m);
    expect_kernel(fam, FieldSpec::prime_field(p), 1);
    expect_kernel(fam, FieldSpec::rationals(), 0);
  }
  for (long m : {3, 4}) {
    auto fam = build_family(FamilyKind::N, 0, m);
    for (auto& fs : kFields) expect_kernel(fam, fs, 0);
  }
  // every multiset of weights from {1..4} with up to three roots
  std::vector<std::vector<long>> weight_sets;
  for (long a = 1; a <= 4; ++a) {
    weight_sets.push_back({a});
    for (long b = a; b <= 4; ++b) {
      weight_sets.push_back({a, b});
      for (long c = b; c <= 4; ++c) weight_sets.push_back({a, b, c});
    }
  }
  for (auto& ws : weight_sets)
    for (long p : {2L, 3L})
      expect_kernel(build_family(FamilyKind::AllRoots, 0, 0, ws), FieldSpec::prime_field(p), 0);
  bool within = t.seconds() < 30.0;
  if (!within) ok = false;
  report(3, "differential kernels: M ramified in char p, N and all-roots unramified", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 4
void criterion_prop_2_7() {
  Timer t;
  bool ok = true;
  FieldSpec q = FieldSpec::rationals();
  auto origin = std::make_pair(Scalar::zero(q), Scalar::zero(q));
  struct Case {
    std::string poly;
    bool ordinary;
  };
  for (const auto& c :
       std::vector<Case>{{"x*y", true},
                         {"y^2 - x^3", false},
                         {"y*(y - x^2)", false},
                         {"x*y*(x + y)", true},
                         {"y^3 - x^4", false}}) {
    auto rep = blowup_cross_check({parse_polynomial(c.poly, q), q, origin}, origin);
    bool case_ok = rep.match_prime && rep.match_double && rep.identity_prime_ok &&
                   rep.identity_double_ok && rep.ordinary == c.ordinary &&
                   rep.delta_double == binom2(rep.mult) - 2 &&
                   (rep.delta_prime == binom2(rep.mult + 1) - 2) == c.ordinary;
    if (!case_ok) {
      ok = false;
      std::cout << "  cross-check failed for " << c.poly << "\n";
    }
  }
  report(4, "blowup transform identities and independent resolutions on the curve corpus", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 5
void criterion_roundtrip() {
  Timer t;
  bool ok = true;
  for (int n = 1; n <= 4; ++n) {
    std::set<std::string> from_relations, from_diagrams;
    // every binary relation on n vertices
    int pairs = n * n;
    for (long mask = 0; mask < (1L << pairs); ++mask) {
      ProximityStructureData ps;
      ps.n = n;
      ps.prox.resize(n);
      for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u)
          if (mask & (1L << (v * n + u))) ps.prox[v].push_back(u);
      if (!validate_structure(ps).ok()) continue;
      UnweightedDiagram d;
      try {
        d = from_proximity_structure(ps);
      } catch (const Error&) {
        continue;  // loops
      }
      if (!validate(d).ok() || to_proximity_structure(d).prox != ps.prox) {
        ok = false;
        continue;
      }
      std::ostringstream key;
      for (auto& pr : ps.prox) {
        for (int u : pr) key << u << ",";
        key << ";";
      }
      from_relations.insert(key.str());
    }
    // every labeled diagram, enumerated independently: acyclic parent maps
    // with satellite choices obeying the laws
    std::vector<std::optional<int>> parent(n);
    std::function<void(int)> fill_parents = [&](int v) {
      if (v == n) {
        // check acyclicity
        for (int w = 0; w < n; ++w) {
          int steps = 0;
          std::optional<int> cur = w;
          while (cur && ++steps <= n) cur = parent[*cur];
          if (steps > n) return;
        }
        // enumerate proximity choices: every non-root is proximate to its
        // parent and optionally to one remote ancestor
        std::vector<std::vector<int>> options(n);
        for (int w = 0; w < n; ++w) {
          options[w] = {-1};
          if (parent[w]) {
            std::vector<int> anc;
            std::optional<int> cur = parent[*parent[w]] ? parent[*parent[w]] : std::nullopt;
            int guard = 0;
            cur = parent[w];
            cur = parent[*cur];
            while (cur && ++guard <= n) {
              anc.push_back(*cur);
              cur = parent[*cur];
            }
            for (int r : anc) options[w].push_back(r);
          }
        }
        std::vector<int> pick(n, -1);
        std::function<void(int)> fill_prox = [&](int w) {
          if (w == n) {
            UnweightedDiagram d;
            for (int x = 0; x < n; ++x) {
              std::vector<int> pr;
              if (parent[x]) pr.push_back(*parent[x]);
              if (pick[x] >= 0) pr.push_back(pick[x]);
              d.add_vertex(parent[x], pr);
            }
            if (!validate(d).ok()) return;
            std::ostringstream key;
            for (auto& pr : d.prox) {
              for (int u : pr) key << u << ",";
              key << ";";
            }
            from_diagrams.insert(key.str());
            return;
          }
          for (int o : options[w]) {
            pick[w] = o;
            fill_prox(w + 1);
          }
          pick[w] = -1;
        };
        fill_prox(0);
        return;
      }
      for (int p = -1; p < n; ++p) {
        if (p == v) continue;
        parent[v] = p < 0 ? std::nullopt : std::optional<int>(p);
        fill_parents(v + 1);
      }
    };
    fill_parents(0);
    if (from_relations != from_diagrams) {
      ok = false;
      std::cout << "  n=" << n << ": " << from_relations.size() << " relations vs "
                << from_diagrams.size() << " diagrams\n";
    }
  }
  // sampled n = 5
  std::mt19937_64 rng(505050);
  int passed = 0;
  for (int it = 0; it < 20000; ++it) {
    ProximityStructureData ps;
    ps.n = 5;
    ps.prox.resize(5);
    for (int v = 0; v < 5; ++v)
      for (int u = 0; u < 5; ++u)
        if (rng() % 8 == 0) ps.prox[v].push_back(u);
    if (!validate_structure(ps).ok()) continue;
    try {
      auto d = from_proximity_structure(ps);
      if (!validate(d).ok() || to_proximity_structure(d).prox != ps.prox) ok = false;
      ++passed;
    } catch (const Error&) {
    }
  }
  if (passed < 100) ok = false;
  bool within = t.seconds() < 60.0;
  if (!within) ok = false;
  report(5, "proximity structures <-> diagrams bijectively (exhaustive n<=4, sampled n=5)", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 6
void criterion_orderings_auts() {
  Timer t;
  bool ok = true;
  std::mt19937_64 rng(606060);
  for (int it = 0; it < 60; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 7));
    // brute-force linear extension count
    int n = d.size();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    long brute = 0;
    do {
      std::vector<int> posof(n);
      for (int i = 0; i < n; ++i) posof[perm[i]] = i;
      bool good = true;
      for (int v = 0; v < n && good; ++v)
        if (d.parent[v] && posof[*d.parent[v]] > posof[v]) good = false;
      if (good) ++brute;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (orderings_count(d) != brute) ok = false;
  }
  long factorial = 1;
  for (long r = 1; r <= 4; ++r) {
    factorial *= r;
    auto fam = build_family(FamilyKind::AllRoots, 0, 0, std::vector<long>(r, 3));
    if ((long)automorphisms(fam.diagram).size() != factorial) ok = false;
  }
  // the automorphism action on orderings is free
  for (int it = 0; it < 25; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 6));
    auto auts = automorphisms(d);
    auto ths = orderings_list(d);
    for (auto& g : auts) {
      bool id = true;
      for (int v = 0; v < d.size(); ++v)
        if (g[v] != v) id = false;
      if (id) continue;
      for (auto& th : ths) {
        Ordering th2(d.size());
        for (int v = 0; v < d.size(); ++v) th2[v] = th[g[v]];
        if (!is_ordering(d, th2) || th2 == th) ok = false;
      }
    }
  }
  report(6, "ordering counts match brute force; Aut(r equal roots) = r!; free action", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 7
void criterion_matrix_criterion() {
  Timer t;
  bool ok = true;
  std::mt19937_64 rng(707070);
  std::map<int, std::vector<std::pair<UnweightedDiagram, Ordering>>> by_size;
  int diagrams = 0;
  while (diagrams < 220) {
    int n = 2 + (int)(rng() % 5);
    auto d = testgen::rnd_diagram(rng, n);
    ++diagrams;
    auto ths = orderings_list(d);
    size_t keep = std::min<size_t>(ths.size(), 24);
    for (size_t k = 0; k < keep; ++k) by_size[n].push_back({d, ths[k]});
  }
  long pairs = 0;
  for (auto& [n, items] : by_size) {
    for (auto& a : items) {
      // reflexivity
      if (eset_relation(a.first, a.second, a.first, a.second).order != ESetOrder::Equal)
        ok = false;
    }
    for (size_t i = 0; i < items.size(); ++i)
      for (size_t j = 0; j < items.size(); ++j) {
        if (pairs > 300000) break;
        auto& a = items[i];
        auto& b = items[j];
        auto rel = eset_relation(a.first, a.second, b.first, b.second);
        ++pairs;
        bool equal_mats =
            proximity_matrix(a.first, a.second) == proximity_matrix(b.first, b.second);
        if ((rel.order == ESetOrder::Equal) != equal_mats) ok = false;
      }
    // transitivity on sampled triples
    for (int s = 0; s < 4000 && items.size() >= 3; ++s) {
      auto& a = items[rng() % items.size()];
      auto& b = items[rng() % items.size()];
      auto& c = items[rng() % items.size()];
      auto ab = eset_relation(a.first, a.second, b.first, b.second).order;
      auto bc = eset_relation(b.first, b.second, c.first, c.second).order;
      bool ab_ge = ab == ESetOrder::ContainedIn || ab == ESetOrder::Equal;
      bool bc_ge = bc == ESetOrder::ContainedIn || bc == ESetOrder::Equal;
      if (ab_ge && bc_ge) {
        auto ac = eset_relation(a.first, a.second, c.first, c.second).order;
        if (!(ac == ESetOrder::ContainedIn || ac == ESetOrder::Equal)) ok = false;
      }
    }
  }
  report(7, "matrix criterion: Equal iff equal matrices; containment reflexive, transitive", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 8
void criterion_product_agreement() {
  Timer t;
  bool ok = true;
  std::mt19937_64 rng(808080);
  for (auto& fs : kFields) {
    for (int it = 0; it < 10; ++it) {
      int r = 1 + (int)(rng() % 3);
      std::vector<long> weights;
      for (int i = 0; i < r; ++i) weights.push_back(1 + (long)(rng() % 3));
      auto fam = build_family(FamilyKind::AllRoots, 0, 0, weights);
      auto wc = standard_wc(fam, fs);
      auto a = complete_ideal(wc);
      std::vector<std::pair<Scalar, Scalar>> pts;
      for (auto& p : wc.cluster.points) pts.push_back({p.root_a, p.root_b});
      auto b = product_ideal(pts, weights, fs);
      int N = std::max(a.degree_bound, b.degree_bound);
      if (!same_slice(complete_ideal_at(wc, N), product_ideal(pts, weights, fs, 64, N))) {
        ok = false;
        std::cout << "  disagreement for " << fam.id << " over " << fs.str() << "\n";
      }
    }
  }
  report(8, "product ideals equal cluster ideals on all-roots clusters (10 per field)", ok,
         t.seconds());
}

// --------------------------------------------------------------- criterion 9
void criterion_curves() {
  Timer t;
  bool ok = true;
  FieldSpec q = FieldSpec::rationals();
  FieldSpec f2 = FieldSpec::prime_field(2);
  auto origin_q = std::make_pair(Scalar::zero(q), Scalar::zero(q));
  auto origin_2 = std::make_pair(Scalar::zero(f2), Scalar::zero(f2));
  struct Case {
    BiPoly poly;
    std::pair<Scalar, Scalar> at;
    WeightedDiagram want;
  };
  std::vector<Case> cases = {
      {parse_polynomial("y^2 - x^3", q), origin_q, build_family(FamilyKind::M, 2, 2).diagram},
      {parse_polynomial("y*(y - x^2)", q), origin_q,
       WeightedDiagram{[] {
                         UnweightedDiagram d;
                         d.add_vertex(std::nullopt, {});
                         d.add_vertex(0, {0});
                         return d;
                       }(),
                       {2, 2}}},
      {parse_polynomial("y*(y - x^2)*(y - x)", q), origin_q,
       build_family(FamilyKind::N, 0, 3).diagram},
      {parse_polynomial("y^2 - x^3", f2), origin_2, build_family(FamilyKind::M, 2, 2).diagram},
  };
  for (auto& c : cases) {
    Timer tc;
    auto res = curve_diagram({c.poly, c.poly.spec(), c.at});
    if (!(res.diagram == c.want) || tc.seconds() >= 5.0) {
      ok = false;
      std::cout << "  wrong diagram for " << poly_to_string(c.poly) << "\n";
    }
  }
  report(9, "curve diagrams: cusp, tacnode, N_3, and the inseparable-tangency cusp", ok,
         t.seconds());
}

// -------------------------------------------------------------- criterion 10
void criterion_kernel_direction() {
  Timer t;
  bool ok = true;
  auto fam = build_family(FamilyKind::M, 2, 2);
  auto rep = differential_kernel(standard_wc(fam, FieldSpec::prime_field(2)));
  if (rep.kernel_dim != 1) ok = false;
  if (ok) {
    auto& v = rep.kernel_basis[0];
    for (size_t i = 0; i < rep.frame.params.size(); ++i) {
      bool is_slide = rep.frame.params[i].kind == TangentFrame::Slide;
      if (is_slide && v[i].is_zero()) ok = false;
      if (!is_slide && !v[i].is_zero()) ok = false;
    }
  }
  report(10, "the M(2,2)/F2 kernel is the slide along E: zero root parts, nonzero b", ok,
         t.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_colength();
  criterion_generators();
  criterion_kernels();
  criterion_prop_2_7();
  criterion_roundtrip();
  criterion_orderings_auts();
  criterion_matrix_criterion();
  criterion_product_agreement();
  criterion_curves();
  criterion_kernel_direction();
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
            << " (total " << (long)total.seconds() << " s)" << std::endl;
  return failures == 0 ? 0 : 1;
}
