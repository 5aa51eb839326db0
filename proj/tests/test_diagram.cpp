#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "enriques/transform.hpp"
#include "gen.hpp"

using namespace enriques;

namespace {

// The cusp diagram: V0 <- V1 <- V2 with V1 > V0 and V2 > {V1, V0}.
WeightedDiagram cusp_diagram(long w0 = 2, long w1 = 1, long w2 = 1) {
  WeightedDiagram d;
  d.base.add_vertex(std::nullopt, {});
  d.base.add_vertex(0, {0});
  d.base.add_vertex(1, {0, 1});
  d.weight = {w0, w1, w2};
  return d;
}

bool has_violation(const ValidationReport& rep, const std::string& law, int vertex) {
  for (auto& it : rep.items)
    if (it.law == law &&
        std::find(it.vertices.begin(), it.vertices.end(), vertex) != it.vertices.end())
      return true;
  return false;
}

// Brute-force linear extension counter, the oracle for orderings().
long brute_force_orderings(const UnweightedDiagram& d) {
  int n = d.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  long count = 0;
  do {
    std::vector<int> posof(n);
    for (int i = 0; i < n; ++i) posof[perm[i]] = i;
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      if (d.parent[v] && posof[*d.parent[v]] > posof[v]) ok = false;
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// Brute-force automorphism search over all permutations.
std::vector<std::vector<int>> brute_force_auts(const UnweightedDiagram& d,
                                               const std::vector<long>* wt) {
  int n = d.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (wt && (*wt)[v] != (*wt)[perm[v]]) ok = false;
      std::optional<int> p1 = d.parent[v] ? std::optional<int>(perm[*d.parent[v]]) : std::nullopt;
      if (p1 != d.parent[perm[v]]) ok = false;
      std::vector<int> mapped;
      for (int u : d.prox[v]) mapped.push_back(perm[u]);
      std::sort(mapped.begin(), mapped.end());
      if (mapped != d.prox[perm[v]]) ok = false;
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

TEST_CASE("validate the three-vertex cusp shape", "[diagram]") {
  CHECK(validate(cusp_diagram(), true).ok());

  auto bad = cusp_diagram(1, 1, 1);
  auto rep = validate(bad);
  CHECK(!rep.ok());
  CHECK(has_violation(rep, "proximity_inequality", 0));

  WeightedDiagram single;
  single.base.add_vertex(std::nullopt, {});
  single.weight = {1};
  CHECK(validate(single, false).ok());
  auto repm = validate(single, true);
  CHECK(has_violation(repm, "law_of_minimality", 0));
}

TEST_CASE("validate flags structural breakage", "[diagram]") {
  UnweightedDiagram d;
  d.add_vertex(std::nullopt, {});
  d.add_vertex(0, {});  // non-root not proximate to its parent
  CHECK(has_violation(validate(d), "law_of_proximity", 1));

  UnweightedDiagram cyc;
  cyc.parent = {1, 0};
  cyc.prox = {{}, {}};
  CHECK(!validate(cyc).ok());

  // root proximate to something
  UnweightedDiagram rp;
  rp.add_vertex(std::nullopt, {});
  rp.add_vertex(std::nullopt, {0});
  CHECK(has_violation(validate(rp), "law_of_proximity", 1));

  // two satellite children of one vertex targeting the same vertex
  UnweightedDiagram s3;
  s3.add_vertex(std::nullopt, {});  // 0 root
  s3.add_vertex(0, {0});            // 1
  s3.add_vertex(1, {1, 0});         // 2 satellite of 0
  s3.add_vertex(1, {1, 0});         // 3 satellite of 0 again
  CHECK(has_violation(validate(s3), "law_of_succession", 1));
}

TEST_CASE("characters of the worked families", "[diagram]") {
  auto m22 = build_family(FamilyKind::M, 2, 2);
  auto c = characters(m22.diagram);
  CHECK(c.dim == 3);
  CHECK(c.deg == 5);
  CHECK(c.cod == 2);
  CHECK(c.type_of == std::vector<int>{2, 1, 0});

  auto n3 = build_family(FamilyKind::N, 0, 3);
  auto cn = characters(n3.diagram);
  CHECK(cn.dim == 3);
  CHECK(cn.deg == 9);
  CHECK(cn.cod == 6);

  WeightedDiagram single;
  single.base.add_vertex(std::nullopt, {});
  single.weight = {1};
  auto cs = characters(single);
  CHECK(cs.dim == 2);
  CHECK(cs.deg == 1);
  CHECK(cs.cod == -1);
}

TEST_CASE("character formulas agree on random diagrams", "[diagram]") {
  std::mt19937_64 rng(555);
  for (int it = 0; it < 60; ++it) {
    auto d = testgen::rnd_weighted(rng, 1 + (int)(rng() % 7));
    auto c = characters(d);  // asserts the two codimension formulas agree
    long cod_sum = 0;
    for (int v = 0; v < d.size(); ++v) {
      long s = binom2(d.weight[v] + 1) - c.type_of[v];
      // the per-vertex summand is nonnegative except at weight-1 roots
      // (cusp V1 shows it can be exactly 0 even in a minimal diagram)
      if (d.base.is_root(v) && d.weight[v] == 1)
        CHECK(s == -1);
      else
        CHECK(s >= 0);
      cod_sum += s;
    }
    CHECK(cod_sum == c.cod);
  }
  // minimal diagrams have no weight-1 roots, so their codimension is >= 0
  for (int it = 0; it < 30; ++it) {
    auto d = testgen::rnd_weighted(rng, 1 + (int)(rng() % 6), 4, true);
    auto c = characters(d);
    for (int v = 0; v < d.size(); ++v) {
      if (d.base.is_root(v)) CHECK(d.weight[v] >= 2);
      CHECK(binom2(d.weight[v] + 1) - c.type_of[v] >= 0);
    }
    CHECK(c.cod >= 0);
  }
}

TEST_CASE("proximity matrix of the worked examples", "[diagram]") {
  auto m22 = build_family(FamilyKind::M, 2, 2);
  auto p = proximity_matrix(m22.diagram.base, m22.theta);
  CHECK(p == IntMat{{1, 0, 0}, {-1, 1, 0}, {-1, -1, 1}});

  UnweightedDiagram single;
  single.add_vertex(std::nullopt, {});
  CHECK(proximity_matrix(single, {0}) == IntMat{{1}});

  UnweightedDiagram roots2;
  roots2.add_vertex(std::nullopt, {});
  roots2.add_vertex(std::nullopt, {});
  CHECK(proximity_matrix(roots2, {0, 1}) == IntMat{{1, 0}, {0, 1}});
  CHECK(proximity_matrix(roots2, {1, 0}) == IntMat{{1, 0}, {0, 1}});

  // a non-ordering is rejected
  UnweightedDiagram chain;
  chain.add_vertex(std::nullopt, {});
  chain.add_vertex(0, {0});
  CHECK_THROWS_AS(proximity_matrix(chain, {1, 0}), Error);
}

TEST_CASE("proximity matrix determines the ordered diagram", "[diagram]") {
  std::mt19937_64 rng(777);
  for (int it = 0; it < 40; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 6));
    auto ths = orderings_list(d);
    size_t limit = it < 10 ? ths.size() : 1;
    for (size_t k = 0; k < limit; ++k) {
      auto p = proximity_matrix(d, ths[k]);
      // rebuild from the matrix: position i proximate to position j iff -1
      ProximityStructureData ps;
      ps.n = d.size();
      ps.prox.resize(ps.n);
      for (int i = 0; i < ps.n; ++i)
        for (int j = 0; j < i; ++j)
          if (p[i][j] == -1) ps.prox[i].push_back(j);
      auto rd = from_proximity_structure(ps);
      CHECK(rd == relabel(d, ths[k]));
    }
  }
}

TEST_CASE("inverse proximity matrix is nonnegative", "[diagram]") {
  std::mt19937_64 rng(888);
  for (int it = 0; it < 80; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 8));
    auto ths = orderings_list(d);
    auto p = proximity_matrix(d, ths[0]);
    CHECK(int_nonneg(unit_lower_inverse(p)));
  }
  // exhaustively over all ordered diagrams with up to 3 vertices
  for (int n = 1; n <= 3; ++n) {
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
        continue;
      }
      for (auto& th : orderings_list(d))
        CHECK(int_nonneg(unit_lower_inverse(proximity_matrix(d, th))));
    }
  }
}

TEST_CASE("orderings: worked examples", "[diagram]") {
  auto m22 = build_family(FamilyKind::M, 2, 2);
  CHECK(orderings_count(m22.diagram.base) == 1);

  UnweightedDiagram roots2;
  roots2.add_vertex(std::nullopt, {});
  roots2.add_vertex(std::nullopt, {});
  CHECK(orderings_count(roots2) == 2);
  CHECK(orderings_list(roots2).size() == 2);

  UnweightedDiagram fork;  // root with two free immediate successors
  fork.add_vertex(std::nullopt, {});
  fork.add_vertex(0, {0});
  fork.add_vertex(0, {0});
  CHECK(brute_force_orderings(fork) == 2);
  CHECK(orderings_count(fork) == 2);
}

TEST_CASE("orderings count matches brute force", "[diagram]") {
  std::mt19937_64 rng(1001);
  for (int it = 0; it < 60; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 7));
    long brute = brute_force_orderings(d);
    CHECK(orderings_count(d) == brute);
    CHECK((long)orderings_list(d).size() == brute);
    CHECK(brute >= 1);
  }
}

TEST_CASE("automorphisms: worked examples", "[diagram]") {
  auto roots3 = build_family(FamilyKind::AllRoots, 0, 0, {2, 2, 2});
  CHECK(automorphisms(roots3.diagram).size() == 6);

  auto m22 = build_family(FamilyKind::M, 2, 2);
  auto a = automorphisms(m22.diagram);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == std::vector<int>{0, 1, 2});

  auto mixed = build_family(FamilyKind::AllRoots, 0, 0, {2, 3});
  CHECK(automorphisms(mixed.diagram).size() == 1);
  CHECK(automorphisms(mixed.diagram.base).size() == 2);
}

TEST_CASE("automorphisms match brute force and form a group", "[diagram]") {
  std::mt19937_64 rng(2002);
  for (int it = 0; it < 40; ++it) {
    auto d = testgen::rnd_weighted(rng, 1 + (int)(rng() % 6), 3);
    auto mine = automorphisms(d);
    auto brute = brute_force_auts(d.base, &d.weight);
    std::sort(brute.begin(), brute.end());
    CHECK(mine == brute);
    for (size_t i = 0; i < mine.size(); ++i)
      for (size_t j = 0; j < mine.size(); ++j) {
        std::vector<int> comp(d.size());
        for (int v = 0; v < d.size(); ++v) comp[v] = mine[i][mine[j][v]];
        CHECK(std::find(mine.begin(), mine.end(), comp) != mine.end());
      }
    // the weight-preserving group sits inside the unweighted one
    auto un = automorphisms(d.base);
    for (auto& g : mine) CHECK(std::find(un.begin(), un.end(), g) != un.end());
  }
}

TEST_CASE("Aut acts freely on orderings", "[diagram]") {
  std::mt19937_64 rng(3003);
  for (int it = 0; it < 30; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 6));
    auto auts = automorphisms(d);
    auto ths = orderings_list(d);
    for (auto& g : auts) {
      bool identity = true;
      for (int v = 0; v < d.size(); ++v)
        if (g[v] != v) identity = false;
      if (identity) continue;
      for (auto& th : ths) {
        Ordering th2(d.size());
        for (int v = 0; v < d.size(); ++v) th2[v] = th[g[v]];  // theta o gamma
        CHECK(is_ordering(d, th2));
        CHECK(th2 != th);
      }
    }
  }
}

TEST_CASE("proximity structure reconstruction", "[diagram]") {
  // the cusp relation {1>0, 2>0, 2>1}
  ProximityStructureData ps;
  ps.n = 3;
  ps.prox = {{}, {0}, {0, 1}};
  auto d = from_proximity_structure(ps);
  auto m22 = build_family(FamilyKind::M, 2, 2);
  CHECK(d == m22.diagram.base);

  // triangle with each vertex proximate to the one before: a loop
  ProximityStructureData tri;
  tri.n = 3;
  tri.prox = {{1}, {2}, {0}};
  CHECK_THROWS_MATCHES(from_proximity_structure(tri), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::LoopDetected; }));

  // pentagon with each vertex proximate to the two clockwise before it
  ProximityStructureData pent;
  pent.n = 5;
  pent.prox.resize(5);
  for (int v = 0; v < 5; ++v) {
    pent.prox[v] = {(v + 1) % 5, (v + 2) % 5};
    std::sort(pent.prox[v].begin(), pent.prox[v].end());
  }
  CHECK_THROWS_AS(from_proximity_structure(pent), Error);

  // empty relation on k vertices: k disjoint roots
  ProximityStructureData empty;
  empty.n = 4;
  empty.prox.resize(4);
  auto roots = from_proximity_structure(empty);
  for (int v = 0; v < 4; ++v) CHECK(roots.is_root(v));

  // a P1 violation
  ProximityStructureData self;
  self.n = 1;
  self.prox = {{0}};
  CHECK_THROWS_MATCHES(from_proximity_structure(self), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::LawViolation; }));
}

TEST_CASE("diagram <-> proximity structure roundtrip", "[diagram]") {
  std::mt19937_64 rng(4004);
  for (int it = 0; it < 100; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 6));
    auto ps = to_proximity_structure(d);
    auto back = from_proximity_structure(ps);
    CHECK(back == d);
  }
}

TEST_CASE("array order is an ordering iff proximities point backward", "[diagram]") {
  // The ordered-correspondence shadow: the generator emits vertices in
  // topological order, so the identity is an ordering and every proximity
  // target precedes its source.
  std::mt19937_64 rng(5005);
  for (int it = 0; it < 50; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 7));
    CHECK(is_ordering(d, identity_ordering(d.size())));
    for (int v = 0; v < d.size(); ++v)
      for (int u : d.prox[v]) CHECK(u < v);
  }
}
