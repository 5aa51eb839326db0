#include <catch2/catch_amalgamated.hpp>

#include "enriques/cluster.hpp"
#include "enriques/transform.hpp"
#include "gen.hpp"

using namespace enriques;

namespace {

const std::vector<FieldSpec> kFields = {FieldSpec::rationals(), FieldSpec::prime_field(2),
                                        FieldSpec::prime_field(3), FieldSpec::prime_field(5)};

RealizationParams m22_standard_params(const FieldSpec& fs) {
  RealizationParams p;
  p.roots[0] = {Scalar::zero(fs), Scalar::zero(fs)};
  p.free_points[1] = ProjParam::finite(Scalar::zero(fs));  // the x-axis direction
  return p;
}

// Random admissible parameters by rejection sampling over the public API.
std::optional<Cluster> rnd_realize(const UnweightedDiagram& d, const FieldSpec& fs,
                                   std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    RealizationParams p;
    for (int v = 0; v < d.size(); ++v) {
      int t = d.type_of(v);
      if (t == 2) {
        long range = fs.kind == FieldKind::PrimeField ? fs.p : 50;
        p.roots[v] = {Scalar::of_int(fs, (long)(rng() % range)),
                      Scalar::of_int(fs, (long)(rng() % range))};
      } else if (t == 1) {
        long range = (fs.kind == FieldKind::PrimeField ? fs.p : 50) + 1;
        long pick = (long)(rng() % range);
        p.free_points[v] = pick + 1 == range ? ProjParam::infinite(fs)
                                             : ProjParam::finite(Scalar::of_int(fs, pick));
      }
    }
    try {
      return realize(d, identity_ordering(d.size()), p, fs);
    } catch (const Error& e) {
      if (e.code() != Errc::ProximityClash && e.code() != Errc::CollisionError) throw;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("realize the standard cusp cluster", "[cluster]") {
  for (auto fs : kFields) {
    auto m22 = build_family(FamilyKind::M, 2, 2);
    auto c = realize(m22.diagram.base, m22.theta, m22_standard_params(fs), fs);
    REQUIRE(c.size() == 3);
    CHECK(c.points[0].chart == ChartKind::Origin);
    CHECK(c.points[1].chart == ChartKind::Chart1);
    CHECK(c.points[1].prox == std::vector<int>{0});
    // the satellite is forced to the intersection of E_1 with the strict
    // transform of E_0, which sits at [0:1] in the chart of t_1
    CHECK(c.points[2].chart == ChartKind::Chart2);
    CHECK(c.points[2].prox == std::vector<int>{0, 1});

    auto [d, th] = diagram_of_cluster(c);
    CHECK(d == m22.diagram.base);
    CHECK(th == identity_ordering(3));
  }
}

TEST_CASE("realize rejects collisions and clashes", "[cluster]") {
  FieldSpec q = FieldSpec::rationals();

  // two roots at the same point of the plane
  UnweightedDiagram roots2;
  roots2.add_vertex(std::nullopt, {});
  roots2.add_vertex(std::nullopt, {});
  RealizationParams p;
  p.roots[0] = {Scalar::zero(q), Scalar::zero(q)};
  p.roots[1] = {Scalar::zero(q), Scalar::zero(q)};
  CHECK_THROWS_MATCHES(realize(roots2, identity_ordering(2), p, q), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::CollisionError; }));

  // two free points of the same parent at the same position on E
  UnweightedDiagram fork;
  fork.add_vertex(std::nullopt, {});
  fork.add_vertex(0, {0});
  fork.add_vertex(0, {0});
  RealizationParams pf;
  pf.roots[0] = {Scalar::zero(q), Scalar::zero(q)};
  pf.free_points[1] = ProjParam::finite(Scalar::one(q));
  pf.free_points[2] = ProjParam::finite(Scalar::one(q));
  CHECK_THROWS_MATCHES(realize(fork, identity_ordering(3), pf, q), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::CollisionError; }));

  // a free point on a forbidden strict transform: in the chart of t_1 the
  // strict transform of E_0 meets E_1 at the [0:1] direction
  UnweightedDiagram ch3;
  ch3.add_vertex(std::nullopt, {});
  ch3.add_vertex(0, {0});
  ch3.add_vertex(1, {1});  // free over t_1, not proximate to the root
  RealizationParams pc;
  pc.roots[0] = {Scalar::zero(q), Scalar::zero(q)};
  pc.free_points[1] = ProjParam::finite(Scalar::zero(q));
  pc.free_points[2] = ProjParam::infinite(q);
  CHECK_THROWS_MATCHES(realize(ch3, identity_ordering(3), pc, q), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::ProximityClash; }));
  // any other direction is fine
  pc.free_points[2] = ProjParam::finite(Scalar::one(q));
  auto c = realize(ch3, identity_ordering(3), pc, q);
  CHECK(diagram_of_cluster(c).first == ch3);
}

TEST_CASE("realize enforces the parameter arity", "[cluster]") {
  FieldSpec q = FieldSpec::rationals();
  auto m22 = build_family(FamilyKind::M, 2, 2);
  auto good = m22_standard_params(q);

  RealizationParams missing = good;
  missing.free_points.clear();
  CHECK_THROWS_MATCHES(realize(m22.diagram.base, m22.theta, missing, q), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::ArityMismatch; }));

  RealizationParams extra = good;
  extra.free_points[2] = ProjParam::finite(Scalar::zero(q));  // satellite takes no data
  CHECK_THROWS_MATCHES(realize(m22.diagram.base, m22.theta, extra, q), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::ArityMismatch; }));
}

TEST_CASE("simple extraction examples", "[cluster]") {
  FieldSpec q = FieldSpec::rationals();
  UnweightedDiagram single;
  single.add_vertex(std::nullopt, {});
  RealizationParams p;
  p.roots[0] = {Scalar::of_int(q, 3), Scalar::of_int(q, -1)};
  auto c = realize(single, {0}, p, q);
  auto [d, th] = diagram_of_cluster(c);
  CHECK(d.size() == 1);
  CHECK(d.is_root(0));

  // root + free successor at a generic direction: a 2-chain
  UnweightedDiagram ch2;
  ch2.add_vertex(std::nullopt, {});
  ch2.add_vertex(0, {0});
  RealizationParams p2;
  p2.roots[0] = {Scalar::zero(q), Scalar::zero(q)};
  p2.free_points[1] = ProjParam::finite(Scalar::of_int(q, 7));
  auto c2 = realize(ch2, identity_ordering(2), p2, q);
  CHECK(diagram_of_cluster(c2).first == ch2);
  CHECK(c2.points[1].prox == std::vector<int>{0});
}

TEST_CASE("standard placement realizes the families over every field", "[cluster]") {
  for (auto fs : kFields) {
    for (auto fam : {build_family(FamilyKind::M, 2, 2), build_family(FamilyKind::M, 3, 4),
                     build_family(FamilyKind::N, 0, 3),
                     build_family(FamilyKind::AllRoots, 0, 0, {2, 3, 4})}) {
      auto c = realize_standard(fam.diagram.base, fam.theta, fs);
      CHECK(diagram_of_cluster(c).first == fam.diagram.base);
    }
  }
}

TEST_CASE("realize/extract roundtrip on random diagrams", "[cluster]") {
  std::mt19937_64 rng(606060);
  int done = 0;
  for (int it = 0; it < 120; ++it) {
    auto d = testgen::rnd_diagram(rng, 1 + (int)(rng() % 6));
    auto fs = kFields[it % kFields.size()];
    auto c = rnd_realize(d, fs, rng);
    if (!c) continue;  // crowded exceptional lines over tiny fields
    auto [back, th] = diagram_of_cluster(*c);
    CHECK(back == d);
    CHECK(th == identity_ordering(d.size()));
    // parameters read back from the cluster reproduce it
    auto params = params_of_cluster(*c, d);
    auto c2 = realize(d, identity_ordering(d.size()), params, fs);
    CHECK(c2.size() == c->size());
    for (int i = 0; i < c2.size(); ++i) CHECK(c2.points[i].prox == c->points[i].prox);
    ++done;
  }
  CHECK(done > 60);
}

TEST_CASE("roundtrip respects a non-identity ordering", "[cluster]") {
  FieldSpec q = FieldSpec::rationals();
  UnweightedDiagram roots2;
  roots2.add_vertex(std::nullopt, {});
  roots2.add_vertex(std::nullopt, {});
  RealizationParams p;
  p.roots[0] = {Scalar::zero(q), Scalar::zero(q)};
  p.roots[1] = {Scalar::one(q), Scalar::zero(q)};
  Ordering swapped{1, 0};
  auto c = realize(roots2, swapped, p, q);
  // build order: vertex 1 first
  CHECK(c.points[0].vertex == 1);
  CHECK(c.points[1].vertex == 0);
  CHECK(diagram_of_cluster(c).first == relabel(roots2, swapped));
}

TEST_CASE("dual-field realization preserves the diagram", "[cluster]") {
  // first-order deformations of the standard cusp cluster stay strict
  FieldSpec d2 = FieldSpec::prime_field(2, true);
  auto m22 = build_family(FamilyKind::M, 2, 2);
  RealizationParams p;
  p.roots[0] = {Scalar::dual(d2, 0, 1), Scalar::zero(d2)};  // a1 direction
  p.free_points[1] = ProjParam::finite(Scalar::dual(d2, 0, 1));  // b direction
  auto c = realize(m22.diagram.base, m22.theta, p, d2);
  CHECK(diagram_of_cluster(c).first == m22.diagram.base);
}
