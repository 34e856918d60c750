#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peq/examples.hpp"
#include "peq/groupoid.hpp"

using namespace peq;
using namespace peq::groupoid;

TEST_CASE("the section-9 group bundle verifies and is etale") {
  FinGroupoid gm = examples::gm();
  auto p = gm.predicates();
  CHECK(p.etale);
  CHECK_FALSE(p.basic);  // (r,s) identifies 1c and g-
  CHECK_FALSE(p.free);
  CHECK_FALSE(gm.g1().locally_hausdorff());
}

TEST_CASE("cyclic groups are groupoids") {
  FinGroupoid z4 = examples::z4();
  CHECK(z4.g1().size() == 4);
  CHECK(z4.predicates().etale);
}

TEST_CASE("defective multiplication tables are rejected") {
  FinGroupoid gm = examples::gm();
  // corrupt 1c * g- so the unit law fails
  std::vector<std::vector<int>> mult(3, std::vector<int>(3, -1));
  const auto& g1 = gm.g1();
  int i1c = g1.index("1c"), i1o = g1.index("1o"), ig = g1.index("g-");
  mult[i1c][i1c] = i1c;
  mult[i1c][ig] = i1c;  // should be g-
  mult[ig][i1c] = ig;
  mult[ig][ig] = i1c;
  mult[i1o][i1o] = i1o;
  std::vector<int> unit(2), inv = {i1c, i1o, ig};
  unit[gm.g0().index("c")] = i1c;
  unit[gm.g0().index("o")] = i1o;
  CHECK_THROWS_AS(
      FinGroupoid::verify(gm.g0(), gm.g1(), gm.r(), gm.s(), mult, unit, inv),
      AxiomError);
}

TEST_CASE("restriction to invariant opens") {
  FinGroupoid gm = examples::gm();
  Bitset o = Bitset::single(2, gm.g0().index("o"));
  FinGroupoid small = restrict(gm, o);
  CHECK(small.g0().size() == 1);
  CHECK(small.g1().size() == 1);

  FinGroupoid full = restrict(gm, Bitset::full(2));
  CHECK(full.g1().size() == 3);

  Bitset c = Bitset::single(2, gm.g0().index("c"));
  CHECK_THROWS_WITH_AS(restrict(gm, c), doctest::Contains("NotOpen"), AxiomError);
}

TEST_CASE("orbit spaces") {
  auto p2_orbits = orbit_space(examples::p2());
  CHECK(p2_orbits.space.size() == 1);

  auto gm_orbits = orbit_space(examples::gm());
  CHECK(gm_orbits.space.homeomorphic_to(examples::sierpinski()));

  auto cech_orbits = orbit_space(examples::cech3().groupoid);
  CHECK(cech_orbits.space.size() == 3);
  CHECK(cech_orbits.space.hausdorff());
}

TEST_CASE("covering groupoids") {
  // the double cover of the three-point space
  auto c = examples::cech3();
  CHECK(c.groupoid.g0().size() == 4);
  CHECK(c.groupoid.g1().size() == 6);
  CHECK(c.groupoid.predicates().basic);
  CHECK(c.arrow_space_hausdorff);

  // identity cover: units only
  fintop::FinSpace z = examples::d3();
  FinGroupoid idcover = covering_groupoid(fintop::CMap::identity(z));
  CHECK(idcover.g1().size() == 3);

  // two points over one
  fintop::FinSpace pt = fintop::FinSpace::discrete({"*"});
  FinGroupoid pair2 = covering_groupoid(
      fintop::CMap(examples::d2(), pt, std::vector<int>{0, 0}));
  CHECK(isomorphic(pair2, examples::p2()));

  CHECK_THROWS_WITH_AS(
      covering_groupoid(fintop::CMap(
          fintop::subspace(examples::sierpinski(), Bitset::single(2, 1)),
          examples::sierpinski(), std::vector<int>{1})),
      doctest::Contains("NotOpenSurjection"), AxiomError);
}

TEST_CASE("cech groupoid of the trivial cover is the space") {
  fintop::FinSpace z = examples::d3();
  auto res = cech_groupoid(z, {Bitset::full(3)});
  CHECK(isomorphic(res.groupoid, space_groupoid(z)));

  Bitset missing(3);
  missing.set(0);
  CHECK_THROWS_WITH_AS(cech_groupoid(z, {missing}), doctest::Contains("NotACover"),
                       AxiomError);
}

TEST_CASE("cech groupoid of the arrow-space cover of the group bundle") {
  FinGroupoid gm = examples::gm();
  const auto& g1 = gm.g1();
  Bitset u1(3), u2(3);
  u1.set(g1.index("1o"));
  u1.set(g1.index("1c"));
  u2.set(g1.index("1o"));
  u2.set(g1.index("g-"));
  auto res = cech_groupoid(g1, {u1, u2});
  CHECK(res.groupoid.g0().size() == 4);
  CHECK(res.groupoid.g1().size() == 6);
  CHECK(res.groupoid.predicates().basic);
}

TEST_CASE("pair groupoid has all predicates") {
  auto p = examples::p2().predicates();
  CHECK(p.etale);
  CHECK(p.basic);
  CHECK(p.proper);
  CHECK(p.free);
}

TEST_CASE("free and proper implies basic with hausdorff orbit space") {
  std::vector<FinGroupoid> fixtures = {examples::p2(), examples::z4(),
                                       examples::cech3().groupoid,
                                       space_groupoid(examples::d3())};
  for (const auto& g : fixtures) {
    if (!g.g0().hausdorff()) continue;
    auto p = g.predicates();
    if (p.free && p.proper) {
      CHECK(p.basic);
      CHECK(orbit_space(g).space.hausdorff());
    }
    if (p.free && p.basic)
      CHECK(orbit_space(g).space.hausdorff() == p.proper);
  }
}

TEST_CASE("isomorphism search separates groupoids") {
  CHECK(isomorphic(examples::z4(), examples::z4()));
  CHECK_FALSE(isomorphic(examples::z4(), examples::p2()));
  // Z/4 and Z/2 x Z/2 have the same size but are not isomorphic
  FinGroupoid klein = disjoint_union(groupoid::cyclic_group(2),
                                     groupoid::cyclic_group(2));
  CHECK_FALSE(isomorphic(examples::z4(), klein));
}
