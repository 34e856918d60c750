#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peq/action.hpp"
#include "peq/examples.hpp"
#include "peq/report.hpp"

using namespace peq;
using namespace peq::action;

TEST_CASE("the trivial action of the example semigroup on sierpinski") {
  SAction a = action_on_space_groupoid(examples::s3_on_sigma());
  CHECK(a.s().size() == 3);
  CHECK(a.base().g1().size() == 2);  // unit arrows of the space groupoid
  int e = a.s().index("e");
  CHECK(a.space(e).size() == 1);
}

TEST_CASE("corrupted grading data is reported with the violated axiom") {
  SGradedGroupoid g = examples::gm_s3_grading();
  // {g-} alone is not even open in the arrow space
  g.grading[g.s.index("g")] = Bitset::single(3, g.l.g1().index("g-"));
  CHECK_THROWS_WITH_AS(g.verify(), doctest::Contains("GradingNotOpen"), AxiomError);

  // on a discrete groupoid the same defect is a saturation failure
  SGradedGroupoid z = examples::z4_z2_grading();
  z.grading[z.s.index("g")] = Bitset::single(4, z.l.g1().index("g1"));
  CHECK_THROWS_WITH_AS(z.verify(), doctest::Contains("Gr1"), AxiomError);
}

TEST_CASE("order structure of the graded group bundle") {
  SAction a = action_from_grading(examples::gm_s3_grading());
  OrderStructure o = derive_order_structure(a);
  int e = a.s().index("e"), one = a.s().index("1"), g = a.s().index("g");
  // j_{1,e} embeds the open-point slice onto the unit over o
  REQUIRE(a.space(e).size() == 1);
  int target = o.j[one][e][0];
  CHECK(a.space(one).point(target) == "1o");
  CHECK(o.j[g][e][0] >= 0);
  // U_e is the open point
  CHECK(o.u_e[e] == Bitset::single(2, a.base().g0().index("o")));
}

TEST_CASE("group gradings have inversion as the involution") {
  SAction a = action_from_grading(examples::z4_z2_grading());
  OrderStructure o = derive_order_structure(a);
  int odd = a.s().index("g");
  // X_odd = {g1, g3}; x* is the group inverse
  for (int i = 0; i < a.space(odd).size(); ++i) {
    const std::string& n = a.space(odd).point(i);
    const std::string& m = a.space(odd).point(o.star[odd][i]);
    CHECK(((n == "g1" && m == "g3") || (n == "g3" && m == "g1")));
  }
}

TEST_CASE("transformation groupoid of the sierpinski action is the group bundle") {
  SAction a = action_on_space_groupoid(examples::s3_on_sigma());
  auto tr = transformation_groupoid(a);
  CHECK(tr.graded.l.g1().size() == 3);
  CHECK(tr.graded.l.g1().open_count() == 5);
  CHECK(groupoid::isomorphic(tr.graded.l, examples::gm()));
  CHECK(tr.graded.l.predicates().etale);
  CHECK_FALSE(tr.graded.l.predicates().basic);
  CHECK_FALSE(tr.graded.l.g1().locally_hausdorff());
}

TEST_CASE("trivial actions reproduce the groupoid") {
  for (const auto& g : {examples::p2(), examples::z4(), examples::gm()}) {
    SAction a = action_from_grading(examples::trivial_grading(g));
    auto tr = transformation_groupoid(a);
    CHECK(groupoid::isomorphic(tr.graded.l, g));
  }
}

TEST_CASE("round trips through gradings and actions") {
  for (const auto& g : {examples::gm_s3_grading(), examples::z4_z2_grading()}) {
    SAction a = action_from_grading(g);
    auto tr = transformation_groupoid(a);
    CHECK(graded_isomorphic(tr.graded, g));
    SAction b = action_from_grading(tr.graded);
    CHECK(actions_isomorphic(a, b));
  }
}

TEST_CASE("germ groupoids") {
  // trivial semigroup on any space gives the space back
  {
    isg::SActionOnSpace triv;
    triv.s = isg::InvSemigroup::verify({"1"}, {{0}});
    triv.z = examples::d3();
    triv.theta = {isg::PartialHomeo::identity_on(triv.z, Bitset::full(3))};
    triv.verify();
    auto germ = germ_groupoid(triv);
    CHECK(groupoid::isomorphic(germ.graded.l, groupoid::space_groupoid(triv.z)));
  }
  // the global swap action of the two-element group on the discrete pair
  {
    isg::SActionOnSpace sw;
    sw.s = examples::z2_group();
    sw.z = examples::d2();
    isg::PartialHomeo flip;
    flip.domain = Bitset::full(2);
    flip.value = {1, 0};
    sw.theta = {isg::PartialHomeo::identity_on(sw.z, Bitset::full(2)), flip};
    sw.verify();
    auto germ = germ_groupoid(sw);
    CHECK(germ.graded.l.g1().size() == 4);
    CHECK(germ.graded.l.predicates().etale);
  }
}

TEST_CASE("gradings from group cocycles") {
  auto z4z2 = examples::z4_z2_grading();
  CHECK(z4z2.saturated);
  CHECK(z4z2.grading[0].count() == 2);
  CHECK(z4z2.grading[1].count() == 2);

  // trivial cocycle: everything sits over the unit
  auto triv = grading_from_cocycle(examples::p2(),
                                   isg::InvSemigroup::verify({"1"}, {{0}}),
                                   {0, 0, 0, 0});
  CHECK(triv.graded.saturated);
  CHECK(triv.graded.grading[0].count() == 4);

  // the embedding cocycle is not saturated
  isg::InvSemigroup z4s = isg::InvSemigroup::verify(
      {"0", "1", "2", "3"},
      {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}});
  auto emb = grading_from_cocycle(groupoid::cyclic_group(2), z4s, {0, 2});
  CHECK_FALSE(emb.graded.saturated);

  // non-multiplicative assignments are rejected
  CHECK_THROWS_WITH_AS(
      grading_from_cocycle(groupoid::cyclic_group(2), z4s, {0, 1}),
      doctest::Contains("NotMultiplicative"), AxiomError);
}

TEST_CASE("transport along equivalences") {
  // transport the trivial one-element action from the point to the pair
  // groupoid along the unique equivalence
  auto pt = groupoid::space_groupoid(fintop::FinSpace::discrete({"*"}));
  SAction triv = action_from_grading(examples::trivial_grading(pt));
  // Y: left P2, right point
  groupoid::FinGroupoid p2 = examples::p2();
  fintop::FinSpace two = examples::d2();
  std::vector<std::vector<int>> la(4, std::vector<int>(2, -1));
  std::vector<std::vector<int>> ra(2, std::vector<int>(1));
  for (int a = 0; a < 4; ++a)
    for (int x = 0; x < 2; ++x)
      if (p2.s()(a) == x) la[a][x] = p2.r()(a);
  ra[0][0] = 0;
  ra[1][0] = 1;
  auto y = bibundle::PartialEquivalence::verify(
      p2, pt, two, fintop::CMap::identity(two),
      fintop::CMap::constant(two, pt.g0(), 0), la, ra);
  auto res = transport_action(triv, y);
  CHECK(res.transported.s().size() == 1);
  CHECK(groupoid::isomorphic(res.transported.base(), p2));
  CHECK(res.connecting.global());

  // transport along the identity is isomorphic to the original
  SAction gm_act = action_from_grading(examples::gm_s3_grading());
  auto back =
      transport_action(gm_act, bibundle::identity_equivalence(gm_act.base()));
  CHECK(actions_isomorphic(gm_act, back.transported));
}

TEST_CASE("desingularisation of the translation action") {
  // the example semigroup acting on the arrow space by left translation
  groupoid::FinGroupoid gm = examples::gm();
  const auto& g1 = gm.g1();
  Bitset one(3), e(3), g(3);
  one.set(g1.index("1c"));
  one.set(g1.index("1o"));
  e.set(g1.index("1o"));
  g.set(g1.index("1o"));
  g.set(g1.index("g-"));
  auto act = examples::translation_action(gm, examples::s3(), {one, e, g});
  Bitset u1(3), u2(3);
  u1.set(g1.index("1o"));
  u1.set(g1.index("1c"));
  u2.set(g1.index("1o"));
  u2.set(g1.index("g-"));
  auto res = desingularize(act, {u1, u2});
  CHECK(res.graded.l.g0().size() == 4);
  CHECK(res.graded.l.g1().size() == 8);
  CHECK(res.equivalence.global());

  // sierpinski action over the trivial cover gives the group bundle
  auto res2 = desingularize(examples::s3_on_sigma(), {Bitset::full(2)});
  CHECK(groupoid::isomorphic(res2.graded.l, examples::gm()));
}

TEST_CASE("extension of the grading to all bisections") {
  SAction a = action_on_space_groupoid(examples::s3_on_sigma());
  groupoid::FinGroupoid gm = examples::gm();
  auto bis = isg::bisections(gm);
  const auto& g1 = gm.g1();
  Bitset one(3), e(3), g(3);
  one.set(g1.index("1c"));
  one.set(g1.index("1o"));
  e.set(g1.index("1o"));
  g.set(g1.index("1o"));
  g.set(g1.index("g-"));
  std::vector<int> phi(3);
  phi[a.s().index("1")] = bis.index_of(one);
  phi[a.s().index("e")] = bis.index_of(e);
  phi[a.s().index("g")] = bis.index_of(g);

  auto orb = groupoid::orbit_space(a.base());
  std::vector<int> psi_v(2);
  for (int i = 0; i < 2; ++i) {
    // orbits of the space groupoid are singletons named like the points
    const std::string& nm = orb.space.point(i);
    psi_v[i] = gm.g0().index(nm.substr(1, nm.size() - 2));
  }
  fintop::CMap psi(orb.space, gm.g0(), psi_v);

  auto res = extend_grading_to_bisections(a, gm, phi, psi);
  CHECK(res.graded.s.size() == 4);
  // the four slices: empty, {1o}, the units, {1o, g-}
  std::vector<int> sizes;
  for (const auto& b : res.graded.grading) sizes.push_back(b.count());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>({0, 1, 2, 2}));

  // a non-equivariant map is rejected: collapse everything to o
  std::vector<int> bad_v(2, gm.g0().index("o"));
  fintop::CMap bad(orb.space, gm.g0(), bad_v);
  CHECK_THROWS_AS(extend_grading_to_bisections(a, gm, phi, bad), AxiomError);
}

TEST_CASE("proper and free flags of small actions") {
  SAction triv = action_from_grading(examples::trivial_grading(examples::p2()));
  auto f = proper_free_flags(triv);
  CHECK(f.proper);
  CHECK(f.free);
  CHECK(f.basic_unit_fibre);

  // the swap action of the two-element group on the discrete pair
  isg::SActionOnSpace sw;
  sw.s = examples::z2_group();
  sw.z = examples::d2();
  isg::PartialHomeo flip;
  flip.domain = Bitset::full(2);
  flip.value = {1, 0};
  sw.theta = {isg::PartialHomeo::identity_on(sw.z, Bitset::full(2)), flip};
  sw.verify();
  auto f2 = proper_free_flags(action_on_space_groupoid(sw));
  CHECK(f2.proper);
  CHECK(f2.free);
}

TEST_CASE("assembling actions adjoins missing units") {
  // a meet semilattice without a top element has no unit
  isg::InvSemigroup meet = isg::InvSemigroup::verify(
      {"e", "f", "0"}, {{0, 2, 2}, {2, 1, 2}, {2, 2, 2}});
  CHECK_FALSE(meet.unit().has_value());

  auto base = groupoid::space_groupoid(examples::sierpinski());
  Bitset o = Bitset::single(2, base.g0().index("o"));
  std::vector<bibundle::PartialEquivalence> spaces(
      3, bibundle::unit_restriction(base, o));
  std::vector<std::vector<std::vector<std::vector<int>>>> mu(
      3, std::vector<std::vector<std::vector<int>>>(
             3, std::vector<std::vector<int>>(1, std::vector<int>(1, 0))));
  auto res = assemble_action(meet, base, spaces, mu);
  CHECK(res.unit_adjoined);
  CHECK(res.action.s().size() == 4);
  CHECK(res.action.s().unit().has_value());
}
