#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peq/action.hpp"
#include "peq/bibundle.hpp"
#include "peq/examples.hpp"

using namespace peq;
using namespace peq::bibundle;

namespace {

PartialEquivalence swap_on_d2() {
  isg::PartialHomeo swap;
  swap.domain = Bitset::full(2);
  swap.value = {1, 0};
  return from_partial_homeo(examples::d2(), swap);
}

PartialEquivalence l_e_on_sigma() {
  fintop::FinSpace sig = examples::sierpinski();
  Bitset o = Bitset::single(2, sig.index("o"));
  return from_partial_homeo(sig, isg::PartialHomeo::identity_on(sig, o));
}

// the slice bibundles of the graded group bundle, over its unit fibre
action::SAction gm_action() {
  return action::action_from_grading(examples::gm_s3_grading());
}

bool has_iso(const std::vector<BibundleMap>& maps) {
  for (const auto& m : maps)
    if (m.isomorphism) return true;
  return false;
}

}  // namespace

TEST_CASE("identity equivalences") {
  auto pt = groupoid::space_groupoid(fintop::FinSpace::discrete({"*"}));
  CHECK(identity_equivalence(pt).space().size() == 1);

  auto id_gm = identity_equivalence(examples::gm());
  CHECK(id_gm.space().size() == 3);
  CHECK(id_gm.global());

  auto id_z4 = identity_equivalence(examples::z4());
  CHECK(id_z4.space().size() == 4);
}

TEST_CASE("slices of the graded group bundle are partial equivalences") {
  action::SAction a = gm_action();
  auto xg = a.as_peq(a.s().index("g"));
  CHECK(xg.global());
  CHECK(xg.space().size() == 2);
  auto xe = a.as_peq(a.s().index("e"));
  CHECK_FALSE(xe.global());
  CHECK(xe.space().size() == 1);
}

TEST_CASE("principality failures are caught") {
  // two points over one fiber of the point groupoid: the left action
  // cannot be free and transitive on source fibers
  auto pt = groupoid::space_groupoid(fintop::FinSpace::discrete({"*"}));
  fintop::FinSpace two = examples::d2();
  std::vector<std::vector<int>> la(1, std::vector<int>(2));
  std::vector<std::vector<int>> ra(2, std::vector<int>(1));
  la[0][0] = 0;
  la[0][1] = 1;
  ra[0][0] = 0;
  ra[1][0] = 1;
  CHECK_THROWS_WITH_AS(
      PartialEquivalence::verify(pt, pt, two,
                                 fintop::CMap::constant(two, pt.g0(), 0),
                                 fintop::CMap::constant(two, pt.g0(), 0), la, ra),
      doctest::Contains("P3NotBijective"), AxiomError);
}

TEST_CASE("restriction of partial equivalences") {
  auto id_gm = identity_equivalence(examples::gm());
  Bitset o = Bitset::single(2, id_gm.left().g0().index("o"));
  Bitset full = Bitset::full(2);

  auto small = restrict_peq(id_gm, o, full);
  CHECK(small.space().size() == 1);

  auto same = restrict_peq(id_gm, full, full);
  CHECK(same.space().size() == 3);

  action::SAction a = gm_action();
  auto xg = a.as_peq(a.s().index("g"));
  Bitset ov = Bitset::single(2, a.base().g0().index("o"));
  auto xg_cut = restrict_peq(xg, Bitset::full(2), ov);
  CHECK(xg_cut.space().size() == 1);
  CHECK(xg_cut.space().point(0) == "1o");
}

TEST_CASE("composition") {
  auto swap = swap_on_d2();
  auto cc = compose(swap, swap);
  auto id_d2 = identity_equivalence(groupoid::space_groupoid(examples::d2()));
  CHECK(has_iso(find_bibundle_maps(cc.composite, id_d2)));

  // the grading law: X_g x X_g is X_1
  action::SAction a = gm_action();
  int g = a.s().index("g");
  auto xg = a.as_peq(g);
  auto prod = compose(xg, xg);
  CHECK(prod.composite.space().size() == 2);
  CHECK(has_iso(find_bibundle_maps(prod.composite, a.as_peq(*a.s().unit()))));

  // unit laws for every fixture
  for (const auto& x : {swap, l_e_on_sigma(), xg}) {
    auto left_unit = compose(identity_equivalence(x.left()), x);
    CHECK(has_iso(find_bibundle_maps(left_unit.composite, x)));
    auto right_unit = compose(x, identity_equivalence(x.right()));
    CHECK(has_iso(find_bibundle_maps(right_unit.composite, x)));
  }

  CHECK_THROWS_WITH_AS(compose(swap, identity_equivalence(examples::gm())),
                       doctest::Contains("GroupoidMismatch"), AxiomError);
}

TEST_CASE("duals") {
  auto id_gm = identity_equivalence(examples::gm());
  CHECK(has_iso(find_bibundle_maps(dual(id_gm), id_gm)));

  auto swap = swap_on_d2();
  CHECK(has_iso(find_bibundle_maps(dual(swap), swap)));

  action::SAction a = gm_action();
  auto xg = a.as_peq(a.s().index("g"));
  CHECK(has_iso(find_bibundle_maps(dual(xg), xg)));  // g is self-adjoint

  // dual is involutive on the nose
  CHECK(dual(dual(swap)) == swap);
}

TEST_CASE("pairings certify the inverse-like identities") {
  for (const auto& x :
       {identity_equivalence(examples::gm()), swap_on_d2(), l_e_on_sigma()}) {
    auto p = pairing(x);
    CHECK(p.to_left_units.isomorphism);
    CHECK(p.to_right_units.isomorphism);
  }
  // X x X* of the g-slice is the unit space restricted to r(X) = all
  action::SAction a = gm_action();
  auto xg = a.as_peq(a.s().index("g"));
  auto p = pairing(xg);
  CHECK(p.xxstar.composite.space().size() == 2);
}

TEST_CASE("bibundle map enumeration") {
  auto id_z2 = identity_equivalence(groupoid::cyclic_group(2));
  auto maps = find_bibundle_maps(id_z2, id_z2);
  CHECK(maps.size() == 2);  // the centre of the group

  auto id_gm = identity_equivalence(examples::gm());
  auto self = find_bibundle_maps(id_gm, id_gm);
  CHECK(self.size() == 2);  // identity, and the continuous central section
  bool has_nontrivial = false;
  for (const auto& m : self) {
    std::vector<int> idv = {0, 1, 2};
    if (m.assignment != idv) has_nontrivial = true;
    CHECK(m.isomorphism);
  }
  CHECK(has_nontrivial);

  // the empty bibundle has exactly one self-map
  auto empty = restrict_peq(id_gm, Bitset(2), Bitset(2));
  CHECK(empty.space().size() == 0);
  CHECK(find_bibundle_maps(empty, empty).size() == 1);
}

TEST_CASE("idempotent trivialization") {
  // the identity equivalence with multiplication trivializes on all objects
  auto id_gm = identity_equivalence(examples::gm());
  auto cc = compose(id_gm, id_gm);
  std::vector<int> mu(cc.composite.space().size(), -1);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (cc.cls[a][b] < 0) continue;
      mu[cc.cls[a][b]] = examples::gm().mult(a, b);
    }
  auto triv = idempotent_trivialize(id_gm, cc, mu);
  CHECK(triv.invariant_open == Bitset::full(2));

  // the e-slice trivializes onto the open point
  action::SAction act = gm_action();
  int e = act.s().index("e");
  auto xe = act.as_peq(e);
  auto cce = compose(xe, xe);
  std::vector<int> mue(cce.composite.space().size(), -1);
  for (int a = 0; a < xe.space().size(); ++a)
    for (int b = 0; b < xe.space().size(); ++b)
      if (cce.cls[a][b] >= 0) mue[cce.cls[a][b]] = act.mu(e, e, a, b);
  auto trive = idempotent_trivialize(xe, cce, mue);
  CHECK(trive.invariant_open ==
        Bitset::single(2, act.base().g0().index("o")));

  // the swap admits no multiplication isomorphism
  auto swap = swap_on_d2();
  auto ccs = compose(swap, swap);
  std::vector<int> mus(ccs.composite.space().size(), 0);
  CHECK_THROWS_WITH_AS(idempotent_trivialize(swap, ccs, mus),
                       doctest::Contains("NotIsomorphism"), AxiomError);
}

TEST_CASE("local centralisers") {
  auto p2 = local_centralisers(examples::p2());
  CHECK_FALSE(p2.has_nontrivial);

  auto z2 = local_centralisers(groupoid::cyclic_group(2));
  int on_full = 0;
  for (const auto& c : z2.centralisers)
    if (c.invariant_open.count() == 1) ++on_full;
  CHECK(on_full == 2);
  CHECK(z2.has_nontrivial);

  auto gm = local_centralisers(examples::gm());
  CHECK(gm.centralisers.size() == 4);
  CHECK(gm.has_nontrivial);
  bool found_germ_section = false;
  for (const auto& c : gm.centralisers)
    if (!c.trivial && c.invariant_open == Bitset::full(2)) found_germ_section = true;
  CHECK(found_germ_section);
}

TEST_CASE("partial equivalences from partial data") {
  CHECK(swap_on_d2().global());
  CHECK(l_e_on_sigma().space().size() == 1);

  // the inversion automorphism of Z/4 as a twisted bitorsor
  groupoid::GroupoidIso inv;
  inv.obj = {0};
  inv.arrow = {0, 3, 2, 1};
  auto hf = from_functor_iso(examples::z4(), examples::z4(), inv);
  CHECK(hf.global());
  CHECK(hf.space().size() == 4);

  groupoid::GroupoidIso bad;
  bad.obj = {0};
  bad.arrow = {0, 1, 2, 2};
  CHECK_THROWS_WITH_AS(from_functor_iso(examples::z4(), examples::z4(), bad),
                       doctest::Contains("NotIsomorphism"), AxiomError);
}

TEST_CASE("linking groupoids") {
  // identity equivalence of the point groupoid links to the pair groupoid
  auto pt = groupoid::space_groupoid(fintop::FinSpace::discrete({"*"}));
  auto link_pt = linking_groupoid(identity_equivalence(pt), true);
  CHECK(groupoid::isomorphic(link_pt.groupoid, examples::p2()));

  // the swap on the discrete pair: the equivalence relation with two
  // two-element classes
  auto link_swap = linking_groupoid(swap_on_d2(), true);
  CHECK(link_swap.groupoid.g0().size() == 4);
  CHECK(link_swap.groupoid.g1().size() == 8);
  CHECK(link_swap.groupoid.predicates().basic);
  CHECK(groupoid::orbit_space(link_swap.groupoid).space.size() == 2);

  // restricting the linking groupoid to either corner returns the factors
  action::SAction a = gm_action();
  auto xg = a.as_peq(a.s().index("g"));
  auto link = linking_groupoid(xg, true);
  CHECK(link.groupoid.g0().size() == 4);
  CHECK(link.groupoid.g1().size() == 2 + 2 + 2 + 2);

  // a partial equivalence fails the global requirement
  auto xe = a.as_peq(a.s().index("e"));
  CHECK_THROWS_WITH_AS(linking_groupoid(xe, true),
                       doctest::Contains("NotGlobalEquivalence"), AxiomError);
  CHECK_NOTHROW(linking_groupoid(xe, false));
}
