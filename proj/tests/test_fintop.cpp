#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "peq/examples.hpp"
#include "peq/fintop.hpp"

using namespace peq;
using namespace peq::fintop;

namespace {

// independent oracle: all unions of open rectangles of two spaces
std::set<Bitset> product_opens_oracle(const FinSpace& a, const FinSpace& b) {
  auto oa = a.opens();
  auto ob = b.opens();
  std::vector<Bitset> rects;
  for (const auto& u : oa)
    for (const auto& v : ob) {
      Bitset r(a.size() * b.size());
      u.for_each([&](int i) { v.for_each([&](int j) { r.set(i * b.size() + j); }); });
      rects.push_back(r);
    }
  std::set<Bitset> opens;
  opens.insert(rects.begin(), rects.end());
  bool grown = true;
  while (grown) {
    grown = false;
    std::vector<Bitset> cur(opens.begin(), opens.end());
    for (const auto& x : cur)
      for (const auto& r : rects)
        if (opens.insert(x | r).second) grown = true;
  }
  return opens;
}

}  // namespace

TEST_CASE("sierpinski and discrete spaces validate") {
  FinSpace sig = examples::sierpinski();
  CHECK(sig.size() == 2);
  CHECK(sig.open_count() == 3);
  FinSpace d2 = examples::d2();
  CHECK(d2.open_count() == 4);
}

TEST_CASE("defective open families are reported") {
  CHECK_THROWS_WITH_AS(
      FinSpace::from_opens({"a", "b"}, {{}, {"a"}, {"b"}}),
      doctest::Contains("MissingEmptyOrFull"), AxiomError);
  CHECK_THROWS_WITH_AS(
      FinSpace::from_opens({"a", "b", "c"}, {{}, {"a"}, {"b"}, {"a", "b", "c"}}),
      doctest::Contains("NotClosedUnderUnion"), AxiomError);
  CHECK_THROWS_WITH_AS(
      FinSpace::from_opens({"a", "b", "c"},
                           {{}, {"a", "b"}, {"b", "c"}, {"a", "b", "c"}}),
      doctest::Contains("NotClosedUnderIntersection"), AxiomError);
}

TEST_CASE("map predicates") {
  FinSpace d2 = examples::d2();
  FinSpace pt = FinSpace::discrete({"*"});
  FinSpace sig = examples::sierpinski();

  auto c = CMap::constant(d2, pt, 0).predicates();
  CHECK(c.open);
  CHECK(c.closed);
  CHECK(c.proper);
  CHECK(c.surjective);
  // a discrete double cover of the point is a local homeomorphism
  CHECK(c.etale);
  // whereas no neighbourhood of the closed point of sierpinski embeds
  CHECK_FALSE(CMap::constant(sig, pt, 0).predicates().etale);

  // inclusion of the open point into sierpinski
  FinSpace o_pt = subspace(sig, Bitset::single(2, sig.index("o")));
  CMap incl(o_pt, sig, std::vector<int>{sig.index("o")});
  auto p = incl.predicates();
  CHECK(p.open);
  CHECK(p.etale);
  CHECK_FALSE(p.proper);
  // oracle: the closed sets of sierpinski are {}, {c}, {c,o}; the image
  // {o} is not among them
  CHECK_FALSE(sig.is_closed(incl.image()));

  auto idp = CMap::identity(sig).predicates();
  CHECK(idp.open);
  CHECK(idp.closed);
  CHECK(idp.proper);
  CHECK(idp.surjective);
  CHECK(idp.etale);
}

TEST_CASE("continuity is rejected with a witness") {
  FinSpace sig = examples::sierpinski();
  FinSpace d2 = examples::d2();
  CHECK_THROWS_WITH_AS(CMap(sig, d2, std::vector<int>{0, 1}),
                       doctest::Contains("NotContinuous"), AxiomError);
}

TEST_CASE("hausdorff predicates") {
  FinSpace d2 = examples::d2();
  auto p2 = hausdorff_predicates(d2);
  CHECK(p2.hausdorff);
  CHECK(p2.locally_hausdorff);

  FinSpace sig = examples::sierpinski();
  auto ps = hausdorff_predicates(sig);
  CHECK_FALSE(ps.hausdorff);
  CHECK_FALSE(ps.locally_hausdorff);

  // oracle: the diagonal of sigma x sigma has closure everything and is
  // not open there
  FinSpace sq = product(sig, sig);
  Bitset diag(4);
  diag.set(0 * 2 + 0);
  diag.set(1 * 2 + 1);
  CHECK(sq.closure(diag) == Bitset::full(4));
  CHECK_FALSE(sq.is_open(diag));

  Bitset closed_pt = Bitset::single(2, sig.index("c"));
  auto pc = hausdorff_predicates(sig, closed_pt);
  CHECK(*pc.locally_closed);
}

TEST_CASE("product topology matches the rectangle oracle") {
  FinSpace sig = examples::sierpinski();
  FinSpace sq = product(sig, sig);
  CHECK(sq.size() == 4);
  auto oracle = product_opens_oracle(sig, sig);
  CHECK(sq.open_count() == oracle.size());
  // rectangles: empty, {(o,o)}, {o} x full, full x {o}, full x full;
  // unions add one more set
  CHECK(oracle.size() == 6);
  for (const auto& u : oracle) CHECK(sq.is_open(u));
}

TEST_CASE("quotient of the discrete pair collapses to a point") {
  FinSpace d2 = examples::d2();
  auto q = quotient(d2, {0, 0}, {"pt"});
  CHECK(q.space.size() == 1);
  CHECK(q.projection.is_surjective());
}

TEST_CASE("fiber product of the double cover has six points") {
  FinSpace z = examples::d3();
  Bitset u1(3), u2(3);
  u1.set(0);
  u1.set(1);
  u2.set(1);
  u2.set(2);
  auto du = disjoint_union({subspace(z, u1), subspace(z, u2)});
  std::vector<int> fv = {0, 1, 1, 2};
  CMap f(du.space, z, fv);
  auto fp = fiber_product(f, f);
  CHECK(fp.space.size() == 6);
  CHECK(fp.to_left.is_surjective());
  CHECK_THROWS_WITH_AS(fiber_product(f, CMap::identity(du.space)),
                       doctest::Contains("InconsistentAnchors"), AxiomError);
}

TEST_CASE("preimages of opens are open for arbitrary maps") {
  FinSpace sig = examples::sierpinski();
  FinSpace sq = product(sig, sig);
  std::vector<int> proj;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) proj.push_back(i);
  CMap pr(sq, sig, proj);
  for (const auto& v : sig.opens()) CHECK(sq.is_open(pr.preimage(v)));
}

TEST_CASE("homeomorphism search distinguishes topologies") {
  FinSpace sig = examples::sierpinski();
  FinSpace sig2 = FinSpace::from_opens({"x", "y"}, {{}, {"x"}, {"x", "y"}});
  CHECK(sig.homeomorphic_to(sig2));
  CHECK_FALSE(sig.homeomorphic_to(examples::d2()));
}
