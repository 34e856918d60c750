#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peq/examples.hpp"
#include "peq/isg.hpp"

using namespace peq;
using namespace peq::isg;

namespace {

// oracle: number of partial bijections of an n-set
long partial_bijections(int n) {
  auto binom = [](int n_, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n_ - i) / (i + 1);
    return r;
  };
  auto fact = [](int k) {
    long r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  long total = 0;
  for (int k = 0; k <= n; ++k) total += binom(n, k) * binom(n, k) * fact(k);
  return total;
}

}  // namespace

TEST_CASE("the three-element semigroup of the explicit example") {
  InvSemigroup s = examples::s3();
  CHECK(s.size() == 3);
  CHECK(s.idempotents().size() == 2);
  int i1 = s.index("1"), ie = s.index("e"), ig = s.index("g");
  CHECK(s.mult(ig, ig) == i1);
  CHECK(s.star(ig) == ig);
  CHECK(s.leq(ie, i1));
  CHECK(s.leq(ie, ig));
  CHECK_FALSE(s.leq(i1, ig));
  CHECK(s.unit() == i1);
  CHECK(s.zero() == ie);  // e is absorbing in this semigroup
}

TEST_CASE("groups have trivial order") {
  InvSemigroup z2 = examples::z2_group();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(z2.leq(a, b) == (a == b));
}

TEST_CASE("the left-zero semigroup fails idempotent commutation") {
  CHECK_THROWS_WITH_AS(
      InvSemigroup::verify({"x", "y"}, {{0, 0}, {1, 1}}),
      doctest::Contains("IdempotentsDoNotCommute"), AxiomError);
}

TEST_CASE("non-associative tables are rejected") {
  CHECK_THROWS_WITH_AS(
      InvSemigroup::verify({"a", "b"}, {{1, 0}, {0, 0}}),
      doctest::Contains("NotAssociative"), AxiomError);
}

TEST_CASE("adjoining units and zeros") {
  InvSemigroup s = examples::s3();
  InvSemigroup with_zero = adjoin(s, Adjoin::zero);
  CHECK(with_zero.size() == 4);
  int z = *with_zero.zero();
  for (int a = 0; a < 4; ++a) CHECK(with_zero.leq(z, a));

  InvSemigroup z2 = examples::z2_group();
  InvSemigroup with_unit = adjoin(z2, Adjoin::unit);
  CHECK(with_unit.size() == 3);
  int old_unit = with_unit.index("1");
  int new_unit = *with_unit.unit();
  CHECK(old_unit != new_unit);
  CHECK(with_unit.leq(old_unit, new_unit));

  CHECK(adjoin(adjoin(s, Adjoin::unit), Adjoin::unit).size() == 5);
}

TEST_CASE("bisections of the group bundle") {
  auto bis = bisections(examples::gm());
  CHECK(bis.semigroup.size() == 4);
  // isomorphic to the example semigroup with a zero adjoined
  CHECK(bis.semigroup.isomorphic_to(adjoin(examples::s3(), Adjoin::zero)));
  // find the slices by content and check the multiplication
  const auto& g1 = examples::gm().g1();
  Bitset one(3), e(3), g(3);
  one.set(g1.index("1c"));
  one.set(g1.index("1o"));
  e.set(g1.index("1o"));
  g.set(g1.index("1o"));
  g.set(g1.index("g-"));
  int i1 = bis.index_of(one), ie = bis.index_of(e), ig = bis.index_of(g);
  CHECK(bis.semigroup.mult(ig, ig) == i1);
  CHECK((bis.bisection[i1] & bis.bisection[ig]) == bis.bisection[ie]);
}

TEST_CASE("bisections of the pair groupoid count partial bijections") {
  auto bis = bisections(examples::p2());
  CHECK(bis.semigroup.size() == partial_bijections(2));
  CHECK(partial_bijections(2) == 7);
}

TEST_CASE("bisections of a discrete space are its opens") {
  auto zg = groupoid::space_groupoid(examples::d3());
  auto bis = bisections(zg);
  CHECK(static_cast<std::uint64_t>(bis.semigroup.size()) ==
        examples::d3().open_count());
  for (int a = 0; a < bis.semigroup.size(); ++a) CHECK(bis.semigroup.idempotent(a));
}

TEST_CASE("wide subsemigroups of the group bundle") {
  groupoid::FinGroupoid gm = examples::gm();
  const auto& g1 = gm.g1();
  Bitset one(3), e(3), g(3);
  one.set(g1.index("1c"));
  one.set(g1.index("1o"));
  e.set(g1.index("1o"));
  g.set(g1.index("1o"));
  g.set(g1.index("g-"));

  auto wide = is_wide(examples::s3(),
                      {one, e, g},  // order: 1, e, g
                      gm);
  CHECK(wide.wide);

  auto narrow = is_wide(examples::z2_group(), {one, g}, gm);
  CHECK_FALSE(narrow.wide);

  auto bis = bisections(gm);
  auto full = is_wide(bis.semigroup, bis.bisection, gm);
  CHECK(full.wide);

  // a non-homomorphism is rejected
  CHECK_THROWS_WITH_AS(is_wide(examples::z2_group(), {one, e}, gm),
                       doctest::Contains("NotHomomorphism"), AxiomError);
}

TEST_CASE("partial homeomorphisms compose exactly") {
  fintop::FinSpace sig = examples::sierpinski();
  Bitset o = Bitset::single(2, sig.index("o"));
  PartialHomeo id_o = PartialHomeo::identity_on(sig, o);
  PartialHomeo full = PartialHomeo::identity_on(sig, Bitset::full(2));
  CHECK(id_o.compose_after(full) == id_o);
  CHECK(full.compose_after(id_o) == id_o);
  CHECK(id_o.inverse() == id_o);
  check_partial_homeo(sig, id_o);
  // the swap is not continuous on sierpinski
  PartialHomeo swap;
  swap.domain = Bitset::full(2);
  swap.value = {1, 0};
  CHECK_THROWS_AS(check_partial_homeo(sig, swap), AxiomError);
}

TEST_CASE("z-isomorphism criterion") {
  groupoid::FinGroupoid gm = examples::gm();
  auto bis = bisections(gm);
  // the canonical action of the bisections on the object space
  SActionOnSpace hat;
  hat.s = bis.semigroup;
  hat.z = gm.g0();
  for (const auto& b : bis.bisection) {
    PartialHomeo t;
    t.domain = Bitset(2);
    t.value.assign(2, -1);
    b.for_each([&](int arr) {
      t.domain.set(gm.s()(arr));
      t.value[gm.s()(arr)] = gm.r()(arr);
    });
    hat.theta.push_back(t);
  }
  hat.verify();

  const auto& g1 = gm.g1();
  Bitset one(3), e(3), g(3);
  one.set(g1.index("1c"));
  one.set(g1.index("1o"));
  e.set(g1.index("1o"));
  g.set(g1.index("1o"));
  g.set(g1.index("g-"));
  std::vector<int> phi = {bis.index_of(one), bis.index_of(e), bis.index_of(g)};
  auto good = z_isomorphism_check(examples::s3(), phi, hat);
  CHECK(good.ok);

  // the trivial semigroup misses the extra germ over the closed point
  InvSemigroup trivial = InvSemigroup::verify({"1"}, {{0}});
  auto bad = z_isomorphism_check(trivial, {bis.index_of(one)}, hat);
  CHECK_FALSE(bad.ok);
  CHECK(bad.witness.find("c") != std::string::npos);

  // the identity is always a z-isomorphism
  std::vector<int> idmap(bis.semigroup.size());
  for (int i = 0; i < bis.semigroup.size(); ++i) idmap[i] = i;
  CHECK(z_isomorphism_check(bis.semigroup, idmap, hat).ok);
}
