#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peq/cstar.hpp"
#include "peq/examples.hpp"

using namespace peq;
using namespace peq::cstar;

TEST_CASE("scalar arithmetic and parsing") {
  Scalar a = Scalar::parse("1/3+2/5i");
  CHECK(a.re == mpq_class(1, 3));
  CHECK(a.im == mpq_class(2, 5));
  CHECK(Scalar::parse(a.str()) == a);
  CHECK(Scalar::parse("-2") == Scalar(-2));
  CHECK(Scalar::parse("i") == Scalar::i());
  CHECK((a * a.inverse()) == Scalar(1));
  CHECK(a.conj().im == mpq_class(-2, 5));
}

TEST_CASE("positive semidefiniteness is exact") {
  Mat good(2, 2);
  good.at(0, 0) = Scalar(2);
  good.at(0, 1) = Scalar(1);
  good.at(1, 0) = Scalar(1);
  good.at(1, 1) = Scalar(1);
  CHECK(is_positive_semidefinite(good));

  Mat hermitian_psd(2, 2);
  hermitian_psd.at(0, 0) = Scalar(1);
  hermitian_psd.at(0, 1) = Scalar::i();
  hermitian_psd.at(1, 0) = Scalar::i().conj();
  hermitian_psd.at(1, 1) = Scalar(1);
  CHECK(is_positive_semidefinite(hermitian_psd));

  Mat flip(2, 2);
  flip.at(0, 1) = Scalar(1);
  flip.at(1, 0) = Scalar(1);
  CHECK_FALSE(is_positive_semidefinite(flip));

  // x* x is always positive semidefinite
  Mat x(2, 2);
  x.at(0, 0) = Scalar::parse("1/2");
  x.at(0, 1) = Scalar::parse("-3+i");
  x.at(1, 1) = Scalar::parse("2/7i");
  CHECK(is_positive_semidefinite(x.adjoint() * x));
}

TEST_CASE("rational roots of polynomials") {
  // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
  auto r = rational_roots({mpq_class(-3, 2), mpq_class(5, 2), mpq_class(1)});
  CHECK(r.complete);
  REQUIRE(r.roots.size() == 2);
  CHECK(((r.roots[0] == mpq_class(1, 2) && r.roots[1] == -3) ||
         (r.roots[1] == mpq_class(1, 2) && r.roots[0] == -3)));

  // x^2 - 2 has no rational roots
  auto bad = rational_roots({mpq_class(-2), mpq_class(0), mpq_class(1)});
  CHECK_FALSE(bad.complete);
}

TEST_CASE("groupoid algebras and their blocks") {
  auto p2 = groupoid_algebra(examples::p2());
  CHECK(p2.dim() == 4);
  CHECK(wedderburn_blocks(p2).block_sizes == std::vector<int>({2}));

  auto gm = groupoid_algebra(examples::gm());
  CHECK(gm.dim() == 3);
  CHECK(wedderburn_blocks(gm).block_sizes == std::vector<int>({1, 1, 1}));

  auto z4 = groupoid_algebra(examples::z4());
  CHECK(wedderburn_blocks(z4).block_sizes == std::vector<int>({1, 1, 1, 1}));

  auto cech = groupoid_algebra(examples::cech3().groupoid);
  CHECK(wedderburn_blocks(cech).block_sizes == std::vector<int>({1, 1, 2}));
}

TEST_CASE("the group algebra of Z/3 does not split over the gaussians") {
  auto z3 = groupoid_algebra(groupoid::cyclic_group(3));
  CHECK_THROWS_WITH_AS(wedderburn_blocks(z3), doctest::Contains("NotSplit"),
                       AxiomError);
}

TEST_CASE("fell bundles from gradings") {
  auto f = fell_bundle_from_grading(examples::gm_s3_grading());
  std::vector<int> dims;
  for (const auto& fib : f.fiber) dims.push_back(fib.dim());
  // order of elements: 1, e, g
  CHECK(dims == std::vector<int>({2, 1, 2}));

  auto fz = fell_bundle_from_grading(examples::z4_z2_grading());
  CHECK(fz.fiber[0].dim() == 2);
  CHECK(fz.fiber[1].dim() == 2);

  auto ft = fell_bundle_from_grading(examples::trivial_grading(examples::p2()));
  CHECK(ft.fiber[0].dim() == 4);
}

TEST_CASE("section algebras") {
  auto f = fell_bundle_from_grading(examples::gm_s3_grading());
  auto sec = section_algebra(f);
  CHECK(sec.dim == 3);
  CHECK(sec.relation_rank == 2);
  CHECK(sec.unit_fiber_embeds);
  CHECK(wedderburn_blocks(sec.algebra).block_sizes ==
        std::vector<int>({1, 1, 1}));

  auto fz = fell_bundle_from_grading(examples::z4_z2_grading());
  auto secz = section_algebra(fz);
  CHECK(secz.dim == 4);
  CHECK(wedderburn_blocks(secz.algebra).block_sizes ==
        std::vector<int>({1, 1, 1, 1}));
}

TEST_CASE("kernels of the summing map") {
  auto k = e_map_kernel(examples::gm_s3_grading());
  CHECK(k.kernel_dim == 2);
  CHECK(k.generators_span);

  auto kt = e_map_kernel(examples::trivial_grading(examples::p2()));
  CHECK(kt.kernel_dim == 0);
  CHECK(kt.generators_span);

  auto s9 = verify_twisted_action_s9();
  auto k9 = e_map_kernel(s9.bundle);
  CHECK(k9.kernel_dim == 8);
  CHECK(k9.generators_span);
}

TEST_CASE("morita equivalence by block counts") {
  auto m2 = StarAlgebra::verify(
      2, {Mat::unit(2, 0, 0), Mat::unit(2, 0, 1), Mat::unit(2, 1, 0),
          Mat::unit(2, 1, 1)});
  auto c1 = StarAlgebra::verify(1, {Mat::identity(1)});
  CHECK(morita_equivalent(m2, c1));

  auto c2 = StarAlgebra::verify(2, {Mat::unit(2, 0, 0), Mat::unit(2, 1, 1)});
  CHECK_FALSE(morita_equivalent(c2, c1));

  auto cech = groupoid_algebra(examples::cech3().groupoid);
  auto c3 = groupoid_algebra(groupoid::space_groupoid(examples::d3()));
  CHECK(morita_equivalent(cech, c3));
}

TEST_CASE("ideal lattices and the primitive spectrum") {
  auto c1 = StarAlgebra::verify(1, {Mat::identity(1)});
  auto lat1 = ideal_and_prim(c1);
  CHECK(lat1.ideals.size() == 2);

  auto s9 = verify_twisted_action_s9();
  auto a = StarAlgebra::verify(s9.bundle.ambient, s9.bundle.unit_fiber().basis);
  auto lat = ideal_and_prim(a);
  CHECK(lat.prim.size() == 3);
  CHECK(lat.ideals.size() == 8);
  CHECK(lat.blocks.block_sizes == std::vector<int>({1, 1, 2}));

  auto m22 = fell_bundle_from_grading(examples::z4_z2_grading());
  auto secz = section_algebra(m22);
  CHECK(ideal_and_prim(secz.algebra).ideals.size() == 16);
}

TEST_CASE("the twisted action of the explicit example") {
  auto rep = verify_twisted_action_s9();
  CHECK(rep.dims_ok);
  CHECK(rep.a_g_two_sided);
  CHECK(rep.intersection_ok);
  CHECK(rep.sum_ok);
  CHECK(rep.alpha_order_two);
  CHECK(rep.alpha_not_inner);
  CHECK(rep.u_multiplier_of_ideal);
  CHECK(rep.cocycle_ok);
  CHECK(rep.sieben_fails);
  CHECK(rep.bundle_matches);
  CHECK(rep.section_dim == 8);
  CHECK(rep.section_blocks == std::vector<int>({2, 2}));
}

TEST_CASE("prim actions of bundles") {
  auto s9 = verify_twisted_action_s9();
  auto act = prim_action(s9.bundle);
  int e = act.s.index("e"), g = act.s.index("g"), one = act.s.index("1");
  // the unit acts as the total identity
  CHECK(act.theta[one].domain.count() == 3);
  // e is the partial identity on the matrix block
  CHECK(act.theta[e].domain.count() == 1);
  CHECK(act.theta[e].domain.test(2));
  CHECK(act.theta[e].value[2] == 2);
  // g swaps the two diagonal blocks and fixes the matrix block
  CHECK(act.theta[g].value[0] == 1);
  CHECK(act.theta[g].value[1] == 0);
  CHECK(act.theta[g].value[2] == 2);

  // identity bimodule gives the identity map; a zero fiber gives the
  // empty partial map
  isg::InvSemigroup lattice =
      isg::InvSemigroup::verify({"1", "0"}, {{0, 1}, {1, 1}});
  FellBundleOverS f;
  f.s = lattice;
  f.ambient = 1;
  f.fiber.resize(2);
  f.fiber[0].basis = {Mat::identity(1)};
  auto act2 = prim_action(f);
  CHECK(act2.theta[0].domain.count() == 1);
  CHECK(act2.theta[1].domain.none());
}

TEST_CASE("bimodule axioms are enforced") {
  auto a = StarAlgebra::verify(2, {Mat::unit(2, 0, 0), Mat::unit(2, 1, 1)});
  BimoduleSubspace bad;
  bad.basis = {Mat::unit(2, 0, 1) + Mat::unit(2, 0, 0)};
  CHECK_THROWS_AS(verify_bimodule(a, bad), AxiomError);

  BimoduleSubspace good;
  good.basis = {Mat::unit(2, 0, 1)};
  CHECK_NOTHROW(verify_bimodule(a, good));
}

TEST_CASE("saturation failures carry witnesses") {
  auto s9 = verify_twisted_action_s9();
  FellBundleOverS f = s9.bundle;
  // drop a basis vector from the g-fiber: products no longer span
  f.fiber[f.s.index("g")].basis.pop_back();
  CHECK_THROWS_AS(f.verify(), AxiomError);
}
