#ifndef PEQ_CSTAR_HPP
#define PEQ_CSTAR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peq/action.hpp"
#include "peq/groupoid.hpp"
#include "peq/isg.hpp"
#include "peq/linalg.hpp"

namespace peq {
namespace cstar {

using action::SGradedGroupoid;
using peq::Bitset;
using fintop::FinSpace;
using groupoid::FinGroupoid;
using isg::InvSemigroup;
using isg::SActionOnSpace;

/// A concrete *-algebra: a subspace of n x n Gaussian-rational matrices
/// closed under multiplication and conjugate transpose.
class StarAlgebra {
public:
  StarAlgebra() = default;

  static StarAlgebra verify(int ambient, std::vector<Mat> basis,
                            std::vector<std::string> labels = {});

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const RowSpace& span() const { return span_; }

  bool contains(const Mat& m) const { return span_.contains(m.flatten()); }
  Vec coordinates(const Mat& m) const;

  // the unit of the algebra (exists in the semisimple case)
  Mat unit() const;

private:
  int n_ = 0;
  std::vector<Mat> basis_;
  std::vector<std::string> labels_;
  RowSpace span_;
};

/// A matrix subspace M with A M A inside M and M* M, M M* inside A: a
/// concrete Hilbert bimodule over the coefficient algebra.
struct BimoduleSubspace {
  std::vector<Mat> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  RowSpace span(int ambient) const;
};

// Checks the bimodule axioms of M over A inside the ambient matrices,
// including the inner-product identity (x y*) z = x (y* z) and exact
// positivity of x* x for basis elements.
void verify_bimodule(const StarAlgebra& a, const BimoduleSubspace& m);

/// A saturated (or not) Fell bundle over an inverse semigroup, realized
/// concretely: fibers are subspaces of a common ambient matrix algebra.
struct FellBundleOverS {
  InvSemigroup s;
  int ambient = 0;
  std::vector<BimoduleSubspace> fiber;  // per element of s
  bool saturated = true;

  void verify() const;
  const BimoduleSubspace& unit_fiber() const;
};

// --- groupoid algebras -------------------------------------------------

// Convolution *-algebra of a finite groupoid with the topology forgotten,
// realized by the left regular representation on functions on the arrows.
StarAlgebra groupoid_algebra(const FinGroupoid& l);

// B_t = span of arrows in the slice L_t inside the groupoid algebra.
FellBundleOverS fell_bundle_from_grading(const SGradedGroupoid& g);

struct SectionAlgebraResult {
  StarAlgebra algebra;     // realized inside the ambient matrices
  int dim = 0;
  bool unit_fiber_embeds = false;
  int relation_rank = 0;   // dimension of the span of the section relations
};

// Quotient of the direct sum of the fibers by the inclusion relations,
// with the convolution product; certified semisimple through the trace
// form of the regular representation and realized faithfully inside the
// ambient algebra.  Error NotSemisimple.
SectionAlgebraResult section_algebra(const FellBundleOverS& f);

struct EMapKernel {
  int kernel_dim = 0;
  int generator_span_dim = 0;
  bool generators_span = false;
};

EMapKernel e_map_kernel(const SGradedGroupoid& g);
EMapKernel e_map_kernel(const FellBundleOverS& f);

// --- structure theory --------------------------------------------------

struct WedderburnDecomposition {
  std::vector<int> block_sizes;           // sorted
  std::vector<Mat> central_idempotents;   // matching order
};

// Central primitive idempotents by exact splitting of the centre with
// self-adjoint elements; block sizes certified by minimal projections.
// Errors: NotSemisimple, NotSplit.
WedderburnDecomposition wedderburn_blocks(const StarAlgebra& a);

bool morita_equivalent(const StarAlgebra& a, const StarAlgebra& b);

struct IdealLattice {
  WedderburnDecomposition blocks;
  FinSpace prim;                    // discrete space of blocks
  std::vector<Bitset> ideals;       // all subsets of blocks
  // ideal attached to an open subset of prim = sum of the blocks in it
  RowSpace ideal_space(const StarAlgebra& a, const Bitset& blocks_subset) const;
};

IdealLattice ideal_and_prim(const StarAlgebra& a);

// The action of S on the primitive ideal space of the unit fibre induced
// by the fibers, via the block correspondence I M = M J.
SActionOnSpace prim_action(const FellBundleOverS& f);

struct SupremaCheck {
  bool ok = false;
  std::string witness;
};

// m maps each open subset of x (by its index in x.opens()) to a subset of
// blocks; checked to be monotone and meet-preserving, then tested for
// compatibility with finite suprema.
SupremaCheck suprema_check(const FinSpace& x, const IdealLattice& lat,
                           const std::vector<Bitset>& m);

// --- the explicit twisted-action example --------------------------------

struct TwistedActionReport {
  bool dims_ok = false;            // (6, 4, 6)
  bool a_g_two_sided = false;      // u A = A u
  bool intersection_ok = false;    // A_1 n A_g = A_e
  bool sum_ok = false;             // A_1 + A_g = B
  bool alpha_order_two = false;    // Ad(u)^2 = id
  bool alpha_not_inner = false;    // u A not inside A
  bool u_multiplier_of_ideal = false;  // u Mult(A_e)
  bool cocycle_ok = false;         // twisted-action identities
  bool sieben_fails = false;       // omega(e,g) nontrivial on A_e
  bool bundle_matches = false;     // associated Fell bundle = (A_1, A_e, A_g)
  int section_dim = 0;
  std::vector<int> section_blocks;
  FellBundleOverS bundle;

  bool all_ok() const {
    return dims_ok && a_g_two_sided && intersection_ok && sum_ok &&
           alpha_order_two && alpha_not_inner && u_multiplier_of_ideal &&
           cocycle_ok && sieben_fails && bundle_matches;
  }
};

// Builds B = M_2 + M_2, A = {f(0) diagonal}, u the flip, and certifies
// every identity of the twisted action whose cocycle is nontrivial on an
// idempotent.
TwistedActionReport verify_twisted_action_s9();

// --- Fell bundles over groupoids -----------------------------------------

/// A Fell bundle over a finite discrete groupoid with concrete matrix
/// fibers: fiber[g] spans a subspace of the common ambient matrices with
/// B_g B_h inside B_{gh} and B_g* = B_{g^{-1}}.
struct FellBundleOverGroupoid {
  FinGroupoid l;
  int ambient = 0;
  std::vector<BimoduleSubspace> fiber;  // per arrow

  void verify() const;
};

// The convolution algebra of the bundle, represented on the direct sum of
// the fibers by block left multiplication; faithfulness is checked.
StarAlgebra bundle_convolution_algebra(const FellBundleOverGroupoid& b,
                                       const Bitset& arrows);

struct IteratedSectionResult {
  FellBundleOverS s_bundle;        // fibers C*(L_t, B)
  StarAlgebra via_groupoid;        // C*(L, B) directly
  SectionAlgebraResult via_sections;
  bool dims_match = false;
  bool blocks_match = false;
  bool unit_fiber_embeds = false;
};

// Computes the section algebra two ways, over the groupoid and through
// the S-indexed bundle of a grading, and certifies they agree.
// Error PositivityFailure when some x* x is not positive semidefinite in
// the unit-fibre representation.
IteratedSectionResult groupoid_fell_section_algebra(const FellBundleOverGroupoid& b,
                                                    const SGradedGroupoid& g);

}  // namespace cstar
}  // namespace peq

#endif
