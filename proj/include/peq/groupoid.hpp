#ifndef PEQ_GROUPOID_HPP
#define PEQ_GROUPOID_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "peq/fintop.hpp"

namespace peq {
namespace groupoid {


using fintop::CMap;
using fintop::FinSpace;

struct GroupoidPredicates {
  bool etale = false;
  bool basic = false;
  bool proper = false;
  bool free = false;
};

/// A finite topological groupoid with explicit multiplication table.
/// Construction through verify() checks the axioms of an open topological
/// groupoid by enumeration: Gr1 range/source of products, Gr2
/// associativity, Gr3 the two shear maps are homeomorphisms of
/// fiber-product subspaces, Gr4 range and source are open surjections,
/// plus continuity of unit/inversion and the unit/inverse laws.
class FinGroupoid {
public:
  FinGroupoid() = default;

  // mult[g][h] = index of g*h, or -1 when not composable.
  static FinGroupoid verify(FinSpace g0, FinSpace g1, CMap r, CMap s,
                            std::vector<std::vector<int>> mult,
                            std::vector<int> unit, std::vector<int> inv);

  const FinSpace& g0() const { return g0_; }
  const FinSpace& g1() const { return g1_; }
  const CMap& r() const { return r_; }
  const CMap& s() const { return s_; }
  int mult(int g, int h) const { return mult_[g][h]; }
  bool composable(int g, int h) const { return s_(g) == r_(h); }
  int unit(int x) const { return unit_[x]; }
  int inv(int g) const { return inv_[g]; }

  bool is_unit(int g) const { return unit_[r_(g)] == g; }

  // U open in g0 with r^{-1}(U) = s^{-1}(U); errors NotOpen / NotInvariant.
  void check_invariant_open(const Bitset& u) const;
  bool is_invariant_open(const Bitset& u) const;
  std::vector<Bitset> invariant_opens() const;

  GroupoidPredicates predicates() const;

  bool operator==(const FinGroupoid& o) const {
    return g0_ == o.g0_ && g1_ == o.g1_ &&
           r_.assignment() == o.r_.assignment() &&
           s_.assignment() == o.s_.assignment() && mult_ == o.mult_ &&
           unit_ == o.unit_ && inv_ == o.inv_;
  }
  bool operator!=(const FinGroupoid& o) const { return !(*this == o); }

private:
  FinSpace g0_, g1_;
  CMap r_, s_;
  std::vector<std::vector<int>> mult_;
  std::vector<int> unit_, inv_;
};

// --- constructions --------------------------------------------------------

// A space viewed as a groupoid with only identity arrows.
FinGroupoid space_groupoid(const FinSpace& z);

// Z/n as a one-object groupoid with discrete topology.
FinGroupoid cyclic_group(int n);

// Pair groupoid of a finite space (arrows = X x X with product topology).
FinGroupoid pair_groupoid(const FinSpace& x);

FinGroupoid disjoint_union(const FinGroupoid& a, const FinGroupoid& b);

// Restriction to an invariant open subset, re-verified.
FinGroupoid restrict(const FinGroupoid& g, const Bitset& u);

struct OrbitSpaceResult {
  FinSpace space;
  CMap projection;  // g0 -> orbit space, asserted open surjection
};

OrbitSpaceResult orbit_space(const FinGroupoid& g);

// Groupoid of the equivalence relation of an open continuous surjection f,
// arrows the fiber product of f with itself.  Always basic (asserted).
FinGroupoid covering_groupoid(const CMap& f);

struct CechResult {
  FinGroupoid groupoid;
  CMap cover_map;  // disjoint union of the cover -> Z
  bool arrow_space_hausdorff = false;
};

CechResult cech_groupoid(const FinSpace& z, const std::vector<Bitset>& cover);

// Exhaustive isomorphism search (object/arrow bijections preserving
// topology and multiplication).  `arrow_filter(g, h)` can veto candidate
// arrow assignments; used for grading-preserving searches.
struct GroupoidIso {
  std::vector<int> obj;    // g0(a) -> g0(b)
  std::vector<int> arrow;  // g1(a) -> g1(b)
};

std::optional<GroupoidIso> find_isomorphism(
    const FinGroupoid& a, const FinGroupoid& b,
    const std::function<bool(int, int)>& arrow_filter = nullptr);

bool isomorphic(const FinGroupoid& a, const FinGroupoid& b);

}  // namespace groupoid
}  // namespace peq

#endif
