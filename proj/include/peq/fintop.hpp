#ifndef PEQ_FINTOP_HPP
#define PEQ_FINTOP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peq/bitset.hpp"
#include "peq/error.hpp"

namespace peq {
namespace fintop {

/// A finite topological space.  The topology is stored through the minimal
/// open neighbourhood of each point (equivalently, the specialization
/// preorder); the family of all opens is exactly the family of up-sets and
/// is enumerated only on demand.
class FinSpace {
public:
  FinSpace() = default;

  // Validates an explicit open family: empty and full set present, closed
  // under pairwise union and intersection.  Defects are reported, never
  // repaired.  Errors: MissingEmptyOrFull, NotClosedUnderUnion,
  // NotClosedUnderIntersection, DuplicatePoint, UnknownPoint.
  static FinSpace from_opens(std::vector<std::string> points,
                             const std::vector<std::vector<std::string>>& opens);

  // opens = up-sets of the preorder generated by `leq` (x <= y means every
  // open containing x contains y, i.e. y lies in the minimal nbhd of x).
  static FinSpace from_preorder(std::vector<std::string> points,
                                const std::vector<std::pair<std::string, std::string>>& leq);

  // Internal constructor from minimal neighbourhoods; validates the two
  // axioms x in U_x and y in U_x => U_y subset U_x.
  static FinSpace from_min_nbhds(std::vector<std::string> points,
                                 std::vector<Bitset> min_nbhd);

  static FinSpace discrete(std::vector<std::string> points);
  static FinSpace indiscrete(std::vector<std::string> points);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(int i) const { return points_[i]; }
  int index(const std::string& name) const;

  const Bitset& min_nbhd(int i) const { return min_nbhd_[i]; }

  bool is_open(const Bitset& s) const;
  bool is_closed(const Bitset& s) const { return is_open(s.complement()); }
  Bitset closure(const Bitset& s) const;
  Bitset interior(const Bitset& s) const;

  // Number of open sets; enumerates subsets, guarded to size() <= 24.
  std::uint64_t open_count() const;
  // All opens, canonically sorted; same guard as open_count().
  std::vector<Bitset> opens() const;

  bool hausdorff() const;
  bool t0() const;
  // Via the diagonal criterion: X is locally Hausdorff iff the diagonal is
  // locally closed in X x X.
  bool locally_hausdorff() const;
  // S open in its closure.
  bool locally_closed(const Bitset& s) const;

  bool operator==(const FinSpace& o) const {
    return points_ == o.points_ && min_nbhd_ == o.min_nbhd_;
  }
  bool operator!=(const FinSpace& o) const { return !(*this == o); }

  // Same topology, ignoring point names (tests bijections exhaustively
  // with pruning on neighbourhood sizes).
  bool homeomorphic_to(const FinSpace& o) const;

private:
  std::vector<std::string> points_;
  std::vector<Bitset> min_nbhd_;
  std::map<std::string, int> index_;

  void build_index();
};

/// Record of exact map predicates; continuity always holds for a
/// constructed CMap, the flag is kept so reports can print it.
struct MapPredicates {
  bool continuous = false;
  bool open = false;
  bool closed = false;
  bool proper = false;  // == closed: finite spaces are quasi-compact
  bool surjective = false;
  bool etale = false;
};

/// A continuous map between finite spaces.  Construction verifies
/// continuity (error: NotContinuous with a witness point).
class CMap {
public:
  CMap() = default;
  CMap(FinSpace dom, FinSpace cod, std::vector<int> assignment);
  CMap(const FinSpace& dom, const FinSpace& cod,
       const std::map<std::string, std::string>& assignment);

  static CMap identity(const FinSpace& x);
  static CMap constant(const FinSpace& dom, const FinSpace& cod, int point);

  const FinSpace& dom() const { return dom_; }
  const FinSpace& cod() const { return cod_; }
  int operator()(int i) const { return map_[i]; }
  const std::vector<int>& assignment() const { return map_; }

  Bitset image() const;
  Bitset preimage(const Bitset& s) const;
  Bitset image_of(const Bitset& s) const;

  bool is_open() const;
  bool is_closed() const;
  bool is_surjective() const;
  bool is_injective() const;
  bool is_etale() const;
  bool is_homeomorphism() const;
  bool is_homeo_onto_image() const;

  MapPredicates predicates() const;

  CMap compose_after(const CMap& g) const;  // (*this) o g

private:
  FinSpace dom_, cod_;
  std::vector<int> map_;
};

// --- constructions -------------------------------------------------------

// Product space with the product topology; the point (i, j) of the factors
// gets index i * right.size() + j and name "(p|q)".
FinSpace product(const FinSpace& a, const FinSpace& b);

// Trace topology on a subset; point names are kept.
FinSpace subspace(const FinSpace& x, const Bitset& s);
// Indices of the subspace points inside the parent.
std::vector<int> subspace_points(const Bitset& s);

struct QuotientResult {
  FinSpace space;
  CMap projection;
};

// Quotient by the partition given by `cls` (point i of the source belongs
// to class cls[i]; classes must be numbered 0..k-1).  Installs the finest
// topology making the projection continuous.
QuotientResult quotient(const FinSpace& x, const std::vector<int>& cls,
                        std::vector<std::string> class_names);

struct FiberProductResult {
  FinSpace space;                         // subspace of product(dom f, dom g)
  std::vector<std::pair<int, int>> pairs; // point k = (pairs[k].first, pairs[k].second)
  CMap to_left, to_right;
};

// {(x, y) : f(x) = g(y)} with the subspace-of-product topology.
// Error: InconsistentAnchors when the codomains differ.
FiberProductResult fiber_product(const CMap& f, const CMap& g);

struct DisjointUnionResult {
  FinSpace space;
  std::vector<int> offset;  // offset of part i in the union
};

// Disjoint union; names are prefixed "i:" to stay unique.
DisjointUnionResult disjoint_union(const std::vector<FinSpace>& parts);

struct HausdorffPredicates {
  bool hausdorff = false;
  bool locally_hausdorff = false;
  bool t0 = false;
  std::optional<bool> locally_closed;  // of the optional subset argument
};

HausdorffPredicates hausdorff_predicates(const FinSpace& x,
                                         const std::optional<Bitset>& s = std::nullopt);

}  // namespace fintop
}  // namespace peq

#endif
