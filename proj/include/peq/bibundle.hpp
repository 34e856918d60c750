#ifndef PEQ_BIBUNDLE_HPP
#define PEQ_BIBUNDLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "peq/groupoid.hpp"
#include "peq/isg.hpp"

namespace peq {
namespace bibundle {

using fintop::CMap;
using fintop::FinSpace;
using groupoid::FinGroupoid;

/// A partial equivalence (bibundle) between two finite groupoids: a space
/// with commuting left/right actions, both principal over the opposite
/// anchor, with open anchor maps.  `left` acts from the left through the
/// anchor r : X -> left.g0, `right` from the right through s : X -> right.g0.
class PartialEquivalence {
public:
  PartialEquivalence() = default;

  // left_act[g][x] = g*x or -1; right_act[x][h] = x*h or -1.  Checks P1-P4
  // (errors ActionDefect, P3NotBijective, AnchorNotOpen) and that r(X),
  // s(X) are invariant opens of the respective groupoids.
  static PartialEquivalence verify(FinGroupoid left, FinGroupoid right,
                                   FinSpace x, CMap r, CMap s,
                                   std::vector<std::vector<int>> left_act,
                                   std::vector<std::vector<int>> right_act);

  const FinGroupoid& left() const { return left_; }
  const FinGroupoid& right() const { return right_; }
  const FinSpace& space() const { return x_; }
  const CMap& r() const { return r_; }
  const CMap& s() const { return s_; }
  int left_act(int g, int x) const { return left_act_[g][x]; }
  int right_act(int x, int h) const { return right_act_[x][h]; }

  Bitset range_subset() const { return r_.image(); }   // r(X)
  Bitset source_subset() const { return s_.image(); }  // s(X)
  bool global() const;

  // the unique g with x1 = g * x2 (requires s(x1) = s(x2))
  int divide_left(int x1, int x2) const;
  // the unique h with x2 = x1 * h (requires r(x1) = r(x2))
  int divide_right(int x1, int x2) const;

  bool operator==(const PartialEquivalence& o) const {
    return left_ == o.left_ && right_ == o.right_ && x_ == o.x_ &&
           r_.assignment() == o.r_.assignment() &&
           s_.assignment() == o.s_.assignment() && left_act_ == o.left_act_ &&
           right_act_ == o.right_act_;
  }

private:
  FinGroupoid left_, right_;
  FinSpace x_;
  CMap r_, s_;
  std::vector<std::vector<int>> left_act_, right_act_;
};

/// An equivariant continuous map between partial equivalences with the
/// same left and right groupoids; always an isomorphism onto an open
/// sub-bibundle.
struct BibundleMap {
  std::vector<int> assignment;  // X1 -> X2 point map
  bool isomorphism = false;     // onto all of X2
};

PartialEquivalence identity_equivalence(const FinGroupoid& g);

PartialEquivalence restrict_peq(const PartialEquivalence& x, const Bitset& u,
                                const Bitset& v);

// G^1_U with translation actions, as a partial equivalence of G.
PartialEquivalence unit_restriction(const FinGroupoid& g, const Bitset& u);

struct ComposeResult {
  PartialEquivalence composite;
  // class index of the pair (x, y); -1 for non-composable pairs
  std::vector<std::vector<int>> cls;
};

// X x_H Y: fiber product over the middle groupoid modulo (xh, y) ~ (x, hy),
// with the quotient topology; representatives are the least pairs.
ComposeResult compose(const PartialEquivalence& x, const PartialEquivalence& y);

PartialEquivalence dual(const PartialEquivalence& x);

struct PairingResult {
  ComposeResult xxstar;        // X x_H X*
  ComposeResult xstarx;        // X* x_G X
  BibundleMap to_left_units;   // X x_H X* -> G^1_{r(X)}
  BibundleMap to_right_units;  // X* x_G X -> H^1_{s(X)}
};

// The canonical isomorphisms X x X* ~ G^1_{r(X)} and X* x X ~ H^1_{s(X)},
// verified as bibundle isomorphisms together with the two triangle
// identities g*x3 = x1*h for the induced divisions.
PairingResult pairing(const PartialEquivalence& x);

// All bibundle maps X1 -> X2, canonically ordered; each is checked to be
// an isomorphism onto the restriction of X2 to the anchors of X1.
std::vector<BibundleMap> find_bibundle_maps(const PartialEquivalence& x1,
                                            const PartialEquivalence& x2);

struct IdempotentTrivialization {
  Bitset invariant_open;  // U with X ~ G^1_U
  BibundleMap iso;        // X -> unit_restriction(G, U)
};

// Given a bibundle isomorphism mu : X x_G X -> X, produce the unique
// invariant open U and isomorphism X -> G^1_U intertwining mu with the
// multiplication.  Errors: NotIsomorphism, NoSuchStructure.
IdempotentTrivialization idempotent_trivialize(const PartialEquivalence& x,
                                               const ComposeResult& xx,
                                               const std::vector<int>& mu);

struct LocalCentraliser {
  Bitset invariant_open;
  std::vector<int> section;  // g0 point -> isotropy arrow, -1 outside U
  bool trivial = true;       // all values are units
};

struct LocalCentraliserReport {
  std::vector<LocalCentraliser> centralisers;
  bool has_nontrivial = false;
};

LocalCentraliserReport local_centralisers(const FinGroupoid& g);

// Partial homeomorphism of a space, as a bibundle over the space groupoid:
// the space is dom(theta), the left anchor is theta, the right anchor the
// inclusion.
PartialEquivalence from_partial_homeo(const FinSpace& z, const isg::PartialHomeo& theta);

// H_f for a groupoid isomorphism f : G -> H (checked; error NotIsomorphism):
// H^1 with right G-action through f.
PartialEquivalence from_functor_iso(const FinGroupoid& g, const FinGroupoid& h,
                                    const groupoid::GroupoidIso& f);

struct LinkingResult {
  FinGroupoid groupoid;
  int offset_g1 = 0, offset_x = 0, offset_xstar = 0, offset_h1 = 0;
  int offset_g0 = 0, offset_h0 = 0;
};

// Linking groupoid on G^0 | H^0 with arrows G^1 | X | X* | H^1; the
// mixed products use the bibundle actions and the canonical pairings.
// With require_global set, errors NotGlobalEquivalence unless both
// anchors are surjective.
LinkingResult linking_groupoid(const PartialEquivalence& x, bool require_global);

// All self partial equivalences of g with at most max_points points, up
// to bibundle isomorphism: orbit pairings with isotropy isomorphisms give
// the underlying bibundles, candidate topologies are enumerated
// exhaustively under the anchor constraints, and every candidate is fully
// verified.  Complete up to the size bound.
std::vector<PartialEquivalence> enumerate_peq(const FinGroupoid& g,
                                              int max_points);

}  // namespace bibundle
}  // namespace peq

#endif
