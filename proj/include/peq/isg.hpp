#ifndef PEQ_ISG_HPP
#define PEQ_ISG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peq/fintop.hpp"
#include "peq/groupoid.hpp"

namespace peq {
namespace isg {


using fintop::FinSpace;
using groupoid::FinGroupoid;

/// A finite inverse semigroup given by its multiplication table.
/// Verification computes the involution by exhaustive search and enforces
/// its uniqueness; the natural partial order t <= u iff t = t t* u is
/// cached, and the equivalent formula t = u t* t is asserted to agree.
class InvSemigroup {
public:
  InvSemigroup() = default;

  static InvSemigroup verify(std::vector<std::string> elements,
                             std::vector<std::vector<int>> table);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::string& name(int i) const { return elements_[i]; }
  int index(const std::string& name) const;
  const std::vector<std::string>& elements() const { return elements_; }

  int mult(int a, int b) const { return table_[a][b]; }
  int star(int a) const { return star_[a]; }
  bool idempotent(int a) const { return table_[a][a] == a; }
  std::vector<int> idempotents() const;
  bool leq(int a, int b) const { return leq_[a][b]; }

  std::optional<int> unit() const { return unit_; }
  std::optional<int> zero() const { return zero_; }

  bool is_homomorphism(const InvSemigroup& target, const std::vector<int>& f,
                       std::string* witness = nullptr) const;

  // Isomorphism search on tables (names ignored).
  bool isomorphic_to(const InvSemigroup& o) const;

private:
  std::vector<std::string> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> star_;
  std::vector<std::vector<char>> leq_;
  std::optional<int> unit_, zero_;
  std::map<std::string, int> index_;
};

enum class Adjoin { unit, zero };

InvSemigroup adjoin(const InvSemigroup& s, Adjoin what);

// --- bisections -------------------------------------------------------

struct BisectionSemigroup {
  InvSemigroup semigroup;
  std::vector<Bitset> bisection;  // element -> open subset of g1
  int index_of(const Bitset& b) const;
};

// All open bisections of an etale groupoid, with empty set and unit
// bisection, as an inverse semigroup under the pointwise product.
// Error: NotEtale.
BisectionSemigroup bisections(const FinGroupoid& g);

struct WideResult {
  bool wide = false;
  std::string witness;
};

// f maps elements of s to open subsets of g's arrow space; verified to be
// a homomorphism into Bis(g) first (error NotHomomorphism).
WideResult is_wide(const InvSemigroup& s, const std::vector<Bitset>& f,
                   const FinGroupoid& g);

// --- partial homeomorphisms and actions on spaces ----------------------

/// Partial homeomorphism of a finite space: an open domain and values on
/// it (-1 outside).
struct PartialHomeo {
  Bitset domain;
  std::vector<int> value;

  static PartialHomeo identity_on(const FinSpace& z, const Bitset& dom);
  static PartialHomeo total(const FinSpace& z, const std::vector<int>& v);

  Bitset range() const;
  PartialHomeo compose_after(const PartialHomeo& g) const;  // this o g
  PartialHomeo inverse() const;
  bool operator==(const PartialHomeo& o) const {
    return domain == o.domain && value == o.value;
  }
};

// Checks the partial map is a homeomorphism between open subsets of z.
void check_partial_homeo(const FinSpace& z, const PartialHomeo& t);

/// An inverse semigroup action on a space by partial homeomorphisms,
/// i.e. a unital homomorphism into PHomeo(Z).
struct SActionOnSpace {
  InvSemigroup s;
  FinSpace z;
  std::vector<PartialHomeo> theta;  // per element of s

  const Bitset& domain(int t) const { return theta[t].domain; }
  void verify() const;
};

struct ZIsoResult {
  bool ok = false;
  std::string witness;
};

// Lemma-style criterion for phi : S -> S^ to induce an isomorphism
// Z x| S -> Z x| S^ of germ groupoids; checked by exhaustive enumeration.
ZIsoResult z_isomorphism_check(const InvSemigroup& s, const std::vector<int>& phi,
                               const SActionOnSpace& hat_action);

}  // namespace isg
}  // namespace peq

#endif
