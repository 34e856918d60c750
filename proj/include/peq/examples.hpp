#ifndef PEQ_EXAMPLES_HPP
#define PEQ_EXAMPLES_HPP

#include "peq/action.hpp"
#include "peq/groupoid.hpp"
#include "peq/isg.hpp"

namespace peq {
namespace examples {

using action::SGradedGroupoid;
using fintop::FinSpace;
using groupoid::FinGroupoid;
using isg::InvSemigroup;
using isg::SActionOnSpace;

// Sierpinski space on {c, o} with {o} open.
FinSpace sierpinski();
// discrete two-point space
FinSpace d2();
// discrete three-point space {a, b, c}
FinSpace d3();

// the non-Hausdorff group bundle on the Sierpinski space: unit arrows
// plus one extra order-two arrow over the closed point
FinGroupoid gm();

// {1, e, g} with g^2 = 1, e g = g e = e^2 = e
InvSemigroup s3();
// the two-element group
InvSemigroup z2_group();

FinGroupoid z4();
FinGroupoid p2();

groupoid::CechResult cech3();

// trivial action of s3 on the Sierpinski space: D_e = {o}, everything acts
// as the identity
SActionOnSpace s3_on_sigma();

// gm graded by s3: L_1 the units, L_e = {1o}, L_g = {1o, g-}
SGradedGroupoid gm_s3_grading();

// Z/4 graded by Z/2 through the parity cocycle
SGradedGroupoid z4_z2_grading();

SGradedGroupoid trivial_grading(const FinGroupoid& g);

// left-translation action of a wide inverse semigroup on the arrow space:
// f maps semigroup elements to bisections of h
SActionOnSpace translation_action(const FinGroupoid& h, const InvSemigroup& s,
                                  const std::vector<Bitset>& f);

}  // namespace examples
}  // namespace peq

#endif
