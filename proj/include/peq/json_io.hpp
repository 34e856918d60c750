#ifndef PEQ_JSON_IO_HPP
#define PEQ_JSON_IO_HPP

#include <json.hpp>

#include "peq/action.hpp"
#include "peq/bibundle.hpp"
#include "peq/cstar.hpp"

namespace peq {
namespace io {

using nlohmann::json;

// canonical serialization: points and opens sorted lexicographically
json space_to_json(const fintop::FinSpace& x);
fintop::FinSpace space_from_json(const json& j);

json cmap_to_json(const fintop::CMap& f);
fintop::CMap cmap_from_json(const json& j);

json groupoid_to_json(const groupoid::FinGroupoid& g);
groupoid::FinGroupoid groupoid_from_json(const json& j);

json semigroup_to_json(const isg::InvSemigroup& s);
isg::InvSemigroup semigroup_from_json(const json& j);

json bibundle_to_json(const bibundle::PartialEquivalence& x);
bibundle::PartialEquivalence bibundle_from_json(const json& j);

json grading_to_json(const action::SGradedGroupoid& g);
action::SGradedGroupoid grading_from_json(const json& j);

json space_action_to_json(const isg::SActionOnSpace& a);
isg::SActionOnSpace space_action_from_json(const json& j);

json action_to_json(const action::SAction& a);
action::SAction action_from_json(const json& j);

json algebra_to_json(const cstar::StarAlgebra& a);
cstar::StarAlgebra algebra_from_json(const json& j);

json fell_bundle_to_json(const cstar::FellBundleOverS& f);
cstar::FellBundleOverS fell_bundle_from_json(const json& j);

// dispatch on the "kind" field; returns a human summary line and performs
// full verification (throws AxiomError on defects)
std::string validate_fixture(const json& j);

std::string dump_canonical(const json& j);

}  // namespace io
}  // namespace peq

#endif
