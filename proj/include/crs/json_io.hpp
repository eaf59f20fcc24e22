#pragma once

#include <string>

#include "json.hpp"

#include "crs/classify.hpp"
#include "crs/group_table.hpp"
#include "crs/monoidal.hpp"
#include "crs/site.hpp"
#include "crs/subgroup.hpp"

namespace crs {

using Json = nlohmann::ordered_json;

Json morphism_to_json(const SiteMorphism& f);
SiteMorphism morphism_from_json(const Json& j);

// {"site":..., "max_level":..., "levels":[{"n":k,"order":m,"mul":[...]}],
//  "restriction":[...], "action":[...]}
// Levels above the dense cap carry their permutation-with-signs elements
// instead of a multiplication table.
Json crossed_group_to_json(const CrossedGroupTable& G);

Json verify_report_to_json(const VerifyReport& rep);
Json family_to_json(const SubgroupFamily& F);
Json table_report_to_json(const TableReport& rep);
Json goursat_analysis_to_json(const IntervalGoursatAnalysis& A);
Json presheaf_to_json(const PresheafTable& X);

}  // namespace crs
