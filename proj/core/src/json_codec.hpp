#pragma once

#include "json.hpp"
#include "patternlab/curve.hpp"
#include "patternlab/scenario.hpp"

namespace patternlab::detail {

nlohmann::json scenario_json(const Scenario& scenario);
/// Throws ValidationError with a field path such as `patterns[2].alpha`.
Scenario scenario_from(const nlohmann::json& value);

nlohmann::json curve_json(const Curve& curve);

}  // namespace patternlab::detail
