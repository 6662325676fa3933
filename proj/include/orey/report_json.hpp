#pragma once

#include <json.hpp>

#include "orey/asymptotics.hpp"
#include "orey/conditions.hpp"
#include "orey/estimator.hpp"
#include "orey/montecarlo.hpp"
#include "orey/quadvar.hpp"

namespace orey {

// Non-finite numbers serialize as null.
nlohmann::json to_json(const AsymptoticCovariance& s);
nlohmann::json to_json(const EstimateResult& r);
nlohmann::json to_json(const CoefficientAggregates& a);
nlohmann::json to_json(const CoefficientSet& c);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const McReport& r);

}  // namespace orey
