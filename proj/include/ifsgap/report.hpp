#pragma once

#include <json.hpp>

#include "ifsgap/analysis.hpp"
#include "ifsgap/metgaps.hpp"
#include "ifsgap/model.hpp"
#include "ifsgap/symgaps.hpp"

// JSON forms of the library's results. Rationals are written as exact "p/q" strings.
namespace ifsgap::report {

using nlohmann::json;

json rationals(std::span<const Rational> values);

json to_json(const model::Interval& iv);
json to_json(const model::Similarity1D& map);
json to_json(const model::GDInstance& g, const model::SeparationReport& r);
json to_json(const symgaps::GapEnumeration& e);
json to_json(const metgaps::KappaProfile& p);
json to_json(const metgaps::MetricGaps& m);
json to_json(const analysis::RatioReport& r);
json to_json(const analysis::AlgdepReport& r);
json to_json(const analysis::CommensurabilityReport& r);
json to_json(const analysis::SandwichReport& r);
json to_json(const analysis::YzxReport& r);
json to_json(const analysis::PruneReport& r);

}  // namespace ifsgap::report
