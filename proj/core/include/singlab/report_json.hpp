#pragma once

// JSON serialization of every report type. Keys come out sorted, and
// non-finite numbers are written as null.

#include <string>

#include <json.hpp>

#include "singlab/measure_lab.hpp"
#include "singlab/singularity_metrics.hpp"
#include "singlab/topology.hpp"

namespace singlab {

using Json = nlohmann::json;

void to_json(Json& j, const WindingReport& r);
void to_json(Json& j, const LocalizerBox& b);
void to_json(Json& j, const LocalizerResult& r);
void to_json(Json& j, const DistanceResult& r);
void to_json(Json& j, const OscillationProfile& p);
void to_json(Json& j, const DerivativeEntry& e);
void to_json(Json& j, const DerivativeProfile& p);
void to_json(Json& j, const OscillatorArcCheck& c);
void to_json(Json& j, const DimensionEstimate& e);
void to_json(Json& j, const TubeReport& r);
void to_json(Json& j, const TailFit& f);
void to_json(Json& j, const TradeoffEntry& e);
void to_json(Json& j, const TradeoffReport& r);

// The CDF report without its (long) distance list, which goes to CSV.
Json cdf_summary(const CdfReport& r);

// {"config": config, "result": result}, two-space indented, trailing newline.
std::string render_report(const Json& config, const Json& result);

}  // namespace singlab
