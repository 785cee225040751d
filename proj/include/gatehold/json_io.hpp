#pragma once

#include "gatehold/calibration.hpp"
#include "gatehold/experiments.hpp"
#include "gatehold/overlap.hpp"
#include "gatehold/simulation.hpp"
#include "gatehold/tabu.hpp"
#include "gatehold/takeoff.hpp"

#include <json.hpp>

#include <filesystem>

namespace gatehold {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const TakeoffParams& p);
TakeoffParams takeoff_from_json(const Json& j);
Json to_json(const TaxiFit& t);
TaxiFit taxi_from_json(const Json& j);
Json to_json(const ThroughputCurve& c);
Json to_json(const CalibrationReport& r);
Json to_json(const OverlapValue& v);
Json to_json(const DisturbanceModel& d);
Json to_json(const SeparationStats& s);
Json to_json(const SimOutcome& metrics);
Json to_json(const Sweep& s);
Json to_json(const ComparisonReport& r);

/// Pretty-printed with "schema_version" set; trailing newline.
void write_json(const std::filesystem::path& path, Json j);
Json read_json(const std::filesystem::path& path);

}  // namespace gatehold
