#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "blockavg/averaging_operator.hpp"
#include "blockavg/constants.hpp"
#include "blockavg/partition.hpp"

namespace blockavg {

/// Parses the config JSON document. Unknown fields are rejected with a
/// diagnostic naming the field; schema errors throw errc::bad_config.
AveragingConfig parse_config(const nlohmann::json& doc);
AveragingConfig load_config(const std::filesystem::path& path);

/// Short deterministic identifier describing a config, used in reports.
std::string config_id(const AveragingConfig& config);

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const VerificationReport& report);

/// Floats formatted with 17 significant digits for round-trip fidelity.
std::string format_float(double value);

} // namespace blockavg
