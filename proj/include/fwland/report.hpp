#pragma once

#include "fwland/experiments.hpp"
#include "fwland/metastability.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fwland {

inline constexpr const char* kToolVersion = "0.1.0";

/// Report envelope: tool version, command, parameters, model digest, payload.
/// The timestamp is informational; everything else is a deterministic
/// function of (model bytes, command line, master seed).
nlohmann::json make_report(const std::string& command,
                           const nlohmann::json& parameters, const Model& model,
                           nlohmann::json payload, bool with_timestamp = true);

nlohmann::json validation_json(const Model& model, const ValidationReport& report);

/// Full landscape analysis: energies, heights, cycle tree, stability levels,
/// stable/metastable sets, and the requested level sets X_a.
nlohmann::json analysis_json(const Model& model, const Landscape& land,
                             const CycleTree& tree,
                             const std::vector<StabilityRecord>& records,
                             const MetaSets& meta);

nlohmann::json gates_json(const Model& model, const GateAnalysis& analysis);

nlohmann::json experiment_json(const ExperimentReport& report);

/// CSV text with the (beta, statistic, value, stderr) header.
std::string csv_text(const std::vector<std::array<std::string, 4>>& rows);

}  // namespace fwland
