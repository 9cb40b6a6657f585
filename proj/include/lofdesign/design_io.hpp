#pragma once

#include <functional>
#include "json.hpp"
#include <optional>
#include <string>

#include "lofdesign/measures.hpp"
#include "lofdesign/optimal.hpp"
#include "lofdesign/verify.hpp"

namespace lofd::io {

/// Design document:
///
///   { "k": 3,                                   (optional)
///     "atoms": [ {"t": -1, "p": 0.25}, ... ],
///     "ac": { "scale": 0.5,
///             "weight": "uniform" | "arcsine" | {"grid": [[x, v], ...]} } }
///
/// Unknown fields are ignored, so construction and verification reports
/// (which extend this document) load as designs unchanged.
nlohmann::json weight_to_json(const WeightFunction& v);
WeightFunction weight_from_json(const nlohmann::json& doc);

nlohmann::json design_to_json(const DesignMeasure& xi, std::optional<int> k = std::nullopt);

/// Masses must sum to 1 within 1e-9; they are then rescaled to sum exactly.
DesignMeasure design_from_json(const nlohmann::json& doc);

nlohmann::json construction_to_json(const ConstructionReport& report);
nlohmann::json report_to_json(const OptimalityReport& report);

nlohmann::json read_json_file(const std::string& path);

/// Parses two whitespace/comma separated columns (x, v(x)); '#' starts a
/// comment. The samples are renormalized; `warn` is called when the
/// renormalization factor differs from 1 by more than 1e-3.
WeightFunction read_weight_grid(const std::string& path,
                                const std::function<void(const std::string&)>& warn = {});

/// "uniform", "arcsine" or "grid:<path>".
WeightFunction parse_weight_spec(const std::string& spec,
                                 const std::function<void(const std::string&)>& warn = {});

}  // namespace lofd::io
