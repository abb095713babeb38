#pragma once

#include <string>

#include "specmerge/geometry.hpp"
#include "specmerge/merge.hpp"

namespace specmerge {

/// Locale-independent shortest-free formatting: 17 significant digits.
/// Infinities become the strings "inf" / "-inf", NaN becomes null.
std::string format_json_number(double value);

/// Report as a JSON object with keys in sorted order, newline-terminated.
std::string report_to_json(const ReductionReport& report);

/// Inverse of report_to_json. Throws std::invalid_argument on missing or
/// mistyped fields.
ReductionReport report_from_json(const std::string& text);

/// Geometry fields plus the index as JSON with sorted keys. theta_wf is
/// null when undefined; `degrees` converts it from radians.
std::string geometry_to_json(const SpectralIndex& index, const WaveGeometry& geometry, bool degrees = false);

}  // namespace specmerge
