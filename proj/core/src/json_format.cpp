#include "specmerge/json_format.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace specmerge {

namespace {

// Keys are emitted in sorted order, one per line.
std::string render_object(const std::map<std::string, std::string>& fields) {
    std::string out = "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : fields) {
        out += "  \"" + key + "\": " + value;
        out += ++i == fields.size() ? "\n" : ",\n";
    }
    out += "}\n";
    return out;
}

double number_field(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("report is missing \"") + key + "\"");
    const nlohmann::json& value = doc.at(key);
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        if (text == "inf") return std::numeric_limits<double>::infinity();
        if (text == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw std::invalid_argument(std::string("report field \"") + key + "\" is not a number");
}

}  // namespace

std::string format_json_number(double value) {
    if (std::isnan(value)) return "null";
    if (std::isinf(value)) return value > 0 ? "\"inf\"" : "\"-inf\"";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

std::string report_to_json(const ReductionReport& report) {
    return render_object({
        {"psnr_vs_full_db", format_json_number(report.psnr_vs_full_db)},
        {"reduction_ratio", format_json_number(report.reduction_ratio)},
        {"removed_energy", format_json_number(report.removed_energy)},
        {"retained_units", std::to_string(report.retained_units)},
        {"threshold_fraction", format_json_number(report.threshold_fraction)},
        {"threshold_value", format_json_number(report.threshold_value)},
        {"total_units", std::to_string(report.total_units)},
    });
}

ReductionReport report_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (!doc.is_object()) throw std::invalid_argument("report is not a JSON object");
    ReductionReport report;
    report.total_units = static_cast<std::uint64_t>(number_field(doc, "total_units"));
    report.retained_units = static_cast<std::uint64_t>(number_field(doc, "retained_units"));
    report.reduction_ratio = number_field(doc, "reduction_ratio");
    report.threshold_value = number_field(doc, "threshold_value");
    report.threshold_fraction = number_field(doc, "threshold_fraction");
    report.removed_energy = number_field(doc, "removed_energy");
    report.psnr_vs_full_db = number_field(doc, "psnr_vs_full_db");
    return report;
}

std::string geometry_to_json(const SpectralIndex& index, const WaveGeometry& geometry, bool degrees) {
    std::string theta = "null";
    if (geometry.theta_defined) {
        theta = format_json_number(degrees ? geometry.theta_wf * 180.0 / std::numbers::pi : geometry.theta_wf);
    }
    return render_object({
        {"cols", std::to_string(index.cols())},
        {"lambda_u", format_json_number(geometry.lambda_u)},
        {"lambda_v", format_json_number(geometry.lambda_v)},
        {"lambda_wf", format_json_number(geometry.lambda_wf)},
        {"omega_u", format_json_number(geometry.omega_u)},
        {"omega_v", format_json_number(geometry.omega_v)},
        {"omega_wf", format_json_number(geometry.omega_wf)},
        {"rows", std::to_string(index.rows())},
        {"theta_defined", geometry.theta_defined ? "true" : "false"},
        {"theta_units", degrees ? "\"degrees\"" : "\"radians\""},
        {"theta_wf", theta},
        {"u", std::to_string(index.u())},
        {"v", std::to_string(index.v())},
    });
}

}  // namespace specmerge
