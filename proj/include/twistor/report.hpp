#pragma once

// Report documents. A report is a JSON tree
//   {command, config_echo, conventions, per_point[], status, summaries,
//    tool_version}
// written with sorted keys and every float at 17 significant digits, so
// equal runs give byte-identical files.

#include <string>

#include "json.hpp"
#include "twistor/curvature.hpp"
#include "twistor/taming.hpp"

namespace twistor {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "twistor-toolkit 1.0.0";

enum class ReportFormat { Json, Markdown };
std::string to_string(ReportFormat f);
// Throws ArgumentError for anything but "json" or "markdown".
ReportFormat report_format_from_string(const std::string& s);

// "%.17g"; non-finite values become the strings "inf", "-inf", "nan".
std::string format_double(double v);

// Sorted keys, two-space indent, trailing newline.
std::string to_json_text(const Json& doc);
// Tables of the same numbers at 6 significant digits.
std::string to_markdown(const Json& doc);
std::string emit_report(const Json& doc, ReportFormat format);

Json json_number(double v);
Json json_point(const Point& x);
Json json_matrix(const Mat3& m);  // rows
Json json_vector(const Vec3& v);
Json json_blocks(const CurvatureBlocks& b);
Json json_verdict(const TamingVerdict& v);

}  // namespace twistor
