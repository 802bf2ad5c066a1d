#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cdbundle/series.hpp"

namespace cdbundle::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cdbundle/1";

// Pretty-printed with two-space indent; floats at 17 significant digits, -0 written as 0.
std::string write_json(const Json& doc);

// %.17g; non-finite values become null.
std::string format_number(double v);

Json complex_json(cplx v);
// Row-major array of rows of {re, im} objects.
Json matrix_json(const ComplexMatrix& m);
Json real_array(const std::vector<double>& v);

Json report_skeleton(const std::string& command, const std::vector<std::string>& args);

}  // namespace cdbundle::cli
