#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dikin/model.hpp"

namespace dikin {

using Json = nlohmann::ordered_json;

/// %.<digits>g formatting; 17 digits round-trips every double.
std::string format_double(double value, int digits = 17);

/// Canonical text form: two-space indentation, numeric arrays and matrices
/// on one line, floating-point values at 17 significant digits, non-finite
/// values as null, trailing newline.
std::string write_json(const Json& j);

Json to_json(const VectorXd& v);
Json to_json(const MatrixXd& m);

Json instance_to_json(const ProblemInstance& problem);
/// Throws Error(ParseError) for missing fields, wrong types, ragged or
/// mismatched shapes inside a constraint.
ProblemInstance instance_from_json(const nlohmann::json& j);

/// Parse instance text. Syntax errors carry line and column in the message.
ProblemInstance parse_instance(std::string_view text);
ProblemInstance read_instance(const std::filesystem::path& path);

std::string serialize_instance(const ProblemInstance& problem);
void write_instance(const ProblemInstance& problem,
                    const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the canonical serialization.
std::string instance_digest(const ProblemInstance& problem);

}  // namespace dikin
