#pragma once

// Shared helpers for the versioned JSON model envelope.

#include <string>
#include <string_view>

#include <json.hpp>

#include "defhyper/cograph.hpp"
#include "defhyper/features.hpp"
#include "defhyper/tensor.hpp"

namespace defhyper::detail {

using nlohmann::json;

json matrix_to_json(const Matrix& m);
// Throws ShapeError when the stored shape differs from the expected one.
void matrix_from_json(const json& j, Matrix& into, const std::string& name);

json graph_to_json_value(const CooccurrenceGraph& g);
CooccurrenceGraph graph_from_json_value(const json& j);

json stats_to_json(const TrainStats& s);
TrainStats stats_from_json(const json& j);

// Parses text and checks the version field. Throws CorruptFileError or
// VersionError.
json parse_envelope(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace defhyper::detail
