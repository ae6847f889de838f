#include "json_io.hpp"

#include <fstream>
#include <sstream>

#include "defhyper/error.hpp"
#include "defhyper/model.hpp"

namespace defhyper::detail {

json matrix_to_json(const Matrix& m) {
  json j;
  j["shape"] = {m.rows, m.cols};
  j["data"] = m.data;
  return j;
}

void matrix_from_json(const json& j, Matrix& into, const std::string& name) {
  const auto& shape = j.at("shape");
  const auto rows = shape.at(0).get<std::size_t>();
  const auto cols = shape.at(1).get<std::size_t>();
  if (rows != into.rows || cols != into.cols) {
    throw ShapeError("weight '" + name + "' has shape [" + std::to_string(rows) + "," +
                     std::to_string(cols) + "], expected [" + std::to_string(into.rows) + "," +
                     std::to_string(into.cols) + "]");
  }
  const auto& data = j.at("data");
  if (data.size() != rows * cols) {
    throw ShapeError("weight '" + name + "' holds " + std::to_string(data.size()) + " values");
  }
  for (std::size_t k = 0; k < data.size(); ++k) into.data[k] = data[k].get<double>();
}

json graph_to_json_value(const CooccurrenceGraph& g) { return json::parse(graph_to_json(g)); }

CooccurrenceGraph graph_from_json_value(const json& j) { return graph_from_json(j.dump()); }

json stats_to_json(const TrainStats& s) {
  json j;
  j["max_count"] = s.max_count;
  j["frequency"] = s.frequency;
  return j;
}

TrainStats stats_from_json(const json& j) {
  TrainStats s;
  s.max_count = j.at("max_count").get<std::int64_t>();
  s.frequency = j.at("frequency").get<FrequencyMap>();
  return s;
}

json parse_envelope(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CorruptFileError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer()) {
    throw CorruptFileError("model file has no version field");
  }
  const int version = j["version"].get<int>();
  if (version != kModelFormatVersion) {
    throw VersionError("model file version " + std::to_string(version) + " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace defhyper::detail
