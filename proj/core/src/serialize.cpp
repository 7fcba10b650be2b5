#include "patternlab/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "csv.hpp"
#include "json_codec.hpp"
#include "patternlab/errors.hpp"

namespace patternlab {

using nlohmann::json;

namespace detail {
namespace {

double require_number(const json& object, const char* key) {
  if (!object.contains(key)) throw ValidationError(key, "is required");
  const json& value = object.at(key);
  if (!value.is_number()) throw ValidationError(key, "must be a number");
  return value.get<double>();
}

Pattern pattern_from(const json& value) {
  if (!value.is_object()) throw ValidationError("", "pattern must be an object");
  for (const auto& [key, _] : value.items()) {
    if (key != "gamma" && key != "alpha" && key != "b" && key != "g") {
      throw ValidationError(key, "unknown pattern field");
    }
  }
  return Pattern(require_number(value, "gamma"), require_number(value, "alpha"),
                 require_number(value, "b"), require_number(value, "g"));
}

}  // namespace

json scenario_json(const Scenario& scenario) {
  json patterns = json::array();
  for (const Pattern& p : scenario.patterns()) {
    patterns.push_back({{"gamma", p.gamma()}, {"alpha", p.alpha()}, {"b", p.b()}, {"g", p.g()}});
  }
  json out = {{"patterns", std::move(patterns)}, {"baseline", scenario.baseline()}};
  out["preferred"] = scenario.preferred() ? json(*scenario.preferred()) : json(nullptr);
  return out;
}

Scenario scenario_from(const json& value) {
  if (!value.is_object()) throw ValidationError("scenario", "must be a JSON object");
  for (const auto& [key, _] : value.items()) {
    if (key != "patterns" && key != "preferred" && key != "baseline") {
      throw ValidationError(key, "unknown scenario field");
    }
  }
  if (!value.contains("patterns") || !value.at("patterns").is_array()) {
    throw ValidationError("patterns", "must be an array of patterns");
  }
  std::vector<Pattern> patterns;
  const json& list = value.at("patterns");
  for (std::size_t i = 0; i < list.size(); ++i) {
    try {
      patterns.push_back(pattern_from(list[i]));
    } catch (const ValidationError& e) {
      throw e.nested("patterns[" + std::to_string(i) + "]");
    }
  }
  std::optional<std::size_t> preferred;
  if (value.contains("preferred") && !value.at("preferred").is_null()) {
    const json& p = value.at("preferred");
    if (!p.is_number_integer() || p.get<long long>() < 0) {
      throw ValidationError("preferred", "must be a nonnegative integer index or null");
    }
    preferred = p.get<std::size_t>();
  }
  double baseline = 0.0;
  if (value.contains("baseline")) {
    if (!value.at("baseline").is_number()) throw ValidationError("baseline", "must be a number");
    baseline = value.at("baseline").get<double>();
  }
  return Scenario(std::move(patterns), preferred, baseline);
}

json curve_json(const Curve& curve) {
  return {{"t", curve.grid},
          {"train_acc", curve.train},
          {"test_acc", curve.test},
          {"axis", to_string(curve.axis)},
          {"source", curve.source},
          {"mc_samples", curve.mc_samples}};
}

}  // namespace detail

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
}

void append_real(std::string& out, double value) {
  char buffer[32];
  const int len = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  out.append(buffer, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

double field_real(std::string_view text, std::size_t line) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("csv", "line " + std::to_string(line) + ": invalid number '" +
                                     std::string(text) + "'");
  }
  return value;
}

}  // namespace

Scenario scenario_from_json(std::string_view text) { return detail::scenario_from(parse_json(text)); }

std::string scenario_to_json(const Scenario& scenario, int indent) {
  return detail::scenario_json(scenario).dump(indent) + "\n";
}

std::string curve_to_csv(const Curve& curve) {
  std::string out = "t,train_acc,test_acc\n";
  out.reserve(out.size() + curve.size() * 64);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    append_real(out, curve.grid[i]);
    out += ',';
    append_real(out, curve.train[i]);
    out += ',';
    append_real(out, curve.test[i]);
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> detail::read_numeric_csv(std::string_view text,
                                                  std::span<const std::string_view> required,
                                                  std::size_t optional_columns) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv", "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < required.size() || header.size() > required.size() + optional_columns) {
    throw ValidationError("csv", "unexpected header '" + line + "'");
  }
  for (std::size_t c = 0; c < required.size(); ++c) {
    if (header[c] != required[c]) {
      throw ValidationError("csv", "column " + std::to_string(c) + " must be '" +
                                       std::string(required[c]) + "'");
    }
  }
  std::vector<std::vector<double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ValidationError("csv", "line " + std::to_string(number) + ": expected " +
                                       std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    for (auto f : fields) row.push_back(field_real(f, number));
    rows.push_back(std::move(row));
  }
  return rows;
}

Curve curve_from_csv(std::string_view text, Axis axis) {
  static constexpr std::string_view kColumns[] = {"t", "train_acc", "test_acc"};
  Curve out;
  out.axis = axis;
  for (const auto& row : detail::read_numeric_csv(text, kColumns, 0)) {
    out.grid.push_back(row[0]);
    out.train.push_back(row[1]);
    out.test.push_back(row[2]);
  }
  out.validate();
  return out;
}

std::string curve_to_json(const Curve& curve, int indent) {
  return detail::curve_json(curve).dump(indent) + "\n";
}

Curve curve_from_json(std::string_view text) {
  const json value = parse_json(text);
  Curve out;
  try {
    out.grid = value.at("t").get<std::vector<double>>();
    out.train = value.at("train_acc").get<std::vector<double>>();
    out.test = value.at("test_acc").get<std::vector<double>>();
    out.axis = parse_axis(value.value("axis", "time"));
    out.source = value.value("source", "pattern-core");
    out.mc_samples = value.value("mc_samples", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ValidationError("curve", e.what());
  }
  out.validate();
  return out;
}

std::string curve_metadata_json(const Curve& curve, const Scenario& scenario, std::uint64_t seed) {
  json meta = {{"axis", to_string(curve.axis)},
               {"source", curve.source},
               {"points", curve.size()},
               {"mc_samples", curve.mc_samples},
               {"seed", seed},
               {"columns", {"t", "train_acc", "test_acc"}},
               {"scenario", detail::scenario_json(scenario)}};
  return meta.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device entropy;
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(entropy());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace patternlab
