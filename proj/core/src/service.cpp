#include "patternlab/service.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>

#include "httplib.h"
#include "json_codec.hpp"
#include "patternlab/curve.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/grid.hpp"
#include "patternlab/presets.hpp"

namespace patternlab {
namespace {

using nlohmann::json;

/// Error carrying the HTTP status and optional field path.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  std::string field;
};

HttpReply error_reply(const ApiError& error) {
  json body = {{"code", error.code}, {"message", error.message}};
  if (!error.field.empty()) body["field"] = error.field;
  return {error.status, body.dump()};
}

ApiError invalid(const ValidationError& e, const std::string& prefix = "") {
  const std::string field =
      prefix.empty() ? e.field() : (e.field().empty() ? prefix : e.nested(prefix).field());
  return {400, "validation_error", e.what(), field};
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    json value = json::parse(body);
    if (!value.is_object()) throw ApiError{400, "invalid_request", "body must be a JSON object", ""};
    return value;
  } catch (const json::parse_error& e) {
    throw ApiError{400, "invalid_request", std::string("malformed JSON: ") + e.what(), ""};
  }
}

void reject_unknown(const json& body, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : body.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ApiError{400, "validation_error", "unknown field '" + key + "'", key};
    }
  }
}

std::string string_field(const json& body, const char* key, std::string_view fallback) {
  if (!body.contains(key)) return std::string(fallback);
  if (!body.at(key).is_string()) throw ApiError{400, "validation_error", std::string(key) + " must be a string", key};
  return body.at(key).get<std::string>();
}

struct CurveSettings {
  GridSpec grid;
  Axis axis = Axis::time;
  CurveOptions options;
  bool mc_requested = false;
};

CurveSettings read_settings(const json& body) {
  CurveSettings s;
  try {
    s.grid = GridSpec::parse(string_field(body, "grid", kDefaultGrid));
    s.axis = parse_axis(string_field(body, "axis", "time"));
  } catch (const ValidationError& e) {
    throw invalid(e);
  }
  if (s.grid.count > kMaxServiceGridCount) {
    throw ApiError{400, "validation_error",
                   "grid count must be at most " + std::to_string(kMaxServiceGridCount), "grid"};
  }
  s.options.mc_fallback = false;
  if (body.contains("mc") && !body.at("mc").is_null()) {
    const json& mc = body.at("mc");
    if (!mc.is_object()) throw ApiError{400, "validation_error", "mc must be an object", "mc"};
    reject_unknown(mc, {"samples", "seed"});
    s.mc_requested = true;
    s.options.mc_fallback = true;
    if (mc.contains("samples")) {
      const json& v = mc.at("samples");
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1 || v.get<std::uint64_t>() > 1'000'000) {
        throw ApiError{400, "validation_error", "samples must be an integer in [1, 1000000]", "mc.samples"};
      }
      s.options.mc_samples = v.get<std::uint64_t>();
    }
    if (mc.contains("seed")) {
      if (!mc.at("seed").is_number_unsigned()) {
        throw ApiError{400, "validation_error", "seed must be an unsigned integer", "mc.seed"};
      }
      s.options.seed = mc.at("seed").get<std::uint64_t>();
    }
  }
  return s;
}

json curve_response(const Scenario& scenario, const CurveSettings& settings) {
  if (scenario.size() > kExactEnumerationCap && !settings.mc_requested) {
    throw ApiError{422, "cap_exceeded",
                   CapExceededError(scenario.size(), kExactEnumerationCap).what() +
                       std::string("; resend with an \"mc\" object to use Monte Carlo mode"),
                   "scenario.patterns"};
  }
  const auto start = std::chrono::steady_clock::now();
  const Curve result = curve(scenario, settings.grid.values(), settings.axis, settings.options);
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  json out = {{"curve", detail::curve_json(result)},
              {"scenario", detail::scenario_json(scenario)},
              {"grid", settings.grid.to_string()},
              {"axis", to_string(settings.axis)},
              {"timing_ms", elapsed.count()},
              {"model_version", kModelVersion},
              {"preset_version", kPresetVersion}};
  if (settings.mc_requested) {
    out["mc"] = {{"samples", settings.options.mc_samples}, {"seed", settings.options.seed}};
  }
  return out;
}

json presets() {
  json list = json::array();
  for (std::string_view name : preset_names()) {
    list.push_back({{"name", name}, {"scenario", detail::scenario_json(*preset_by_name(name))}});
  }
  return {{"presets", list}, {"preset_version", kPresetVersion}, {"model_version", kModelVersion}};
}

json post_curve(const json& body) {
  reject_unknown(body, {"scenario", "preset", "grid", "axis", "mc"});
  const bool has_scenario = body.contains("scenario");
  const bool has_preset = body.contains("preset");
  if (has_scenario == has_preset) {
    throw ApiError{400, "validation_error", "provide exactly one of 'scenario' or 'preset'",
                   has_scenario ? "preset" : "scenario"};
  }
  std::optional<Scenario> scenario;
  if (has_preset) {
    const std::string name = string_field(body, "preset", "");
    scenario = preset_by_name(name);
    if (!scenario) throw ApiError{400, "validation_error", "unknown preset '" + name + "'", "preset"};
  } else {
    try {
      scenario = detail::scenario_from(body.at("scenario"));
    } catch (const ValidationError& e) {
      throw invalid(e, "scenario");
    }
  }
  return curve_response(*scenario, read_settings(body));
}

json post_interpolate(const json& body) {
  reject_unknown(body, {"lambda", "grid", "axis"});
  if (!body.contains("lambda") || !body.at("lambda").is_number()) {
    throw ApiError{400, "validation_error", "lambda must be a number in [0, 1]", "lambda"};
  }
  const double lambda = body.at("lambda").get<double>();
  std::optional<Scenario> scenario;
  try {
    scenario = interpolate(lambda);
  } catch (const ValidationError& e) {
    throw invalid(e);
  }
  json out = curve_response(*scenario, read_settings(body));
  out["lambda"] = lambda;
  return out;
}

}  // namespace

HttpReply handle_request(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (path == "/api/presets") {
      if (method != "GET") throw ApiError{405, "method_not_allowed", "use GET", ""};
      return {200, presets().dump()};
    }
    if (path == "/api/curve" || path == "/api/interpolate") {
      if (method != "POST") throw ApiError{405, "method_not_allowed", "use POST", ""};
      const json request = parse_body(body);
      return {200, (path == "/api/curve" ? post_curve(request) : post_interpolate(request)).dump()};
    }
    throw ApiError{404, "not_found", "no route for " + std::string(path), ""};
  } catch (const ApiError& e) {
    return error_reply(e);
  } catch (const ValidationError& e) {
    return error_reply(invalid(e));
  } catch (const std::exception& e) {
    return error_reply({500, "internal_error", e.what(), ""});
  }
}

struct ExplorerServer::Impl {
  httplib::Server server;
};

ExplorerServer::ExplorerServer() : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  auto forward = [](const httplib::Request& req, httplib::Response& res) {
    const HttpReply reply = handle_request(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
}

ExplorerServer::~ExplorerServer() = default;

std::uint16_t ExplorerServer::bind(const std::string& host, std::uint16_t port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return static_cast<std::uint16_t>(bound);
}

void ExplorerServer::listen() { impl_->server.listen_after_bind(); }

void ExplorerServer::stop() { impl_->server.stop(); }

}  // namespace patternlab
