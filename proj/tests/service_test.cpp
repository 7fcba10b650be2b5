#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "patternlab/curve.hpp"
#include "patternlab/grid.hpp"
#include "patternlab/presets.hpp"
#include "patternlab/serialize.hpp"
#include "patternlab/service.hpp"

namespace patternlab {
namespace {

using nlohmann::json;

json body_of(const HttpReply& reply) { return json::parse(reply.body); }

TEST(Service, PresetsCatalog) {
  const HttpReply reply = handle_request("GET", "/api/presets", "");
  ASSERT_EQ(reply.status, 200);
  const json body = body_of(reply);
  ASSERT_EQ(body["presets"].size(), 2u);
  for (const json& entry : body["presets"]) {
    const Scenario s = scenario_from_json(entry["scenario"].dump());
    EXPECT_EQ(s, *preset_by_name(entry["name"].get<std::string>()));
  }
  EXPECT_EQ(body["presets"][0]["name"], "grokking");
  EXPECT_FALSE(body["presets"][0]["scenario"]["preferred"].is_null());
}

TEST(Service, CurveForPresetMatchesLibrary) {
  const HttpReply reply = handle_request("POST", "/api/curve", R"({"preset": "grokking"})");
  ASSERT_EQ(reply.status, 200) << reply.body;
  const json body = body_of(reply);
  const Curve expected = curve(grokking_preset(), GridSpec::parse(kDefaultGrid).values());
  EXPECT_EQ(body["curve"]["t"].get<std::vector<double>>(), expected.grid);
  EXPECT_EQ(body["curve"]["train_acc"].get<std::vector<double>>(), expected.train);
  EXPECT_EQ(body["curve"]["test_acc"].get<std::vector<double>>(), expected.test);
  EXPECT_EQ(scenario_from_json(body["scenario"].dump()), grokking_preset());
  EXPECT_EQ(body["grid"], GridSpec::parse(kDefaultGrid).to_string());
  EXPECT_EQ(body["axis"], "time");
  EXPECT_EQ(body["model_version"], std::string(kModelVersion));
  EXPECT_TRUE(body.contains("timing_ms"));
}

TEST(Service, CurveEchoesResolvedScenarioDefaults) {
  const HttpReply reply = handle_request(
      "POST", "/api/curve",
      R"({"scenario": {"patterns": [{"gamma": 1, "alpha": 1, "b": 2, "g": 0.5}]}, "grid": "lin:0:10:5", "axis": "capacity"})");
  ASSERT_EQ(reply.status, 200) << reply.body;
  const json body = body_of(reply);
  EXPECT_EQ(body["scenario"]["baseline"], 0.0);
  EXPECT_TRUE(body["scenario"]["preferred"].is_null());
  EXPECT_EQ(body["curve"]["t"].size(), 5u);
  EXPECT_EQ(body["curve"]["axis"], "capacity");
}

TEST(Service, ValidationErrorsNameFields) {
  HttpReply reply = handle_request(
      "POST", "/api/curve", R"({"scenario": {"patterns": [{"gamma": 1.5, "alpha": 1, "b": 2, "g": 0.5}]}})");
  EXPECT_EQ(reply.status, 400);
  json body = body_of(reply);
  EXPECT_EQ(body["field"], "scenario.patterns[0].gamma");
  EXPECT_EQ(body["code"], "validation_error");
  EXPECT_TRUE(body.contains("message"));

  reply = handle_request("POST", "/api/curve", R"({"preset": "grokking", "grid": "log:0:1:3"})");
  EXPECT_EQ(reply.status, 400);
  EXPECT_EQ(body_of(reply)["field"], "grid");

  reply = handle_request("POST", "/api/curve", R"({"preset": "grokking", "grid": "lin:0:1:10001"})");
  EXPECT_EQ(reply.status, 400);
  EXPECT_EQ(body_of(reply)["field"], "grid");

  reply = handle_request("POST", "/api/curve", R"({"preset": "nope"})");
  EXPECT_EQ(reply.status, 400);
  EXPECT_EQ(body_of(reply)["field"], "preset");

  reply = handle_request("POST", "/api/curve", R"({"preset": "grokking", "colour": 1})");
  EXPECT_EQ(reply.status, 400);
  EXPECT_EQ(body_of(reply)["field"], "colour");

  EXPECT_EQ(handle_request("POST", "/api/curve", "{oops").status, 400);
  EXPECT_EQ(handle_request("POST", "/api/curve", "{}").status, 400);
  EXPECT_EQ(handle_request("GET", "/api/nothing", "").status, 404);
  EXPECT_EQ(handle_request("GET", "/api/curve", "").status, 405);
}

TEST(Service, CapBreachSuggestsMonteCarlo) {
  json scenario = {{"patterns", json::array()}};
  for (int i = 0; i < 21; ++i) scenario["patterns"].push_back({{"gamma", 0.5}, {"alpha", 1}, {"b", 1}, {"g", 0.5}});
  json request = {{"scenario", scenario}, {"grid", "lin:0:2:3"}};
  HttpReply reply = handle_request("POST", "/api/curve", request.dump());
  EXPECT_EQ(reply.status, 422);
  EXPECT_NE(body_of(reply)["message"].get<std::string>().find("Monte Carlo"), std::string::npos);

  request["mc"] = {{"samples", 500}, {"seed", 3}};
  reply = handle_request("POST", "/api/curve", request.dump());
  ASSERT_EQ(reply.status, 200) << reply.body;
  EXPECT_EQ(body_of(reply)["curve"]["mc_samples"], 500);
}

TEST(Service, InterpolateEndpoints) {
  const json zero = body_of(handle_request("POST", "/api/interpolate", R"({"lambda": 0})"));
  const json one = body_of(handle_request("POST", "/api/interpolate", R"({"lambda": 1})"));
  const json half = body_of(handle_request("POST", "/api/interpolate", R"({"lambda": 0.5})"));
  EXPECT_EQ(scenario_from_json(zero["scenario"].dump()), double_descent_preset());
  EXPECT_EQ(scenario_from_json(one["scenario"].dump()), grokking_preset());
  for (std::size_t i = 0; i < 3; ++i) {
    for (const char* key : {"alpha", "b", "g"}) {
      EXPECT_EQ(half["scenario"]["patterns"][i][key], zero["scenario"]["patterns"][i][key]);
      EXPECT_EQ(half["scenario"]["patterns"][i][key], one["scenario"]["patterns"][i][key]);
    }
  }
  const json as_curve = body_of(handle_request(
      "POST", "/api/curve", json{{"scenario", half["scenario"]}}.dump()));
  EXPECT_EQ(as_curve["curve"]["test_acc"], half["curve"]["test_acc"]);

  const HttpReply bad = handle_request("POST", "/api/interpolate", R"({"lambda": 1.5})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(body_of(bad)["field"], "lambda");
}

TEST(Service, StatelessAcrossRequests) {
  const std::string request = R"({"preset": "double-descent", "grid": "log:1:100:20"})";
  const json first = body_of(handle_request("POST", "/api/curve", request));
  handle_request("POST", "/api/curve", R"({"preset": "grokking"})");
  handle_request("POST", "/api/interpolate", R"({"lambda": 0.3})");
  const json again = body_of(handle_request("POST", "/api/curve", request));
  EXPECT_EQ(first["curve"], again["curve"]);
}

TEST(ExplorerServer, ServesOverHttpWithCors) {
  ExplorerServer server;
  const std::uint16_t port = server.bind("127.0.0.1", 0);
  std::thread worker([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  httplib::Result presets;
  for (int attempt = 0; attempt < 50 && !presets; ++attempt) {
    presets = client.Get("/api/presets");
    if (!presets) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_TRUE(presets);
  EXPECT_EQ(presets->status, 200);
  EXPECT_EQ(presets->get_header_value("Access-Control-Allow-Origin"), "*");

  const auto curve_reply = client.Post("/api/curve", R"({"preset": "grokking"})", "application/json");
  ASSERT_TRUE(curve_reply);
  EXPECT_EQ(curve_reply->status, 200);
  const json via_http = json::parse(curve_reply->body);
  const json direct = body_of(handle_request("POST", "/api/curve", R"({"preset": "grokking"})"));
  EXPECT_EQ(via_http["curve"], direct["curve"]);

  const auto bad = client.Post("/api/interpolate", R"({"lambda": -1})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  const auto preflight = client.Options("/api/curve");
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);

  server.stop();
  worker.join();
}

}  // namespace
}  // namespace patternlab
