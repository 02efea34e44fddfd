#include <gtest/gtest.h>

#include <cstdlib>

#include "kgdf/gen/backend.hpp"
#include "kgdf/text.hpp"
#include "test_util.hpp"

namespace kgdf::gen {
namespace {

TEST(PromptHash, IsSha256OfPromptBytes) {
  // FIPS 180-2 test vector
  EXPECT_EQ(prompt_hash("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_NE(prompt_hash("abc"), prompt_hash("abc "));
}

TEST(ScriptedBackend, ReplaysBySlot) {
  ScriptedBackend backend(ScriptedBackend::FixtureTable{{prompt_hash("hello"), {"one", "two"}}}, "unit");
  EXPECT_EQ(backend.complete("hello", 0), "one");
  EXPECT_EQ(backend.complete("hello", 1), "two");
  EXPECT_EQ(backend.descriptor(), "scripted:unit");
  EXPECT_EQ(backend.request_count(), 2u);
}

TEST(ScriptedBackend, FixtureMissing) {
  ScriptedBackend backend(ScriptedBackend::FixtureTable{{prompt_hash("hello"), {"one"}}});
  EXPECT_ERRC(backend.complete("hello!", 0), Errc::FixtureMissing);
  EXPECT_ERRC(backend.complete("hello", 1), Errc::FixtureMissing);
}

TEST(ScriptedBackend, FixtureFile) {
  testing::TempDir dir;
  write_file(dir / "f.json", R"({")" + prompt_hash("p") + R"(": ["a", "b"]})");
  auto backend = ScriptedBackend::from_file(dir / "f.json");
  EXPECT_EQ(backend.complete("p", 1), "b");
  EXPECT_ERRC(ScriptedBackend::parse_fixtures(nlohmann::json::parse(R"({"x": "not a list"})")), Errc::InvalidConfig);
  EXPECT_ERRC(ScriptedBackend::parse_fixtures(nlohmann::json::parse("[1, 2]")), Errc::InvalidConfig);
}

TEST(ChatCodec, RequestShape) {
  auto j = chat_request("some-model", 0.7, "Say hi", 3);
  EXPECT_EQ(j["model"], "some-model");
  EXPECT_DOUBLE_EQ(j["temperature"].get<double>(), 0.7);
  EXPECT_EQ(j["n"], 3);
  ASSERT_EQ(j["messages"].size(), 1u);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "Say hi");
}

TEST(ChatCodec, ResponseParsing) {
  auto body = nlohmann::json::parse(
      R"({"id":"x","choices":[{"index":0,"message":{"role":"assistant","content":"first"}},
                              {"index":1,"message":{"role":"assistant","content":"second"}}]})");
  EXPECT_EQ(parse_chat_response(body), (std::vector<std::string>{"first", "second"}));
  EXPECT_ERRC(parse_chat_response(nlohmann::json::parse(R"({"error":"quota"})")), Errc::BackendUnavailable);
  EXPECT_ERRC(parse_chat_response(nlohmann::json::parse(R"({"choices":[{"message":{}}]})")),
              Errc::BackendUnavailable);
}

TEST(HttpChatBackend, UnreachableEndpointIsBackendUnavailable) {
  // port 9 on loopback: nothing listens, the connection is refused immediately
  HttpChatBackend backend({"http://127.0.0.1:9/v1/chat/completions", "m", 0.0, "", 2});
  EXPECT_ERRC(backend.complete("hi", 0), Errc::BackendUnavailable);
}

TEST(BackendConfig, Parsing) {
  auto scripted = backend_config_from_json(
      "replay", nlohmann::json::parse(R"({"kind":"scripted","fixtures":"fx/a.json"})"), "/base");
  EXPECT_EQ(scripted.kind, BackendKind::Scripted);
  EXPECT_EQ(scripted.fixture_file, std::filesystem::path("/base/fx/a.json"));

  auto http = backend_config_from_json(
      "live",
      nlohmann::json::parse(
          R"({"kind":"http-chat","endpoint":"https://h/v1/chat/completions","model":"m","temperature":0.9,"api_key_env":"K"})"),
      "/base");
  EXPECT_EQ(http.kind, BackendKind::HttpChat);
  EXPECT_EQ(http.http.model, "m");
  EXPECT_DOUBLE_EQ(http.http.temperature, 0.9);
  EXPECT_EQ(http.http.api_key_env, "K");

  EXPECT_ERRC(backend_config_from_json("x", nlohmann::json::parse(R"({"kind":"http-chat","endpoint":"e","model":"m"})"),
                                       "/"),
              Errc::InvalidConfig);
  EXPECT_ERRC(backend_config_from_json("x", nlohmann::json::parse(R"({"kind":"scripted"})"), "/"),
              Errc::InvalidConfig);
  EXPECT_ERRC(backend_config_from_json("x", nlohmann::json::parse(R"({"kind":"oracle"})"), "/"), Errc::InvalidConfig);
}

}  // namespace
}  // namespace kgdf::gen
