#include "kgdf/gen/backend.hpp"

#include <httplib.h>

#include <cstdlib>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::gen {

std::string prompt_hash(const std::string& prompt) { return sha256_hex(prompt); }

ScriptedBackend::ScriptedBackend(FixtureTable fixtures, std::string name)
    : fixtures_(std::move(fixtures)), name_(std::move(name)) {}

ScriptedBackend::FixtureTable ScriptedBackend::parse_fixtures(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidConfig, "fixture file must hold a JSON object");
  FixtureTable table;
  for (const auto& [hash, list] : j.items()) {
    if (!list.is_array()) throw Error(Errc::InvalidConfig, "fixture " + hash + " is not a list");
    auto& out = table[hash];
    for (const auto& s : list) out.push_back(s.get<std::string>());
  }
  return table;
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path, std::string name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return ScriptedBackend(parse_fixtures(j), std::move(name));
}

std::string ScriptedBackend::complete(const std::string& prompt, std::size_t candidate) {
  count_request();
  const auto hash = prompt_hash(prompt);
  auto it = fixtures_.find(hash);
  if (it == fixtures_.end()) throw Error(Errc::FixtureMissing, "no fixture for prompt hash " + hash);
  if (candidate >= it->second.size())
    throw Error(Errc::FixtureMissing, "fixture " + hash + " has " + std::to_string(it->second.size()) +
                                          " entries, slot " + std::to_string(candidate) + " requested");
  return it->second[candidate];
}

nlohmann::json chat_request(const std::string& model, double temperature, const std::string& prompt, int n) {
  return nlohmann::json{{"model", model},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
                        {"n", n},
                        {"temperature", temperature}};
}

std::vector<std::string> parse_chat_response(const nlohmann::json& body) {
  try {
    std::vector<std::string> out;
    for (const auto& choice : body.at("choices")) {
      const auto& content = choice.at("message").at("content");
      out.push_back(content.is_null() ? std::string() : content.get<std::string>());
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BackendUnavailable, std::string("malformed chat response: ") + e.what());
  }
}

HttpChatBackend::HttpChatBackend(HttpChatSettings settings) : settings_(std::move(settings)) {
  const auto scheme_end = settings_.endpoint.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::InvalidConfig, "endpoint must be a URL");
  const auto path_start = settings_.endpoint.find('/', scheme_end + 3);
  origin_ = settings_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : settings_.endpoint.substr(path_start);
}

std::string HttpChatBackend::complete(const std::string& prompt, std::size_t /*candidate*/) {
  httplib::Headers headers;
  if (!settings_.api_key_env.empty()) {
    const char* key = std::getenv(settings_.api_key_env.c_str());
    if (!key || !*key)
      throw Error(Errc::BackendUnavailable, "environment variable " + settings_.api_key_env + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto body = chat_request(settings_.model, settings_.temperature, prompt).dump();
  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    count_request();
    httplib::Client client(origin_);
    client.set_connection_timeout(settings_.timeout_seconds);
    client.set_read_timeout(settings_.timeout_seconds);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::BackendUnavailable, std::string("unparseable chat response: ") + e.what());
    }
    auto choices = parse_chat_response(parsed);
    return choices.empty() ? std::string() : choices.front();
  }
  throw Error(Errc::BackendUnavailable, settings_.endpoint + ": " + last_error);
}

BackendConfig backend_config_from_json(const std::string& name, const nlohmann::json& j,
                                       const std::filesystem::path& base_dir) {
  BackendConfig config;
  config.name = name;
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "scripted") {
      config.kind = BackendKind::Scripted;
      std::filesystem::path fixtures = j.at("fixtures").get<std::string>();
      config.fixture_file = fixtures.is_absolute() ? fixtures : base_dir / fixtures;
    } else if (kind == "http-chat") {
      config.kind = BackendKind::HttpChat;
      config.http.endpoint = j.at("endpoint").get<std::string>();
      config.http.model = j.at("model").get<std::string>();
      config.http.temperature = j.at("temperature").get<double>();
      config.http.api_key_env = j.value("api_key_env", "");
      config.http.timeout_seconds = j.value("timeout_seconds", 60);
    } else {
      throw Error(Errc::InvalidConfig, "backend '" + name + "': unknown kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "backend '" + name + "': " + e.what());
  }
  return config;
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendKind::Scripted)
    return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(config.fixture_file, config.name));
  return std::make_unique<HttpChatBackend>(config.http);
}

}  // namespace kgdf::gen
