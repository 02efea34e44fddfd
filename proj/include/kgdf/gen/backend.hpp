#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace kgdf::gen {

// A text-generation service. `complete` returns one completion for the
// prompt; `candidate` is the 0-based slot within a sampling batch. Calls may
// come from several threads at once.
class Backend {
 public:
  Backend() = default;
  // Copies start with a fresh request counter.
  Backend(const Backend&) noexcept {}
  Backend& operator=(const Backend&) noexcept { return *this; }
  virtual ~Backend() = default;
  virtual std::string complete(const std::string& prompt, std::size_t candidate) = 0;
  // Short identity recorded with every response.
  virtual std::string descriptor() const = 0;
  std::size_t request_count() const noexcept { return requests_.load(); }

 protected:
  void count_request() noexcept { ++requests_; }

 private:
  std::atomic<std::size_t> requests_{0};
};

// Key used by scripted fixtures: SHA-256 hex of the exact prompt bytes, so a
// template edit makes every fixture lookup fail loudly.
std::string prompt_hash(const std::string& prompt);

// Replays canned completions keyed by prompt hash. A prompt without a
// fixture, or a slot past the end of its list, is FixtureMissing.
class ScriptedBackend final : public Backend {
 public:
  using FixtureTable = std::map<std::string, std::vector<std::string>>;

  explicit ScriptedBackend(FixtureTable fixtures, std::string name = "scripted");
  // JSON object mapping hex prompt hash -> list of strings.
  static ScriptedBackend from_file(const std::filesystem::path& path, std::string name = "scripted");
  static FixtureTable parse_fixtures(const nlohmann::json& j);

  std::string complete(const std::string& prompt, std::size_t candidate) override;
  std::string descriptor() const override { return "scripted:" + name_; }
  const FixtureTable& fixtures() const noexcept { return fixtures_; }

 private:
  FixtureTable fixtures_;
  std::string name_;
};

// Chat-completion wire format:
//   request  {model, messages:[{role, content}], n, temperature}
//   response {choices:[{message:{content}}]}
nlohmann::json chat_request(const std::string& model, double temperature, const std::string& prompt, int n = 1);
// Contents of every choice in order; BackendUnavailable for a malformed body.
std::vector<std::string> parse_chat_response(const nlohmann::json& body);

struct HttpChatSettings {
  std::string endpoint;  // full URL, e.g. https://host/v1/chat/completions
  std::string model;
  double temperature = 0.0;
  std::string api_key_env;  // name of the environment variable holding the key
  int timeout_seconds = 60;
};

// Talks to a chat-completion HTTP service. Transport failures and non-2xx
// replies are retried once, then reported as BackendUnavailable.
class HttpChatBackend final : public Backend {
 public:
  explicit HttpChatBackend(HttpChatSettings settings);
  std::string complete(const std::string& prompt, std::size_t candidate) override;
  std::string descriptor() const override { return "http-chat:" + settings_.model; }

 private:
  HttpChatSettings settings_;
  std::string origin_;
  std::string path_;
};

enum class BackendKind { HttpChat, Scripted };

struct BackendConfig {
  std::string name;
  BackendKind kind = BackendKind::Scripted;
  HttpChatSettings http;
  std::filesystem::path fixture_file;
};

// Reads one entry of the config's "backends" object. Relative fixture paths
// resolve against `base_dir`. Model and temperature are required for http
// backends; there are no built-in defaults.
BackendConfig backend_config_from_json(const std::string& name, const nlohmann::json& j,
                                       const std::filesystem::path& base_dir);
std::unique_ptr<Backend> make_backend(const BackendConfig& config);

}  // namespace kgdf::gen
