#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "kgdf/gen/backend.hpp"
#include "kgdf/gen/generate.hpp"

namespace kgdf::gateway {

// Where a game's knowledge and prompt templates live. `kg` is either a
// persisted .kg file or a plain triple list (one "(s, p, o)" per line).
struct GameConfig {
  std::string game;
  std::filesystem::path ontology;
  std::filesystem::path kg;
  std::filesystem::path battle_template;
  std::filesystem::path npc_template;
  std::filesystem::path personas;
  std::optional<std::size_t> candidates;  // overrides the pipeline default for this game
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir;
  std::string campaign;
  std::string auth_token;      // shared bearer token; empty disables auth
  std::string operator_token;  // required for POST /api/generate; empty disables it
  std::string cors_origin;     // empty disables CORS headers

  std::string backend;  // key into `backends`
  std::map<std::string, gen::BackendConfig> backends;
  std::map<std::string, GameConfig> games;
  std::size_t candidates = gen::kDefaultCandidates;
  std::size_t workers = 4;
  gen::Strategy strategy = gen::Strategy::Grounding;
};

// Relative paths resolve against `base_dir`. InvalidConfig on any problem,
// including a port outside [1, 65535] or a backend name not in `backends`.
ServiceConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

// `offline` forces the first scripted backend in the config.
const gen::BackendConfig& selected_backend(const ServiceConfig& config, bool offline = false);

// Creates the directory if needed and probes it with a write.
// DataDirUnwritable when that fails.
void ensure_writable_dir(const std::filesystem::path& dir);

std::filesystem::path campaign_file(const ServiceConfig& config);
std::filesystem::path runs_dir(const ServiceConfig& config);

}  // namespace kgdf::gateway
