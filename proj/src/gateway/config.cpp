#include "kgdf/gateway/config.hpp"

#include <fstream>
#include <random>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::gateway {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ServiceConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  try {
    if (j.contains("listen")) {
      c.host = j["listen"].value("host", c.host);
      c.port = j["listen"].value("port", c.port);
    }
    c.data_dir = resolve(base_dir, j.at("data_dir").get<std::string>());
    c.campaign = j.value("campaign", "");
    c.auth_token = j.value("auth_token", "");
    c.operator_token = j.value("operator_token", "");
    c.cors_origin = j.value("cors_origin", "");
    c.backend = j.at("backend").get<std::string>();
    for (const auto& [name, b] : j.at("backends").items())
      c.backends.emplace(name, gen::backend_config_from_json(name, b, base_dir));
    for (const auto& [name, g] : j.at("games").items()) {
      GameConfig game;
      game.game = name;
      game.ontology = resolve(base_dir, g.at("ontology").get<std::string>());
      game.kg = resolve(base_dir, g.at("kg").get<std::string>());
      game.battle_template = resolve(base_dir, g.value("battle_template", ""));
      game.npc_template = resolve(base_dir, g.value("npc_template", ""));
      game.personas = resolve(base_dir, g.value("personas", ""));
      if (g.contains("candidates")) {
        game.candidates = g["candidates"].get<std::size_t>();
        if (*game.candidates == 0) throw Error(Errc::InvalidConfig, "games." + name + ".candidates must be at least 1");
      }
      c.games.emplace(name, std::move(game));
    }
    if (j.contains("pipeline")) {
      const auto& p = j["pipeline"];
      c.candidates = p.value("candidates", c.candidates);
      c.workers = p.value("workers", c.workers);
      c.strategy = gen::strategy_from_string(p.value("strategy", std::string("grounding")));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidConfig) throw;
    throw Error(Errc::InvalidConfig, e.what());
  }
  if (c.port < 1 || c.port > 65535) throw Error(Errc::InvalidConfig, "port " + std::to_string(c.port) + " out of range");
  if (!c.backends.count(c.backend)) throw Error(Errc::InvalidConfig, "backend '" + c.backend + "' is not defined");
  if (c.candidates == 0) throw Error(Errc::InvalidConfig, "pipeline.candidates must be at least 1");
  if (c.workers == 0) throw Error(Errc::InvalidConfig, "pipeline.workers must be at least 1");
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  return parse_config(j, path.parent_path());
}

const gen::BackendConfig& selected_backend(const ServiceConfig& config, bool offline) {
  if (!offline) return config.backends.at(config.backend);
  const auto& chosen = config.backends.at(config.backend);
  if (chosen.kind == gen::BackendKind::Scripted) return chosen;
  for (const auto& [name, b] : config.backends)
    if (b.kind == gen::BackendKind::Scripted) return b;
  throw Error(Errc::InvalidConfig, "--offline needs a scripted backend in the config");
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error(Errc::DataDirUnwritable, dir.string() + ": cannot create directory");
  const auto probe = dir / (".probe-" + std::to_string(std::random_device{}()));
  {
    std::ofstream out(probe);
    out << "ok";
    if (!out.flush()) throw Error(Errc::DataDirUnwritable, dir.string() + ": not writable");
  }
  std::filesystem::remove(probe, ec);
  if (ec) throw Error(Errc::DataDirUnwritable, dir.string() + ": cannot remove probe file");
}

std::filesystem::path campaign_file(const ServiceConfig& config) {
  return config.data_dir / "campaigns" / (config.campaign + ".jsonl");
}

std::filesystem::path runs_dir(const ServiceConfig& config) { return config.data_dir / "runs"; }

}  // namespace kgdf::gateway
