#include "kgdf/prompt/persona.hpp"

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::prompt {

PersonaSet PersonaSet::parse(const nlohmann::json& j) {
  PersonaSet set;
  try {
    const auto game = j.at("game").get<std::string>();
    for (const auto& p : j.at("personas")) {
      Persona persona{p.at("key").get<std::string>(), p.at("name").get<std::string>(),
                      p.at("traits").get<std::string>(), p.value("game", game)};
      if (trim(persona.key).empty() || trim(persona.traits).empty())
        throw Error(Errc::InvalidConfig, "persona with empty key or traits");
      for (const auto& existing : set.personas_)
        if (existing.key == persona.key) throw Error(Errc::InvalidConfig, "duplicate persona '" + persona.key + "'");
      set.personas_.push_back(std::move(persona));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("persona file: ") + e.what());
  }
  return set;
}

PersonaSet PersonaSet::load(const std::filesystem::path& path) {
  try {
    return parse(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
}

const Persona& PersonaSet::find(std::string_view key) const {
  for (const auto& p : personas_)
    if (p.key == key) return p;
  throw Error(Errc::UnknownPersona, "no persona '" + std::string(key) + "'");
}

}  // namespace kgdf::prompt
