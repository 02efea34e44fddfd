#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace kgdf::prompt {

struct Persona {
  std::string key;     // short handle used in scenario files, e.g. "timid"
  std::string name;    // display name, e.g. "timid"
  std::string traits;  // text placed in the prompt
  std::string game;
  friend bool operator==(const Persona&, const Persona&) = default;
};

// The persona keys in canonical order.
inline constexpr std::string_view kPersonaKeys[] = {"mature", "amateur", "talkative", "timid", "confident"};

class PersonaSet {
 public:
  // {"game": "...", "personas": [{"key","name","traits"}, ...]}
  static PersonaSet parse(const nlohmann::json& j);
  static PersonaSet load(const std::filesystem::path& path);

  const Persona& find(std::string_view key) const;  // UnknownPersona
  const std::vector<Persona>& all() const noexcept { return personas_; }

 private:
  std::vector<Persona> personas_;
};

}  // namespace kgdf::prompt
