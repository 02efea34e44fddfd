#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace kgdf::ingest {

struct Section {
  std::string heading;
  std::string body;
  friend bool operator==(const Section&, const Section&) = default;
};

// Plain-text description of one character, boss or NPC, split into the
// sections of the page it came from.
struct EntityProfile {
  std::string entity;
  std::string concept_name;
  std::string source;
  std::vector<Section> sections;

  friend bool operator==(const EntityProfile&, const EntityProfile&) = default;
};

struct ProfileParse {
  EntityProfile profile;
  std::vector<std::string> warnings;
};

inline constexpr std::string_view kDefaultSection = "description";

// Turns a saved page snapshot (wikitext, HTML, markdown or plain text) into
// an EntityProfile. Headings in any of those syntaxes start sections; text
// before the first heading becomes a "description" section. Tags, templates,
// reference markers and comments are dropped, links keep their label, runs
// of spaces collapse to one and blank lines collapse to a single newline.
//
// Throws EmptyDocument when nothing but markup and whitespace remains. A page
// with no headings yields one "description" section plus a NoSections
// warning.
ProfileParse parse_profile_page(std::string_view raw, std::string_view entity, std::string_view concept_name,
                                std::string_view source = {});

nlohmann::json to_json(const EntityProfile& profile);
EntityProfile profile_from_json(const nlohmann::json& j);

}  // namespace kgdf::ingest
