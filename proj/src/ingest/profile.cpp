#include "kgdf/ingest/profile.hpp"

#include <cctype>
#include <regex>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::ingest {

namespace {

// Heading lines are rewritten to this marker before tags are stripped.
constexpr char kHeadingMarker = '\x01';

std::string replace_all(std::string s, const std::regex& re, const std::string& with) {
  return std::regex_replace(s, re, with);
}

// Drops {{...}} templates, honouring nesting.
std::string strip_templates(std::string_view s) {
  std::string out;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 2, "{{") == 0) {
      ++depth;
      ++i;
    } else if (depth > 0 && s.compare(i, 2, "}}") == 0) {
      --depth;
      ++i;
    } else if (depth == 0) {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string decode_entities(std::string s) {
  static const std::pair<const char*, const char*> kNamed[] = {
      {"&amp;", "&"},    {"&lt;", "<"},      {"&gt;", ">"},      {"&quot;", "\""},    {"&#39;", "'"},
      {"&apos;", "'"},   {"&nbsp;", " "},    {"&eacute;", "é"},  {"&mdash;", "—"},    {"&ndash;", "–"},
      {"&hellip;", "…"}, {"&rsquo;", "’"},   {"&lsquo;", "‘"},   {"&ldquo;", "“"},    {"&rdquo;", "”"}};
  for (const auto& [from, to] : kNamed) {
    std::string::size_type pos = 0;
    const std::string_view f(from);
    while ((pos = s.find(f, pos)) != std::string::npos) {
      s.replace(pos, f.size(), to);
      pos += std::string_view(to).size();
    }
  }
  static const std::regex kNumeric("&#([0-9]+);");
  std::string out;
  auto begin = std::sregex_iterator(s.begin(), s.end(), kNumeric);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(s, last, static_cast<std::size_t>(it->position()) - last);
    unsigned long cp = std::stoul((*it)[1].str());
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    last = static_cast<std::size_t>(it->position() + it->length());
  }
  out.append(s, last);
  return out;
}

std::string strip_markup(std::string_view raw) {
  static const std::regex kComment("<!--[\\s\\S]*?-->");
  static const std::regex kRefBlock("<ref[^>/]*>[\\s\\S]*?</ref>|<ref[^>]*/>", std::regex::icase);
  static const std::regex kScript("<(script|style)[^>]*>[\\s\\S]*?</(script|style)>", std::regex::icase);
  static const std::regex kHtmlHeading("<h[1-6][^>]*>([\\s\\S]*?)</h[1-6]>", std::regex::icase);
  static const std::regex kBlockTag("<(br|p|div|li|ul|ol|tr|table|section)\\b[^>]*/?>|</(p|div|li|ul|ol|tr|table|section)>",
                                    std::regex::icase);
  static const std::regex kTag("<[^>]+>");
  static const std::regex kFileLink("\\[\\[(File|Image|Category):[^\\]]*\\]\\]", std::regex::icase);
  static const std::regex kPipedLink("\\[\\[[^\\]|]*\\|([^\\]]*)\\]\\]");
  static const std::regex kLink("\\[\\[([^\\]]*)\\]\\]");
  static const std::regex kExternalLink("\\[https?://[^\\s\\]]+ ([^\\]]*)\\]");
  static const std::regex kBareExternal("\\[https?://[^\\]]*\\]");
  static const std::regex kRefMarker("\\[(\\d+|note \\d+|citation needed|[a-z])\\]", std::regex::icase);
  static const std::regex kEmphasis("'{2,}");

  std::string s(raw);
  s = replace_all(s, kComment, "");
  s = replace_all(s, kRefBlock, "");
  s = replace_all(s, kScript, "");
  s = replace_all(s, kHtmlHeading, std::string("\n") + kHeadingMarker + "$1\n");
  s = strip_templates(s);

  // Wikitext and markdown headings, one per line.
  std::string marked;
  static const std::regex kWikiHeading("^\\s*(={1,6})\\s*(.*?)\\s*\\1\\s*$");
  static const std::regex kMarkdownHeading("^\\s*#{1,6}\\s+(.*?)\\s*#*\\s*$");
  for (const auto& line : split_lines(s)) {
    std::smatch m;
    if (std::regex_match(line, m, kWikiHeading)) {
      marked += kHeadingMarker + m[2].str() + "\n";
    } else if (std::regex_match(line, m, kMarkdownHeading)) {
      marked += kHeadingMarker + m[1].str() + "\n";
    } else {
      marked += line + "\n";
    }
  }
  s = std::move(marked);

  s = replace_all(s, kBlockTag, "\n");
  s = replace_all(s, kTag, "");
  s = replace_all(s, kFileLink, "");
  s = replace_all(s, kPipedLink, "$1");
  s = replace_all(s, kLink, "$1");
  s = replace_all(s, kExternalLink, "$1");
  s = replace_all(s, kBareExternal, "");
  s = replace_all(s, kRefMarker, "");
  s = replace_all(s, kEmphasis, "");
  return decode_entities(s);
}

std::string collapse_spaces(std::string_view line) {
  std::string out;
  bool pending_space = false;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\f' || c == '\v' || c == '\r') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

ProfileParse parse_profile_page(std::string_view raw, std::string_view entity, std::string_view concept_name,
                                std::string_view source) {
  if (trim(entity).empty()) throw Error(Errc::InvalidArgument, "entity id is empty");
  if (trim(raw).empty()) throw Error(Errc::EmptyDocument, "document is empty");

  ProfileParse result;
  auto& profile = result.profile;
  profile.entity = std::string(trim(entity));
  profile.concept_name = std::string(trim(concept_name));
  profile.source = std::string(source);

  bool saw_heading = false;
  Section current{std::string(kDefaultSection), {}};
  auto flush = [&](bool force) {
    if (force || !current.body.empty()) profile.sections.push_back(std::move(current));
  };
  for (const auto& raw_line : split_lines(strip_markup(raw))) {
    std::string line = collapse_spaces(raw_line);
    if (!line.empty() && line.front() == kHeadingMarker) {
      flush(saw_heading);
      saw_heading = true;
      current = Section{collapse_spaces(trim(std::string_view(line).substr(1))), {}};
      continue;
    }
    if (line.empty()) continue;
    if (!current.body.empty()) current.body.push_back('\n');
    current.body += line;
  }
  flush(saw_heading);

  if (profile.sections.empty())
    throw Error(Errc::EmptyDocument, "document has no text after markup removal");
  if (!saw_heading) result.warnings.emplace_back("NoSections: no headings found; whole body kept as 'description'");
  return result;
}

nlohmann::json to_json(const EntityProfile& profile) {
  nlohmann::json sections = nlohmann::json::array();
  for (const auto& s : profile.sections) sections.push_back({{"heading", s.heading}, {"body", s.body}});
  return {{"entity", profile.entity}, {"concept", profile.concept_name}, {"source", profile.source}, {"sections", sections}};
}

EntityProfile profile_from_json(const nlohmann::json& j) {
  EntityProfile p;
  try {
    p.entity = j.at("entity").get<std::string>();
    p.concept_name = j.value("concept", "");
    p.source = j.value("source", "");
    for (const auto& s : j.at("sections"))
      p.sections.push_back({s.at("heading").get<std::string>(), s.at("body").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("bad profile JSON: ") + e.what());
  }
  if (p.entity.empty() || p.sections.empty()) throw Error(Errc::InvalidArgument, "profile needs an entity and sections");
  return p;
}

}  // namespace kgdf::ingest
