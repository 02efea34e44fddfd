#include "kgdf/ingest/extract.hpp"

#include "kgdf/error.hpp"
#include "kgdf/parallel.hpp"
#include "kgdf/text.hpp"

namespace kgdf::ingest {

std::string_view to_string(Extractor e) noexcept { return e == Extractor::Pattern ? "pattern" : "llm"; }

std::string_view to_string(CandidateStatus s) noexcept {
  switch (s) {
    case CandidateStatus::Pending: return "pending";
    case CandidateStatus::Accepted: return "accepted";
    case CandidateStatus::Rejected: return "rejected";
  }
  return "pending";
}

Extractor extractor_from_string(std::string_view text) {
  if (text == "pattern") return Extractor::Pattern;
  if (text == "llm") return Extractor::Llm;
  throw Error(Errc::InvalidArgument, "unknown extractor '" + std::string(text) + "'");
}

CandidateStatus status_from_string(std::string_view text) {
  if (text == "pending") return CandidateStatus::Pending;
  if (text == "accepted") return CandidateStatus::Accepted;
  if (text == "rejected") return CandidateStatus::Rejected;
  throw Error(Errc::InvalidArgument, "unknown status '" + std::string(text) + "'");
}

RuleSet RuleSet::parse(std::string_view text) {
  RuleSet set;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::InvalidRule, "line " + std::to_string(line_no) + ": " + why);
    };
    auto space = line.find_first_of(" \t");
    auto keyword = line.substr(0, space);
    auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    if (keyword == "version") {
      if (rest.empty()) fail("version needs a tag");
      set.version_ = std::string(rest);
      continue;
    }
    auto split = rest.find_first_of(" \t");
    if (split == std::string_view::npos) fail("expected '<kind> <relation> <pattern>'");
    PatternRule rule;
    rule.relation = std::string(rest.substr(0, split));
    rule.pattern = std::string(trim(rest.substr(split)));
    if (keyword == "regex") {
      rule.kind = PatternRule::Kind::Regex;
      try {
        rule.compiled = std::regex(rule.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        fail("bad regular expression: " + std::string(e.what()));
      }
      if (rule.compiled.mark_count() != 1) fail("regex rules need exactly one capture group");
    } else if (keyword == "list") {
      rule.kind = PatternRule::Kind::KeywordList;
    } else {
      fail("unknown rule kind '" + std::string(keyword) + "'");
    }
    set.rules_.push_back(std::move(rule));
  }
  return set;
}

RuleSet RuleSet::load(const std::filesystem::path& path) { return parse(read_file(path)); }

namespace {

std::string_view strip_trailing_dots(std::string_view s) {
  static constexpr std::string_view kEllipsis = "…";
  for (;;) {
    s = trim(s);
    if (!s.empty() && s.back() == '.') {
      s.remove_suffix(1);
    } else if (s.size() >= kEllipsis.size() && s.substr(s.size() - kEllipsis.size()) == kEllipsis) {
      s.remove_suffix(kEllipsis.size());
    } else {
      return s;
    }
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  std::string current;
  auto push = [&] {
    auto item = strip_trailing_dots(current);
    if (!item.empty()) items.emplace_back(item);
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ',' || text[i] == ';') {
      push();
    } else if (text.compare(i, 5, " and ") == 0) {
      push();
      i += 4;
    } else {
      current.push_back(text[i]);
    }
  }
  push();
  return items;
}

void add_candidate(std::vector<CandidateTriple>& out, const EntityProfile& profile, const std::string& relation,
                   std::string_view object, const kg::Provenance& provenance) {
  try {
    out.push_back({"", kg::Triple(profile.entity, relation, object, provenance), Extractor::Pattern,
                   CandidateStatus::Pending, ""});
  } catch (const Error&) {
    // Captures that cannot form a triple (blank, multi-line) are skipped.
  }
}

}  // namespace

std::vector<CandidateTriple> extract_triples_pattern(const EntityProfile& profile, const RuleSet& rules) {
  std::vector<CandidateTriple> out;
  const kg::Provenance provenance{kg::ProvenanceKind::PatternExtracted, profile.source, rules.version()};
  for (const auto& rule : rules.rules()) {
    for (const auto& section : profile.sections) {
      const std::string& body = section.body;
      if (rule.kind == PatternRule::Kind::Regex) {
        for (auto it = std::sregex_iterator(body.begin(), body.end(), rule.compiled); it != std::sregex_iterator();
             ++it)
          add_candidate(out, profile, rule.relation, (*it)[1].str(), provenance);
      } else {
        std::size_t pos = 0;
        while ((pos = body.find(rule.pattern, pos)) != std::string::npos) {
          const auto start = pos + rule.pattern.size();
          auto end = body.find('\n', start);
          if (end == std::string::npos) end = body.size();
          for (const auto& item : split_list(std::string_view(body).substr(start, end - start)))
            add_candidate(out, profile, rule.relation, item, provenance);
          pos = end;
        }
      }
    }
  }
  return out;
}

std::string render_extraction_prompt(const EntityProfile& profile, const kg::Ontology& ontology) {
  std::string prompt;
  prompt += "Extract knowledge graph triples about " + profile.entity + " from the text below.\n";
  prompt += "Use only the relations listed. Write one fact per line in the form (subject, predicate, object) ";
  prompt += "and write nothing else.\n\n";
  prompt += "Relations:\n";
  for (const auto& r : ontology.relations()) prompt += "- " + r.name + ": " + r.domain + " -> " + r.range + "\n";
  prompt += "\nText:\n";
  for (const auto& s : profile.sections) prompt += "## " + s.heading + "\n" + s.body + "\n";
  return prompt;
}

LlmExtraction extract_triples_llm(const EntityProfile& profile, const kg::Ontology& ontology, gen::Backend& backend) {
  const auto completion = backend.complete(render_extraction_prompt(profile, ontology), 0);
  LlmExtraction result;
  const kg::Provenance provenance{kg::ProvenanceKind::LlmExtracted, profile.source,
                                  std::string(kExtractionTemplateVersion)};
  for (const auto& raw : split_lines(completion)) {
    auto line = trim(raw);
    if (line.empty()) continue;
    ++result.report.lines;
    try {
      result.candidates.push_back(
          {"", kg::parse_triple(line, provenance), Extractor::Llm, CandidateStatus::Pending, ""});
      ++result.report.parsed;
    } catch (const Error&) {
      result.report.malformed.emplace_back(line);
    }
  }
  return result;
}

std::vector<LlmExtraction> extract_triples_llm_batch(std::span<const EntityProfile> profiles,
                                                     const kg::Ontology& ontology, gen::Backend& backend,
                                                     std::size_t workers) {
  std::vector<LlmExtraction> results(profiles.size());
  parallel_for(profiles.size(), workers,
               [&](std::size_t i) { results[i] = extract_triples_llm(profiles[i], ontology, backend); });
  return results;
}

}  // namespace kgdf::ingest
