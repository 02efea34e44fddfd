#include "kgdf/grounding/annotate.hpp"

#include <algorithm>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::grounding {

std::string_view to_string(Label l) noexcept { return l == Label::Knowledge ? "KNOWLEDGE" : "SITUATION"; }

Label label_from_string(std::string_view text) {
  if (text == "KNOWLEDGE") return Label::Knowledge;
  if (text == "SITUATION") return Label::Situation;
  throw Error(Errc::InvalidArgument, "unknown label '" + std::string(text) + "'");
}

GroundingAnnotation annotate(std::string_view response, const Lexicon& knowledge, const Lexicon& situation,
                             std::string response_id) {
  GroundingAnnotation a;
  a.response_id = std::move(response_id);
  const auto tokens = tokenize(response);
  const std::size_t n = tokens.size();
  std::vector<bool> covered(n, false);

  auto place = [&](const Lexicon& lex, Label label) {
    for (std::size_t len = std::min(lex.max_tokens(), n); len >= 1; --len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        if (std::any_of(covered.begin() + i, covered.begin() + i + len, [](bool c) { return c; })) continue;
        std::string key = tokens[i].norm;
        for (std::size_t k = i + 1; k < i + len; ++k) key += ' ' + tokens[k].norm;
        const auto* sources = lex.sources(key);
        if (!sources) continue;
        std::fill(covered.begin() + i, covered.begin() + i + len, true);
        a.spans.push_back({tokens[i].start, tokens[i + len - 1].end, label, key, sources->front(), len});
        (label == Label::Knowledge ? a.knowledge_tokens : a.situation_tokens) += len;
      }
    }
  };
  place(knowledge, Label::Knowledge);
  place(situation, Label::Situation);

  std::sort(a.spans.begin(), a.spans.end(), [](const Span& x, const Span& y) { return x.start < y.start; });
  return a;
}

nlohmann::ordered_json to_json(const GroundingAnnotation& a, std::string_view response) {
  nlohmann::ordered_json j;
  j["response_id"] = a.response_id;
  j["knowledge_tokens"] = a.knowledge_tokens;
  j["situation_tokens"] = a.situation_tokens;
  j["spans"] = nlohmann::ordered_json::array();
  for (const auto& s : a.spans) {
    nlohmann::ordered_json span;
    span["start"] = s.start;
    span["end"] = s.end;
    span["start_u16"] = utf16_offset(response, s.start);
    span["end_u16"] = utf16_offset(response, s.end);
    span["label"] = to_string(s.label);
    span["lexeme"] = s.lexeme;
    span["source"] = s.source;
    span["tokens"] = s.tokens;
    j["spans"].push_back(std::move(span));
  }
  return j;
}

GroundingAnnotation annotation_from_json(const nlohmann::json& j) {
  GroundingAnnotation a;
  try {
    a.response_id = j.at("response_id").get<std::string>();
    a.knowledge_tokens = j.at("knowledge_tokens").get<std::size_t>();
    a.situation_tokens = j.at("situation_tokens").get<std::size_t>();
    for (const auto& s : j.at("spans"))
      a.spans.push_back({s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>(),
                         label_from_string(s.at("label").get<std::string>()), s.at("lexeme").get<std::string>(),
                         s.at("source").get<std::string>(), s.at("tokens").get<std::size_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("annotation: ") + e.what());
  }
  return a;
}

std::string render_ansi(std::string_view response, const GroundingAnnotation& a) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& s : a.spans) {
    out.append(response.substr(pos, s.start - pos));
    out += s.label == Label::Knowledge ? "\x1b[30;46m" : "\x1b[30;42m";
    out.append(response.substr(s.start, s.end - s.start));
    out += "\x1b[0m";
    pos = s.end;
  }
  out.append(response.substr(pos));
  return out;
}

}  // namespace kgdf::grounding
