#include "kgdf/kg/triple.hpp"

#include <functional>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::kg {

std::string_view to_string(ProvenanceKind kind) noexcept {
  switch (kind) {
    case ProvenanceKind::PatternExtracted: return "pattern-extracted";
    case ProvenanceKind::LlmExtracted: return "llm-extracted";
    case ProvenanceKind::Manual: return "manual";
  }
  return "manual";
}

ProvenanceKind provenance_kind_from_string(std::string_view text) {
  if (text == "pattern-extracted") return ProvenanceKind::PatternExtracted;
  if (text == "llm-extracted") return ProvenanceKind::LlmExtracted;
  if (text == "manual") return ProvenanceKind::Manual;
  throw Error(Errc::InvalidArgument, "unknown provenance kind '" + std::string(text) + "'");
}

namespace {

bool has_control_char(std::string_view s) {
  for (unsigned char c : s)
    if (c < 0x20 || c == 0x7F) return true;
  return false;
}

std::string checked_field(std::string_view raw, const char* name, bool allow_comma) {
  auto field = trim(raw);
  if (field.empty()) throw Error(Errc::EmptyField, std::string(name) + " is empty");
  if (has_control_char(field))
    throw Error(Errc::MalformedTriple, std::string(name) + " contains a control character");
  if (!allow_comma && field.find(',') != std::string_view::npos)
    throw Error(Errc::MalformedTriple, std::string(name) + " may not contain a comma");
  return std::string(field);
}

}  // namespace

Triple::Triple(std::string_view subject, std::string_view predicate, std::string_view object,
               Provenance provenance)
    : subject_(checked_field(subject, "subject", false)),
      predicate_(checked_field(predicate, "predicate", false)),
      object_(checked_field(object, "object", true)),
      provenance_(std::move(provenance)) {}

std::string Triple::key() const {
  std::string k = to_lower_ascii(subject_);
  k.push_back('\x1f');
  k += to_lower_ascii(predicate_);
  k.push_back('\x1f');
  k += object_;
  return k;
}

bool operator==(const Triple& a, const Triple& b) {
  return iequals(a.subject_, b.subject_) && iequals(a.predicate_, b.predicate_) &&
         a.object_ == b.object_;
}

std::size_t TripleKeyHash::operator()(const Triple& t) const { return std::hash<std::string>{}(t.key()); }

Triple parse_triple(std::string_view line, Provenance provenance) {
  auto body = trim(line);
  if (body.size() < 2 || body.front() != '(' || body.back() != ')')
    throw Error(Errc::MalformedTriple, "expected '(subject, predicate, object)': " + std::string(line));
  body = body.substr(1, body.size() - 2);
  const auto first = body.find(',');
  const auto second = first == std::string_view::npos ? first : body.find(',', first + 1);
  if (second == std::string_view::npos)
    throw Error(Errc::MalformedTriple, "fewer than two commas: " + std::string(line));
  return Triple(body.substr(0, first), body.substr(first + 1, second - first - 1), body.substr(second + 1),
                std::move(provenance));
}

std::string serialize_triple(const Triple& t) {
  std::string out;
  out.reserve(t.subject().size() + t.predicate().size() + t.object().size() + 6);
  out += '(';
  out += t.subject();
  out += ", ";
  out += t.predicate();
  out += ", ";
  out += t.object();
  out += ')';
  return out;
}

}  // namespace kgdf::kg
