#include "kgdf/ingest/curation.hpp"

#include <json.hpp>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::ingest {

std::string CurationQueue::add(CandidateTriple candidate) {
  candidate.id = "c" + std::to_string(next_id_++);
  candidate.status = CandidateStatus::Pending;
  candidate.note.clear();
  auto id = candidate.id;
  candidates_.push_back(std::move(candidate));
  return id;
}

void CurationQueue::add_all(std::vector<CandidateTriple> candidates) {
  for (auto& c : candidates) add(std::move(c));
}

const CandidateTriple* CurationQueue::find(std::string_view id) const {
  for (const auto& c : candidates_)
    if (c.id == id) return &c;
  return nullptr;
}

CandidateTriple* CurationQueue::find(std::string_view id) {
  return const_cast<CandidateTriple*>(std::as_const(*this).find(id));
}

void curate(CurationQueue& queue, std::string_view id, Decision decision, std::string note,
            const kg::KnowledgeGraph& kg) {
  auto* candidate = queue.find(id);
  if (!candidate) throw Error(Errc::UnknownCandidate, "no candidate '" + std::string(id) + "'");
  if (candidate->status != CandidateStatus::Pending)
    throw Error(Errc::AlreadyDecided,
                std::string(id) + " is already " + std::string(to_string(candidate->status)));
  if (decision == Decision::Accept) {
    auto verdict = kg::validate_triple(candidate->triple, kg.ontology(), kg.index());
    if (!verdict)
      throw Error(Errc::ValidationFailedOnAccept,
                  std::string(to_string(verdict.rule)) + ": " + verdict.message);
    candidate->status = CandidateStatus::Accepted;
  } else {
    candidate->status = CandidateStatus::Rejected;
  }
  candidate->note = std::move(note);
}

PromotionReport promote_accepted(const CurationQueue& queue, kg::KnowledgeGraph& kg) {
  PromotionReport report;
  for (const auto& c : queue.candidates()) {
    switch (c.status) {
      case CandidateStatus::Pending: ++report.pending_skipped; break;
      case CandidateStatus::Rejected: ++report.rejected_skipped; break;
      case CandidateStatus::Accepted:
        try {
          if (kg.insert(c.triple) == kg::InsertOutcome::Inserted)
            ++report.inserted;
          else
            ++report.duplicate;
        } catch (const Error& e) {
          report.failed.push_back(c.id + ": " + e.what());
        }
        break;
    }
  }
  return report;
}

std::string serialize_queue(const CurationQueue& queue) {
  std::string out;
  for (const auto& c : queue.candidates()) {
    nlohmann::ordered_json meta;
    meta["id"] = c.id;
    meta["source"] = c.triple.provenance().source;
    if (!c.triple.provenance().tool.empty()) meta["tool"] = c.triple.provenance().tool;
    if (!c.note.empty()) meta["note"] = c.note;
    out += kg::serialize_triple(c.triple);
    out += '\t';
    out += to_string(c.status);
    out += '\t';
    out += to_string(c.extractor);
    out += "\t# " + meta.dump() + "\n";
  }
  return out;
}

CurationQueue parse_queue(std::string_view text) {
  CurationQueue queue;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::CorruptFile, "queue line " + std::to_string(line_no) + ": " + why);
    };
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const auto t3 = t2 == std::string::npos ? t2 : line.find("\t# ", t2 + 1);
    if (t3 == std::string::npos) fail("expected four tab-separated fields");
    try {
      auto meta = nlohmann::json::parse(line.substr(t3 + 3));
      const auto extractor = extractor_from_string(line.substr(t2 + 1, t3 - t2 - 1));
      kg::Provenance provenance{extractor == Extractor::Pattern ? kg::ProvenanceKind::PatternExtracted
                                                                : kg::ProvenanceKind::LlmExtracted,
                                meta.value("source", ""), meta.value("tool", "")};
      CandidateTriple c{meta.at("id").get<std::string>(), kg::parse_triple(line.substr(0, t1), provenance),
                        extractor, status_from_string(line.substr(t1 + 1, t2 - t1 - 1)), meta.value("note", "")};
      if (c.id.size() < 2 || c.id[0] != 'c') fail("bad candidate id '" + c.id + "'");
      if (queue.find(c.id)) fail("duplicate candidate id '" + c.id + "'");
      queue.next_id_ = std::max(queue.next_id_, std::stoul(c.id.substr(1)) + 1);
      queue.candidates_.push_back(std::move(c));
    } catch (const Error& e) {
      if (e.code() == Errc::CorruptFile) throw;
      fail(e.what());
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return queue;
}

CurationQueue load_queue(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_queue(read_file(path));
}

void save_queue(const CurationQueue& queue, const std::filesystem::path& path) {
  write_file(path, serialize_queue(queue));
}

}  // namespace kgdf::ingest
