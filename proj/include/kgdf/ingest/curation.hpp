#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kgdf/ingest/extract.hpp"
#include "kgdf/kg/graph.hpp"

namespace kgdf::ingest {

enum class Decision { Accept, Reject };

// Candidates awaiting a human decision. Ids are "c<n>", assigned on entry
// and never reused within a queue.
class CurationQueue {
 public:
  // Returns the assigned id. The candidate is stored as pending.
  std::string add(CandidateTriple candidate);
  void add_all(std::vector<CandidateTriple> candidates);

  const CandidateTriple* find(std::string_view id) const;
  CandidateTriple* find(std::string_view id);
  const std::vector<CandidateTriple>& candidates() const noexcept { return candidates_; }
  std::size_t size() const noexcept { return candidates_.size(); }

 private:
  std::vector<CandidateTriple> candidates_;
  std::size_t next_id_ = 1;

  friend CurationQueue parse_queue(std::string_view text);
};

// Records a decision. Throws UnknownCandidate, AlreadyDecided, or
// ValidationFailedOnAccept when an accepted triple fails validate_triple
// against the graph's ontology and entity index.
void curate(CurationQueue& queue, std::string_view id, Decision decision, std::string note,
            const kg::KnowledgeGraph& kg);

struct PromotionReport {
  std::size_t inserted = 0;
  std::size_t duplicate = 0;
  std::size_t rejected_skipped = 0;
  std::size_t pending_skipped = 0;
  // Accepted candidates the graph refused (it changed since the decision).
  std::vector<std::string> failed;
};

// Inserts every accepted candidate into the graph, deduplicating.
PromotionReport promote_accepted(const CurationQueue& queue, kg::KnowledgeGraph& kg);

// One candidate per line:
//   (s, p, o)\t<status>\t<extractor>\t# {"id":..,"source":..,"tool":..,"note":..}
std::string serialize_queue(const CurationQueue& queue);
CurationQueue parse_queue(std::string_view text);
CurationQueue load_queue(const std::filesystem::path& path);
void save_queue(const CurationQueue& queue, const std::filesystem::path& path);

}  // namespace kgdf::ingest
