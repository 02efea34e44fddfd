#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>

#include "kgdf/eval/campaign.hpp"
#include "kgdf/gen/generate.hpp"

namespace kgdf::eval {

// A campaign on disk: one JSON record per line, a header line first, then
// every task, then ratings appended in submission order.
//
//   {"type":"campaign","id":"..."}
//   {"type":"task", ...EvalTask}
//   {"type":"rating", ...Rating}
//
// All writes go through one exclusive lock; readers take a shared lock.
class CampaignStore {
 public:
  // Writes a fresh campaign file. IoError if the file exists.
  static void create(const std::filesystem::path& file, const Campaign& campaign);

  // Loads and revalidates every record. CorruptFile names the bad line.
  explicit CampaignStore(std::filesystem::path file, gen::Clock clock = gen::utc_now);

  CampaignStore(const CampaignStore&) = delete;
  CampaignStore& operator=(const CampaignStore&) = delete;

  // Validates against the in-memory campaign, appends one line, then commits.
  // The stored rating gets the store's timestamp.
  Rating submit(const std::string& task_id, const std::string& evaluator, double s1, double s2);

  Campaign snapshot() const;
  std::optional<EvalTask> task(const std::string& task_id) const;
  std::optional<EvalTask> next(const std::string& evaluator) const;
  Progress progress(const std::string& evaluator) const;

  const std::filesystem::path& file() const noexcept { return file_; }

 private:
  std::filesystem::path file_;
  gen::Clock clock_;
  mutable std::shared_mutex mutex_;
  Campaign campaign_;
};

}  // namespace kgdf::eval
