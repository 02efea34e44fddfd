#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kgdf::eval {

struct IdentificationTask {
  std::string id;
  std::string response;
  std::vector<std::string> options;  // K distinct names, shuffled
  std::string truth;
  std::uint64_t seed = 0;
  std::optional<std::string> answer;
  friend bool operator==(const IdentificationTask&, const IdentificationTask&) = default;
};

// Takes the first K-1 distinct decoys that differ from the true speaker and
// shuffles them with it under `seed`. Errors: InvalidArgument when K < 2 or a
// field is empty; InsufficientDecoys when fewer than K-1 usable decoys exist.
IdentificationTask build_identification_task(std::string id, std::string response, std::string truth,
                                             const std::vector<std::string>& decoys, std::size_t k,
                                             std::uint64_t seed);

// Fisher-Yates over mt19937_64 raw output.
void seeded_shuffle(std::vector<std::string>& items, std::uint64_t seed);

// InvalidArgument unless the answer is one of the task's options.
void record_answer(IdentificationTask& task, std::string answer);

struct ClassScore {
  std::string character;
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct IdentificationScore {
  std::vector<ClassScore> per_character;  // one per true-speaker label, sorted
  double macro_f1 = 0;
  std::size_t scored = 0;
  std::vector<std::string> unanswered;  // task ids skipped
};

// Macro F1 over the set of true speakers among answered tasks. A class with
// no predictions has precision 0; with no true instances it is not averaged.
IdentificationScore score_identification(const std::vector<IdentificationTask>& tasks);

nlohmann::ordered_json to_json(const IdentificationTask& t);
IdentificationTask identification_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const IdentificationScore& s);

}  // namespace kgdf::eval
