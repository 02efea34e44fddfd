#include "kgdf/eval/identification.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::eval {

void seeded_shuffle(std::vector<std::string>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng() % i]);
}

IdentificationTask build_identification_task(std::string id, std::string response, std::string truth,
                                             const std::vector<std::string>& decoys, std::size_t k,
                                             std::uint64_t seed) {
  if (k < 2) throw Error(Errc::InvalidArgument, "K must be at least 2");
  if (trim(id).empty() || trim(response).empty() || trim(truth).empty())
    throw Error(Errc::InvalidArgument, "identification task needs an id, a response and a true speaker");
  IdentificationTask t{std::move(id), std::move(response), {truth}, truth, seed, std::nullopt};
  std::set<std::string> used{truth};
  for (const auto& d : decoys) {
    if (t.options.size() == k) break;
    if (!trim(d).empty() && used.insert(d).second) t.options.push_back(d);
  }
  if (t.options.size() < k)
    throw Error(Errc::InsufficientDecoys, "task '" + t.id + "' needs " + std::to_string(k - 1) +
                                              " distinct decoys, got " + std::to_string(t.options.size() - 1));
  seeded_shuffle(t.options, seed);
  return t;
}

void record_answer(IdentificationTask& task, std::string answer) {
  if (std::find(task.options.begin(), task.options.end(), answer) == task.options.end())
    throw Error(Errc::InvalidArgument, "'" + answer + "' is not an option of task '" + task.id + "'");
  task.answer = std::move(answer);
}

IdentificationScore score_identification(const std::vector<IdentificationTask>& tasks) {
  IdentificationScore s;
  std::map<std::string, ClassScore> classes;
  std::map<std::string, std::size_t> predicted;
  for (const auto& t : tasks) {
    if (!t.answer) {
      s.unanswered.push_back(t.id);
      continue;
    }
    ++s.scored;
    auto& c = classes[t.truth];
    c.character = t.truth;
    if (*t.answer == t.truth) ++c.tp;
    else ++c.fn;
    ++predicted[*t.answer];
  }
  for (auto& [name, c] : classes) {
    c.fp = predicted[name] - c.tp;
    c.precision = c.tp + c.fp ? double(c.tp) / double(c.tp + c.fp) : 0.0;
    c.recall = double(c.tp) / double(c.tp + c.fn);
    c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
    s.macro_f1 += c.f1;
    s.per_character.push_back(c);
  }
  if (!classes.empty()) s.macro_f1 /= double(classes.size());
  return s;
}

nlohmann::ordered_json to_json(const IdentificationTask& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["response"] = t.response;
  j["options"] = t.options;
  j["truth"] = t.truth;
  j["seed"] = t.seed;
  j["answer"] = t.answer ? nlohmann::ordered_json(*t.answer) : nlohmann::ordered_json(nullptr);
  return j;
}

IdentificationTask identification_from_json(const nlohmann::json& j) {
  IdentificationTask t;
  try {
    t.id = j.at("id").get<std::string>();
    t.response = j.at("response").get<std::string>();
    t.options = j.at("options").get<std::vector<std::string>>();
    t.truth = j.at("truth").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("identification task: ") + e.what());
  }
  std::set<std::string> distinct(t.options.begin(), t.options.end());
  if (t.options.size() < 2 || distinct.size() != t.options.size() || !distinct.count(t.truth))
    throw Error(Errc::InvalidArgument, "task '" + t.id + "' options must be distinct, K >= 2, and include the truth");
  if (j.contains("answer") && !j["answer"].is_null()) record_answer(t, j["answer"].get<std::string>());
  return t;
}

nlohmann::ordered_json to_json(const IdentificationScore& s) {
  nlohmann::ordered_json j;
  j["macro_f1"] = s.macro_f1;
  j["scored"] = s.scored;
  j["unanswered"] = s.unanswered;
  j["per_character"] = nlohmann::ordered_json::array();
  for (const auto& c : s.per_character)
    j["per_character"].push_back({{"character", c.character},
                                  {"tp", c.tp},
                                  {"fp", c.fp},
                                  {"fn", c.fn},
                                  {"precision", c.precision},
                                  {"recall", c.recall},
                                  {"f1", c.f1}});
  return j;
}

}  // namespace kgdf::eval
