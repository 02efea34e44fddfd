#include "kgdf/eval/store.hpp"

#include <fstream>
#include <mutex>

#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::eval {

namespace {

std::string line(const char* type, nlohmann::ordered_json body) {
  nlohmann::ordered_json j;
  j["type"] = type;
  for (auto& [k, v] : body.items()) j[k] = v;
  return j.dump() + '\n';
}

}  // namespace

void CampaignStore::create(const std::filesystem::path& file, const Campaign& campaign) {
  if (std::filesystem::exists(file)) throw Error(Errc::IoError, file.string() + " already exists");
  std::string out = line("campaign", {{"id", campaign.id}});
  for (const auto& t : campaign.tasks) out += line("task", to_json(t));
  for (const auto& r : campaign.ratings) out += line("rating", to_json(r));
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  write_file(file, out);
}

CampaignStore::CampaignStore(std::filesystem::path file, gen::Clock clock)
    : file_(std::move(file)), clock_(std::move(clock)) {
  const auto lines = split_lines(read_file(file_));
  std::size_t n = 0;
  auto corrupt = [&](const std::string& why) {
    return Error(Errc::CorruptFile, file_.string() + " line " + std::to_string(n) + ": " + why);
  };
  for (const auto& raw : lines) {
    ++n;
    if (trim(raw).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
      throw corrupt("not JSON");
    }
    const auto type = j.value("type", "");
    try {
      if (n == 1) {
        if (type != "campaign") throw corrupt("missing campaign header");
        campaign_.id = j.at("id").get<std::string>();
      } else if (type == "task") {
        auto t = task_from_json(j);
        if (!campaign_.ratings.empty()) throw corrupt("task after ratings");
        if (!campaign_.tasks.empty() && !(campaign_.tasks.back().id < t.id)) throw corrupt("tasks out of order");
        campaign_.tasks.push_back(std::move(t));
      } else if (type == "rating") {
        submit_rating(campaign_, rating_from_json(j));
      } else {
        throw corrupt("unknown record type '" + type + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::CorruptFile) throw;
      throw corrupt(e.what());
    } catch (const nlohmann::json::exception& e) {
      throw corrupt(e.what());
    }
  }
  if (n == 0) throw corrupt("empty file");
}

Rating CampaignStore::submit(const std::string& task_id, const std::string& evaluator, double s1, double s2) {
  std::unique_lock lock(mutex_);
  const Rating stored = submit_rating(campaign_, {task_id, evaluator, s1, s2, clock_()});
  std::ofstream out(file_, std::ios::app | std::ios::binary);
  const auto record = line("rating", to_json(stored));
  out.write(record.data(), static_cast<std::streamsize>(record.size()));
  out.flush();
  if (!out) {
    campaign_.ratings.pop_back();
    throw Error(Errc::IoError, "cannot append to " + file_.string());
  }
  return stored;
}

Campaign CampaignStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return campaign_;
}

std::optional<EvalTask> CampaignStore::task(const std::string& task_id) const {
  std::shared_lock lock(mutex_);
  const auto* t = campaign_.find(task_id);
  return t ? std::optional<EvalTask>(*t) : std::nullopt;
}

std::optional<EvalTask> CampaignStore::next(const std::string& evaluator) const {
  std::shared_lock lock(mutex_);
  const auto* t = next_task(campaign_, evaluator);
  return t ? std::optional<EvalTask>(*t) : std::nullopt;
}

Progress CampaignStore::progress(const std::string& evaluator) const {
  std::shared_lock lock(mutex_);
  return eval::progress(campaign_, evaluator);
}

}  // namespace kgdf::eval
