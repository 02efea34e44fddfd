#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgdf/eval/campaign.hpp"

namespace kgdf::eval {

// Bins [1.0,2.5) [2.5,3.5) [3.5,4.5) [4.5,5.0].
inline constexpr std::array<double, 3> kBinEdges = {2.5, 3.5, 4.5};
using Histogram = std::array<std::size_t, 4>;
std::size_t bin_index(double mean) noexcept;

struct ResponseMean {
  std::string task_id;
  std::string persona;
  std::string counterpart;
  std::size_t ratings = 0;
  double s1 = 0;
  double s2 = 0;
};

struct PersonaMean {
  std::string persona;
  std::size_t responses = 0;
  double s1 = 0;
  double s2 = 0;
};

struct CampaignStats {
  Histogram s1_histogram{};
  Histogram s2_histogram{};
  std::vector<PersonaMean> personas;   // sorted by persona key
  std::vector<ResponseMean> responses; // rated responses, task id order
  std::size_t rating_count = 0;
  std::size_t response_count = 0;      // responses with at least one rating
  std::size_t task_count = 0;
};

// Per response, the mean over its evaluators; histograms and per-persona
// means are taken over those response means. NoRatings when nothing is rated.
CampaignStats compute_stats(const Campaign& campaign);

struct PersonaRanking {
  std::vector<std::string> s1;
  std::vector<std::string> s2;
};

// Descending by mean, ties alphabetical.
PersonaRanking rank_personas(const CampaignStats& stats);

nlohmann::ordered_json to_json(const CampaignStats& stats);
nlohmann::ordered_json to_json(const PersonaRanking& ranking);

// task_id,persona,counterpart,s1_mean,s2_mean
std::string export_csv(const CampaignStats& stats);

}  // namespace kgdf::eval
