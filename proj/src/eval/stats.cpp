#include "kgdf/eval/stats.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kgdf/error.hpp"

namespace kgdf::eval {

std::size_t bin_index(double mean) noexcept {
  std::size_t i = 0;
  while (i < kBinEdges.size() && mean >= kBinEdges[i]) ++i;
  return i;
}

CampaignStats compute_stats(const Campaign& campaign) {
  if (campaign.ratings.empty()) throw Error(Errc::NoRatings, "campaign '" + campaign.id + "' has no ratings");
  struct Sum {
    std::size_t n = 0;
    double s1 = 0, s2 = 0;
  };
  std::map<std::string, Sum> sums;
  for (const auto& r : campaign.ratings) {
    auto& s = sums[r.task_id];
    ++s.n;
    s.s1 += r.s1;
    s.s2 += r.s2;
  }

  CampaignStats st;
  st.rating_count = campaign.ratings.size();
  st.task_count = campaign.tasks.size();
  std::map<std::string, PersonaMean> personas;
  for (const auto& t : campaign.tasks) {
    auto it = sums.find(t.id);
    if (it == sums.end()) continue;
    const auto& s = it->second;
    ResponseMean m{t.id, t.persona, t.counterpart, s.n, s.s1 / s.n, s.s2 / s.n};
    ++st.s1_histogram[bin_index(m.s1)];
    ++st.s2_histogram[bin_index(m.s2)];
    auto& p = personas[t.persona];
    p.persona = t.persona;
    ++p.responses;
    p.s1 += m.s1;
    p.s2 += m.s2;
    st.responses.push_back(std::move(m));
  }
  st.response_count = st.responses.size();
  for (auto& [key, p] : personas) {
    p.s1 /= p.responses;
    p.s2 /= p.responses;
    st.personas.push_back(p);
  }
  return st;
}

PersonaRanking rank_personas(const CampaignStats& stats) {
  auto rank = [&](double PersonaMean::*field) {
    std::vector<const PersonaMean*> v;
    for (const auto& p : stats.personas) v.push_back(&p);
    std::sort(v.begin(), v.end(), [&](const PersonaMean* a, const PersonaMean* b) {
      if (a->*field != b->*field) return a->*field > b->*field;
      return a->persona < b->persona;
    });
    std::vector<std::string> out;
    for (const auto* p : v) out.push_back(p->persona);
    return out;
  };
  return {rank(&PersonaMean::s1), rank(&PersonaMean::s2)};
}

nlohmann::ordered_json to_json(const CampaignStats& st) {
  nlohmann::ordered_json j;
  j["rating_count"] = st.rating_count;
  j["response_count"] = st.response_count;
  j["task_count"] = st.task_count;
  j["bins"] = {"[1.0,2.5)", "[2.5,3.5)", "[3.5,4.5)", "[4.5,5.0]"};
  j["histogram"] = {{"s1", st.s1_histogram}, {"s2", st.s2_histogram}};
  j["personas"] = nlohmann::ordered_json::array();
  for (const auto& p : st.personas)
    j["personas"].push_back({{"persona", p.persona}, {"responses", p.responses}, {"s1", p.s1}, {"s2", p.s2}});
  j["ranking"] = to_json(rank_personas(st));
  return j;
}

nlohmann::ordered_json to_json(const PersonaRanking& r) { return {{"s1", r.s1}, {"s2", r.s2}}; }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string export_csv(const CampaignStats& stats) {
  std::ostringstream out;
  out.precision(17);
  out << "task_id,persona,counterpart,s1_mean,s2_mean\n";
  for (const auto& m : stats.responses)
    out << csv_field(m.task_id) << ',' << csv_field(m.persona) << ',' << csv_field(m.counterpart) << ',' << m.s1
        << ',' << m.s2 << '\n';
  return out.str();
}

}  // namespace kgdf::eval
