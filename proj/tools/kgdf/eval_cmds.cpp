#include <iostream>
#include <memory>

#include "commands.hpp"
#include "kgdf/error.hpp"
#include "kgdf/eval/identification.hpp"
#include "kgdf/eval/stats.hpp"
#include "kgdf/eval/store.hpp"
#include "kgdf/gateway/pipeline.hpp"
#include "kgdf/text.hpp"

namespace kgdf::cli {

namespace {

std::filesystem::path campaign_path(const Globals& g, const std::string& file) {
  if (!file.empty()) return file;
  return gateway::campaign_file(require_config(g));
}

std::vector<eval::IdentificationTask> load_ident(const std::string& path) {
  std::vector<eval::IdentificationTask> tasks;
  const auto doc = nlohmann::json::parse(read_file(path));
  for (const auto& j : doc.at("tasks")) tasks.push_back(eval::identification_from_json(j));
  return tasks;
}

std::string ident_file_text(const std::vector<eval::IdentificationTask>& tasks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : tasks) arr.push_back(eval::to_json(t));
  return nlohmann::ordered_json{{"tasks", arr}}.dump(2) + '\n';
}

}  // namespace

void add_campaign_commands(CLI::App& app, Globals& g) {
  auto* campaign = app.add_subcommand("campaign", "human evaluation campaigns")->require_subcommand(1);
  auto file = std::make_shared<std::string>();
  campaign->add_option("--file", *file, "campaign JSONL file (default: from --config)");

  struct Create {
    std::string id, speaker = "Red";
    std::vector<std::string> runs, scenarios;
    std::optional<std::size_t> size;
  };
  auto create = std::make_shared<Create>();
  auto* c = campaign->add_subcommand("create", "build a campaign from the selected responses of pipeline runs");
  c->add_option("--id", create->id, "campaign id (default: the config's campaign)");
  c->add_option("--run", create->runs, "run directory, repeatable")->required()->check(CLI::ExistingDirectory);
  c->add_option("--scenarios", create->scenarios, "scenario file for each --run")->required()->check(CLI::ExistingFile);
  c->add_option("--speaker", create->speaker, "character whose responses are rated");
  c->add_option("--size", create->size, "expected number of tasks");
  c->callback([create, file, &g] {
    if (create->runs.size() != create->scenarios.size())
      throw Error(Errc::InvalidArgument, "--run and --scenarios must pair up");
    auto id = create->id;
    if (id.empty()) id = require_config(g).campaign;
    std::vector<eval::CampaignEntry> entries;
    for (std::size_t i = 0; i < create->runs.size(); ++i) {
      auto part = gateway::campaign_entries(create->runs[i], prompt::load_scenarios(create->scenarios[i]));
      entries.insert(entries.end(), part.begin(), part.end());
    }
    const auto built = eval::create_campaign(id, entries, {create->speaker, create->size});
    const auto path = campaign_path(g, *file);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    eval::CampaignStore::create(path, built);
    std::cout << "campaign " << built.id << ": " << built.tasks.size() << " tasks in " << path.string() << '\n';
  });

  struct Rate {
    std::string task, evaluator;
    double s1 = 0, s2 = 0;
  };
  auto rate = std::make_shared<Rate>();
  auto* r = campaign->add_subcommand("rate", "record one rating");
  r->add_option("--task", rate->task)->required();
  r->add_option("--evaluator", rate->evaluator)->required();
  r->add_option("--s1", rate->s1)->required();
  r->add_option("--s2", rate->s2)->required();
  r->callback([rate, file, &g] {
    eval::CampaignStore store(campaign_path(g, *file));
    std::cout << eval::to_json(store.submit(rate->task, rate->evaluator, rate->s1, rate->s2)).dump() << '\n';
  });

  auto next_evaluator = std::make_shared<std::string>();
  auto* n = campaign->add_subcommand("next", "show the next unrated task for an evaluator");
  n->add_option("--evaluator", *next_evaluator)->required();
  n->callback([next_evaluator, file, &g] {
    eval::CampaignStore store(campaign_path(g, *file));
    const auto task = store.next(*next_evaluator);
    const auto p = store.progress(*next_evaluator);
    if (!task) {
      std::cout << "done (" << p.rated << "/" << p.total << ")\n";
      return;
    }
    std::cout << eval::to_json(*task).dump(2) << '\n';
  });

  auto stats_out = std::make_shared<std::optional<std::string>>();
  auto* s = campaign->add_subcommand("stats", "histograms and per-persona means");
  s->add_option("--out", *stats_out);
  s->callback([stats_out, file, &g] {
    eval::CampaignStore store(campaign_path(g, *file));
    emit(*stats_out, eval::to_json(eval::compute_stats(store.snapshot())).dump(2) + '\n');
  });

  auto* k = campaign->add_subcommand("rank", "personas ordered by mean S1 and S2");
  k->callback([file, &g] {
    eval::CampaignStore store(campaign_path(g, *file));
    const auto ranking = eval::rank_personas(eval::compute_stats(store.snapshot()));
    std::cout << eval::to_json(ranking).dump(2) << '\n';
  });

  struct Export {
    std::string format = "csv";
    std::optional<std::string> out;
  };
  auto exp = std::make_shared<Export>();
  auto* e = campaign->add_subcommand("export", "per-response means as CSV or JSON");
  e->add_option("--format", exp->format)->check(CLI::IsMember({"csv", "json"}));
  e->add_option("--out", exp->out);
  e->callback([exp, file, &g] {
    eval::CampaignStore store(campaign_path(g, *file));
    const auto stats = eval::compute_stats(store.snapshot());
    emit(exp->out, exp->format == "csv" ? eval::export_csv(stats) : eval::to_json(stats).dump(2) + '\n');
  });
}

void add_ident_commands(CLI::App& app, Globals&) {
  auto* ident = app.add_subcommand("ident", "speaker identification tasks")->require_subcommand(1);

  struct Build {
    std::string items, out;
    std::size_t k = 4;
    std::uint64_t seed = 0;
  };
  auto build = std::make_shared<Build>();
  auto* b = ident->add_subcommand("build", "shuffle K candidate speakers for each response");
  b->add_option("--items", build->items, "{\"roster\": [names], \"items\": [{id, response, truth}]}")
      ->required()
      ->check(CLI::ExistingFile);
  b->add_option("-k", build->k, "options per task, truth included");
  b->add_option("--seed", build->seed, "base seed; task i uses seed + i");
  b->add_option("--out", build->out)->required();
  b->callback([build] {
    const auto j = nlohmann::json::parse(read_file(build->items));
    const auto roster = j.at("roster").get<std::vector<std::string>>();
    std::vector<eval::IdentificationTask> tasks;
    std::uint64_t i = 0;
    for (const auto& item : j.at("items")) {
      const auto truth = item.at("truth").get<std::string>();
      std::vector<std::string> decoys;
      for (const auto& name : roster)
        if (name != truth) decoys.push_back(name);
      tasks.push_back(eval::build_identification_task(item.at("id").get<std::string>(),
                                                      item.at("response").get<std::string>(), truth, decoys,
                                                      build->k, build->seed + i++));
    }
    emit(build->out, ident_file_text(tasks));
    std::cout << tasks.size() << " tasks written to " << build->out << '\n';
  });

  struct Answer {
    std::string file, id, answer;
  };
  auto answer = std::make_shared<Answer>();
  auto* a = ident->add_subcommand("answer", "record the evaluator's pick for one task");
  a->add_option("tasks", answer->file)->required()->check(CLI::ExistingFile);
  a->add_option("--id", answer->id)->required();
  a->add_option("--answer", answer->answer)->required();
  a->callback([answer] {
    auto tasks = load_ident(answer->file);
    auto it = std::find_if(tasks.begin(), tasks.end(), [&](const auto& t) { return t.id == answer->id; });
    if (it == tasks.end()) throw Error(Errc::UnknownTask, "no identification task '" + answer->id + "'");
    eval::record_answer(*it, answer->answer);
    write_file(answer->file, ident_file_text(tasks));
  });

  auto score_file = std::make_shared<std::string>();
  auto* s = ident->add_subcommand("score", "per-character F1 and macro F1");
  s->add_option("tasks", *score_file)->required()->check(CLI::ExistingFile);
  s->callback([score_file] {
    std::cout << eval::to_json(eval::score_identification(load_ident(*score_file))).dump(2) << '\n';
  });
}

}  // namespace kgdf::cli
