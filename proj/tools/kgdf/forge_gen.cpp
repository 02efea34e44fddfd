#include <iostream>
#include <map>
#include <memory>

#include "commands.hpp"
#include "kgdf/error.hpp"
#include "kgdf/gateway/pipeline.hpp"
#include "kgdf/gen/generate.hpp"
#include "kgdf/grounding/annotate.hpp"
#include "kgdf/kg/kg_file.hpp"
#include "kgdf/prompt/bundle.hpp"
#include "kgdf/prompt/persona.hpp"
#include "kgdf/text.hpp"

namespace kgdf::cli {

namespace {

std::string read_text(const std::string& path) { return std::string(trim(read_file(path))); }

void emit_bundle(const prompt::PromptBundle& b, const std::optional<std::string>& out, bool rendered) {
  if (rendered) std::cout << prompt::render(b) << '\n';
  if (out) prompt::save_bundle(b, *out);
  else if (!rendered) std::cout << prompt::to_json(b).dump(2) << '\n';
}

}  // namespace

void add_forge_commands(CLI::App& app, Globals&) {
  auto* forge = app.add_subcommand("forge", "assemble prompt bundles")->require_subcommand(1);

  struct Battle {
    std::string speaker, boss, scenario, kg, tmpl, id;
    std::vector<std::string> party;
    std::optional<int> health;
    std::optional<std::string> out;
    bool render = false;
  };
  auto battle = std::make_shared<Battle>();
  auto* b = forge->add_subcommand("battle", "battle prompt: speaker and boss triples plus a situation");
  b->add_option("--speaker", battle->speaker)->required();
  b->add_option("--boss", battle->boss)->required();
  b->add_option("--scenario", battle->scenario, "text file holding the situation")->required()->check(CLI::ExistingFile);
  b->add_option("--kg", battle->kg)->required()->check(CLI::ExistingFile);
  b->add_option("--template", battle->tmpl)->required()->check(CLI::ExistingFile);
  b->add_option("--party", battle->party, "\"Name: state\", repeatable");
  b->add_option("--boss-health", battle->health)->check(CLI::Range(0, 100));
  b->add_option("--id", battle->id, "scenario id (default <speaker>.<boss>)");
  b->add_option("--out", battle->out, "bundle JSON file");
  b->add_flag("--render", battle->render, "print the rendered prompt");
  b->callback([battle] {
    const auto graph = kg::load(battle->kg);
    prompt::BattleScenario body{battle->speaker, battle->boss, read_text(battle->scenario), {}, battle->health};
    for (const auto& note : battle->party) {
      const auto colon = note.find(':');
      if (colon == std::string::npos) throw Error(Errc::InvalidArgument, "--party expects \"Name: state\"");
      body.party.push_back({std::string(trim(note.substr(0, colon))), std::string(trim(note.substr(colon + 1)))});
    }
    auto id = battle->id.empty() ? to_lower_ascii(battle->speaker + "." + battle->boss) : battle->id;
    for (auto& c : id)
      if (c == ' ') c = '-';
    prompt::Scenario s{id, graph.game(), body};
    prompt::validate_scenario(s);
    emit_bundle(prompt::assemble_battle_prompt(kg::subgraph(graph, battle->speaker), kg::subgraph(graph, battle->boss),
                                               s, prompt::Template::load(battle->tmpl)),
                battle->out, battle->render);
  });

  struct Npc {
    std::string persona, npc, utterance, kg, tmpl, personas, id;
    std::optional<std::string> out;
    bool render = false;
  };
  auto npc = std::make_shared<Npc>();
  auto* n = forge->add_subcommand("npc", "persona prompt: persona, NPC triples and the NPC's line");
  n->add_option("--persona", npc->persona)->required();
  n->add_option("--npc", npc->npc)->required();
  n->add_option("--utterance", npc->utterance, "text file holding the NPC's line")->required()->check(CLI::ExistingFile);
  n->add_option("--kg", npc->kg)->required()->check(CLI::ExistingFile);
  n->add_option("--template", npc->tmpl)->required()->check(CLI::ExistingFile);
  n->add_option("--personas", npc->personas)->required()->check(CLI::ExistingFile);
  n->add_option("--id", npc->id, "scenario id (default red.<persona>.<npc>)");
  n->add_option("--out", npc->out, "bundle JSON file");
  n->add_flag("--render", npc->render, "print the rendered prompt");
  n->callback([npc] {
    const auto graph = kg::load(npc->kg);
    auto id = npc->id;
    if (id.empty()) {
      id = to_lower_ascii("red." + npc->persona + "." + npc->npc);
      std::string clean;
      for (char c : id)
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') clean += c;
        else if (c == ' ') clean += '-';
      id = clean;
    }
    // The utterance is kept byte for byte; only a trailing newline is dropped.
    auto line = read_file(npc->utterance);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    prompt::Scenario s{id, graph.game(), prompt::NpcScenario{npc->persona, npc->npc, line}};
    prompt::validate_scenario(s);
    const auto personas = prompt::PersonaSet::load(npc->personas);
    emit_bundle(prompt::assemble_npc_prompt(personas.find(npc->persona), kg::subgraph(graph, npc->npc), s,
                                            prompt::Template::load(npc->tmpl)),
                npc->out, npc->render);
  });
}

void add_gen_commands(CLI::App& app, Globals& g) {
  auto* gen = app.add_subcommand("gen", "generate and select candidate responses")->require_subcommand(1);

  struct Run {
    std::string bundle, backend;
    std::size_t n = gen::kDefaultCandidates;
    std::optional<std::string> out;
  };
  auto run = std::make_shared<Run>();
  auto* r = gen->add_subcommand("run", "sample n candidates for one bundle");
  r->add_option("--bundle", run->bundle)->required()->check(CLI::ExistingFile);
  r->add_option("-n", run->n)->check(CLI::PositiveNumber);
  r->add_option("--backend", run->backend, "backend name from the config (default: the config's backend)");
  r->add_option("--out", run->out, "responses JSONL file");
  r->callback([run, &g] {
    auto config = require_config(g);
    if (!run->backend.empty()) {
      if (!config.backends.count(run->backend)) throw Error(Errc::InvalidConfig, "no backend '" + run->backend + "'");
      config.backend = run->backend;
    }
    auto backend = gen::make_backend(gateway::selected_backend(config, g.offline));
    std::string lines;
    for (const auto& resp : gen::generate(prompt::load_bundle(run->bundle), run->n, *backend)) {
      if (resp.error) std::cerr << resp.id << ": " << *resp.error << '\n';
      lines += gen::to_json(resp).dump() + '\n';
    }
    emit(run->out, lines);
  });

  struct Select {
    std::string bundle, responses, strategy = "grounding";
    std::optional<std::size_t> index;
    std::optional<std::string> out, annotations;
  };
  auto select = std::make_shared<Select>();
  auto* s = gen->add_subcommand("select", "annotate candidates and pick one");
  s->add_option("--bundle", select->bundle)->required()->check(CLI::ExistingFile);
  s->add_option("--responses", select->responses, "responses JSONL from `gen run`")->required()->check(CLI::ExistingFile);
  s->add_option("--strategy", select->strategy)->check(CLI::IsMember({"grounding", "manual"}));
  s->add_option("--index", select->index, "candidate index for --strategy manual");
  s->add_option("--annotations", select->annotations, "also write annotations JSONL here");
  s->add_option("--out", select->out, "selection JSON file");
  s->callback([select] {
    const auto bundle = prompt::load_bundle(select->bundle);
    std::vector<gen::GeneratedResponse> responses;
    for (const auto& j : gateway::read_jsonl(select->responses)) responses.push_back(gen::response_from_json(j));
    const auto annotations = gen::annotate_candidates(bundle, responses);
    const auto sel =
        gen::select_best(responses, annotations, gen::strategy_from_string(select->strategy), select->index);
    if (select->annotations) {
      std::string lines;
      for (std::size_t i = 0; i < responses.size(); ++i)
        lines += grounding::to_json(annotations[i], responses[i].text).dump() + '\n';
      emit(select->annotations, lines);
    }
    emit(select->out, gen::to_json(sel).dump(2) + '\n');
  });

  struct Fixtures {
    std::vector<std::string> scenarios, responses;
    std::string out;
  };
  auto fixtures = std::make_shared<Fixtures>();
  auto* f = gen->add_subcommand("fixtures", "turn scenario-keyed responses into a prompt-hash fixture file");
  f->add_option("--scenarios", fixtures->scenarios, "scenario file, repeatable")->required()->check(CLI::ExistingFile);
  f->add_option("--responses", fixtures->responses, "{\"responses\": {scenario id: [text, ...]}}, one per --scenarios")
      ->required()
      ->check(CLI::ExistingFile);
  f->add_option("--out", fixtures->out)->required();
  f->callback([fixtures, &g] {
    if (fixtures->scenarios.size() != fixtures->responses.size())
      throw Error(Errc::InvalidArgument, "--scenarios and --responses must pair up");
    const auto config = require_config(g);
    std::map<std::string, gateway::GameResources> games;
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    std::size_t count = 0;
    for (std::size_t i = 0; i < fixtures->scenarios.size(); ++i) {
      std::vector<prompt::PromptBundle> bundles;
      for (const auto& sc : prompt::load_scenarios(fixtures->scenarios[i])) {
        if (!games.count(sc.game)) {
          if (!config.games.count(sc.game)) throw Error(Errc::InvalidConfig, "no game '" + sc.game + "' in config");
          games.emplace(sc.game, gateway::load_game(config.games.at(sc.game)));
        }
        bundles.push_back(gateway::build_bundle(sc, games.at(sc.game)));
      }
      const auto by_scenario = nlohmann::json::parse(read_file(fixtures->responses[i]))
                                   .at("responses")
                                   .get<std::map<std::string, std::vector<std::string>>>();
      for (const auto& [hash, list] : gen::author_fixtures(bundles, by_scenario)) {
        out[hash] = list;
        ++count;
      }
    }
    // Keys sorted so the file is stable across runs.
    nlohmann::json sorted = nlohmann::json::parse(out.dump());
    emit(fixtures->out, sorted.dump(2) + '\n');
    std::cerr << count << " prompt fixtures written to " << fixtures->out << '\n';
  });
}

void add_annotate_command(CLI::App& app, Globals&) {
  struct Annotate {
    std::string response, kg, scenario;
    std::vector<std::string> entities;
    std::optional<std::string> out;
    bool json_only = false;
  };
  auto a = std::make_shared<Annotate>();
  auto* c = app.add_subcommand("annotate", "label KNOWLEDGE and SITUATION spans in a response");
  c->add_option("--response", a->response, "text file")->required()->check(CLI::ExistingFile);
  c->add_option("--kg", a->kg)->required()->check(CLI::ExistingFile);
  c->add_option("--entities", a->entities, "entities whose triples count as knowledge")->required()->delimiter(',');
  c->add_option("--scenario", a->scenario, "text file holding the situation or utterance")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--out", a->out, "annotation JSON file (otherwise printed)");
  c->add_flag("--json-only", a->json_only, "skip the colored rendering");
  c->callback([a] {
    const auto graph = kg::load(a->kg);
    std::vector<kg::Triple> triples;
    for (const auto& e : a->entities) {
      auto sub = kg::subgraph(graph, std::string(trim(e)));
      triples.insert(triples.end(), sub.begin(), sub.end());
    }
    auto response = read_file(a->response);
    while (!response.empty() && (response.back() == '\n' || response.back() == '\r')) response.pop_back();
    const auto ann = grounding::annotate(response, grounding::build_knowledge_lexicon(triples),
                                         grounding::build_situation_lexicon(read_text(a->scenario)),
                                         std::filesystem::path(a->response).stem().string());
    emit(a->out, grounding::to_json(ann, response).dump(2) + '\n');
    if (!a->json_only) std::cout << grounding::render_ansi(response, ann) << '\n';
  });
}

}  // namespace kgdf::cli
