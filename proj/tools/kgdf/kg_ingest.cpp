#include <iostream>
#include <map>
#include <memory>

#include "commands.hpp"
#include "kgdf/error.hpp"
#include "kgdf/gen/backend.hpp"
#include "kgdf/ingest/curation.hpp"
#include "kgdf/ingest/extract.hpp"
#include "kgdf/ingest/profile.hpp"
#include "kgdf/kg/kg_file.hpp"
#include "kgdf/kg/ontology.hpp"
#include "kgdf/text.hpp"

namespace kgdf::cli {

void add_kg_commands(CLI::App& app, Globals&) {
  auto* kg = app.add_subcommand("kg", "knowledge graph files")->require_subcommand(1);

  struct Build {
    std::string game, ontology, triples, out;
  };
  auto build = std::make_shared<Build>();
  auto* b = kg->add_subcommand("build", "build a .kg file from a triple list");
  b->add_option("--game", build->game)->required();
  b->add_option("--ontology", build->ontology)->required()->check(CLI::ExistingFile);
  b->add_option("--triples", build->triples)->required()->check(CLI::ExistingFile);
  b->add_option("--out", build->out)->required();
  b->callback([build] {
    const auto ontology = kg::load_ontology(build->ontology);
    const auto graph = kg::graph_from_triple_list(build->game, ontology, read_file(build->triples),
                                                  std::filesystem::path(build->triples).filename().string());
    kg::persist(graph, build->out);
    std::cout << "wrote " << graph.size() << " triples, " << graph.index().size() << " entities to " << build->out
              << '\n';
  });

  struct Show {
    std::string file, entity;
    int depth = 1;
  };
  auto show = std::make_shared<Show>();
  auto* s = kg->add_subcommand("show", "print a graph or one entity's subgraph");
  s->add_option("file", show->file)->required()->check(CLI::ExistingFile);
  s->add_option("--entity", show->entity);
  s->add_option("--depth", show->depth)->check(CLI::Range(1, 2));
  s->callback([show] {
    const auto graph = kg::load(show->file);
    const auto triples = show->entity.empty() ? graph.triples() : kg::subgraph(graph, show->entity, show->depth);
    for (const auto& t : triples) std::cout << kg::serialize_triple(t) << '\n';
  });
}

void add_ingest_commands(CLI::App& app, Globals& g) {
  auto* ingest = app.add_subcommand("ingest", "profile ingestion and curation")->require_subcommand(1);

  struct Parse {
    std::string file, entity, concept_name;
    std::optional<std::string> out;
  };
  auto parse = std::make_shared<Parse>();
  auto* p = ingest->add_subcommand("parse", "turn a saved page into a profile JSON");
  p->add_option("file", parse->file)->required()->check(CLI::ExistingFile);
  p->add_option("--entity", parse->entity)->required();
  p->add_option("--concept", parse->concept_name)->required();
  p->add_option("--out", parse->out);
  p->callback([parse] {
    const auto result = ingest::parse_profile_page(read_file(parse->file), parse->entity, parse->concept_name,
                                                   std::filesystem::path(parse->file).filename().string());
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    emit(parse->out, ingest::to_json(result.profile).dump(2) + '\n');
  });

  struct Extract {
    std::string profile, queue, rules, ontology;
    bool pattern = false, llm = false;
  };
  auto extract = std::make_shared<Extract>();
  auto* e = ingest->add_subcommand("extract", "extract candidate triples into a curation queue");
  e->add_option("profile", extract->profile)->required()->check(CLI::ExistingFile);
  auto* pat = e->add_flag("--pattern", extract->pattern, "rule-based extraction (needs --rules)");
  auto* llm = e->add_flag("--llm", extract->llm, "LLM extraction (needs --ontology and --config)");
  pat->excludes(llm);
  e->add_option("--rules", extract->rules)->check(CLI::ExistingFile);
  e->add_option("--ontology", extract->ontology)->check(CLI::ExistingFile);
  e->add_option("--queue", extract->queue)->required();
  e->callback([extract, &g] {
    const auto profile = ingest::profile_from_json(nlohmann::json::parse(read_file(extract->profile)));
    auto queue = std::filesystem::exists(extract->queue) ? ingest::load_queue(extract->queue) : ingest::CurationQueue{};
    std::vector<ingest::CandidateTriple> found;
    if (extract->llm) {
      if (extract->ontology.empty()) throw Error(Errc::InvalidArgument, "--llm needs --ontology");
      const auto config = require_config(g);
      auto backend = gen::make_backend(gateway::selected_backend(config, g.offline));
      auto result = ingest::extract_triples_llm(profile, kg::load_ontology(extract->ontology), *backend);
      for (const auto& m : result.report.malformed) std::cerr << "dropped malformed line: " << m << '\n';
      found = std::move(result.candidates);
    } else {
      if (extract->rules.empty()) throw Error(Errc::InvalidArgument, "--pattern needs --rules");
      found = ingest::extract_triples_pattern(profile, ingest::RuleSet::load(extract->rules));
    }
    const auto n = found.size();
    queue.add_all(std::move(found));
    ingest::save_queue(queue, extract->queue);
    std::cout << n << " candidates queued in " << extract->queue << '\n';
  });

  struct Curate {
    std::string queue, kg, game, ontology;
    bool accept_all = false;
    std::vector<std::string> decisions;
  };
  auto curate = std::make_shared<Curate>();
  auto* c = ingest->add_subcommand("curate", "accept or reject pending candidates (interactive by default)");
  c->add_option("queue", curate->queue)->required()->check(CLI::ExistingFile);
  c->add_option("--kg", curate->kg, "graph the accepted triples will be validated against")
      ->check(CLI::ExistingFile);
  c->add_option("--game", curate->game, "validate against an empty graph of this game (without --kg)");
  c->add_option("--ontology", curate->ontology, "ontology for --game")->check(CLI::ExistingFile);
  c->add_flag("--accept-all", curate->accept_all);
  c->add_option("--decide", curate->decisions, "<id>=accept|reject, repeatable");
  c->callback([curate] {
    auto queue = ingest::load_queue(curate->queue);
    const auto graph = [&] {
      if (!curate->kg.empty()) return kg::load(curate->kg);
      if (curate->game.empty() || curate->ontology.empty())
        throw Error(Errc::InvalidArgument, "pass --kg, or --game and --ontology");
      return kg::KnowledgeGraph(curate->game, kg::load_ontology(curate->ontology));
    }();
    auto decide = [&](const std::string& id, ingest::Decision d, const std::string& note) {
      try {
        ingest::curate(queue, id, d, note, graph);
      } catch (const Error& err) {
        std::cerr << id << ": " << err.what() << '\n';
      }
    };
    if (curate->accept_all || !curate->decisions.empty()) {
      for (const auto& spec : curate->decisions) {
        const auto eq = spec.find('=');
        const auto verdict = eq == std::string::npos ? "" : spec.substr(eq + 1);
        if (verdict != "accept" && verdict != "reject")
          throw Error(Errc::InvalidArgument, "--decide expects <id>=accept|reject, got '" + spec + "'");
        decide(spec.substr(0, eq), verdict == "accept" ? ingest::Decision::Accept : ingest::Decision::Reject, "");
      }
      if (curate->accept_all)
        for (const auto& cand : queue.candidates())
          if (cand.status == ingest::CandidateStatus::Pending) decide(cand.id, ingest::Decision::Accept, "");
    } else {
      for (const auto& cand : queue.candidates()) {
        if (cand.status != ingest::CandidateStatus::Pending) continue;
        std::cout << cand.id << "  " << kg::serialize_triple(cand.triple) << "  [" << to_string(cand.extractor)
                  << "]\n  (a)ccept, (r)eject, (s)kip, (q)uit > " << std::flush;
        std::string answer;
        if (!std::getline(std::cin, answer) || answer == "q") break;
        if (answer == "a") decide(cand.id, ingest::Decision::Accept, "");
        else if (answer == "r") decide(cand.id, ingest::Decision::Reject, "");
      }
    }
    ingest::save_queue(queue, curate->queue);
    std::map<std::string, int> counts;
    for (const auto& cand : queue.candidates()) ++counts[std::string(to_string(cand.status))];
    for (const auto& [status, n] : counts) std::cout << status << ": " << n << '\n';
  });

  struct Promote {
    std::string queue, kg, game, ontology;
  };
  auto promote = std::make_shared<Promote>();
  auto* pr = ingest->add_subcommand("promote", "insert accepted candidates into a .kg file");
  pr->add_option("queue", promote->queue)->required()->check(CLI::ExistingFile);
  pr->add_option("kg-file", promote->kg)->required();
  pr->add_option("--game", promote->game, "for a new graph");
  pr->add_option("--ontology", promote->ontology, "for a new graph")->check(CLI::ExistingFile);
  pr->callback([promote] {
    const auto queue = ingest::load_queue(promote->queue);
    auto graph = [&] {
      if (std::filesystem::exists(promote->kg)) return kg::load(promote->kg);
      if (promote->game.empty() || promote->ontology.empty())
        throw Error(Errc::InvalidArgument, promote->kg + " does not exist; pass --game and --ontology to create it");
      return kg::KnowledgeGraph(promote->game, kg::load_ontology(promote->ontology));
    }();
    const auto report = ingest::promote_accepted(queue, graph);
    kg::persist(graph, promote->kg);
    std::cout << "inserted " << report.inserted << ", duplicate " << report.duplicate << ", rejected "
              << report.rejected_skipped << ", pending " << report.pending_skipped << ", failed "
              << report.failed.size() << '\n';
    if (!report.failed.empty()) exit_status() = 1;
  });
}

}  // namespace kgdf::cli
