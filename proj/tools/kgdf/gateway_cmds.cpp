#include <iostream>
#include <memory>

#include "commands.hpp"
#include "kgdf/error.hpp"
#include "kgdf/gateway/pipeline.hpp"
#include "kgdf/gateway/service.hpp"

namespace kgdf::cli {

void add_gateway_commands(CLI::App& app, Globals& g) {
  struct Pipeline {
    std::string scenarios, run;
  };
  auto pipe = std::make_shared<Pipeline>();
  auto* p = app.add_subcommand("pipeline", "subgraph, assemble, generate, annotate and select for a scenario file");
  p->add_option("--scenarios", pipe->scenarios)->required()->check(CLI::ExistingFile);
  p->add_option("--run", pipe->run, "run id (default: scenario file stem)");
  p->callback([pipe, &g] {
    const auto config = require_config(g);
    auto backend = gen::make_backend(gateway::selected_backend(config, g.offline));
    const auto run_id = pipe->run.empty() ? std::filesystem::path(pipe->scenarios).stem().string() : pipe->run;
    const auto report = gateway::run_pipeline(config, pipe->scenarios, run_id, *backend);
    std::cout << gateway::to_json(report).dump(2) << '\n';
    for (const auto& f : report.failures) std::cerr << f.scenario << " [" << f.stage << "] " << f.code << ": " << f.message << '\n';
    if (!report.ok()) exit_status() = 1;
  });

  auto* s = app.add_subcommand("serve", "serve the evaluation API");
  s->callback([&g] {
    const auto config = require_config(g);
    gateway::Service service(config, g.offline);
    service.bind();
    std::cerr << "listening on " << config.host << ":" << service.port() << '\n';
    service.run();
  });
}

}  // namespace kgdf::cli
