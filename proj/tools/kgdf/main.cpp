#include <iostream>

#include "commands.hpp"
#include "kgdf/error.hpp"
#include "kgdf/text.hpp"

namespace kgdf::cli {

gateway::ServiceConfig require_config(const Globals& g) {
  if (g.config.empty()) throw Error(Errc::InvalidConfig, "this command needs --config <file>");
  return gateway::load_config(g.config);
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    const std::filesystem::path p(*out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    write_file(p, text);
  } else {
    std::cout << text;
  }
}

}  // namespace kgdf::cli

int main(int argc, char** argv) {
  using namespace kgdf::cli;
  CLI::App app{"kgdf: knowledge-grounded dialogue workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "service / pipeline configuration file");
  app.add_flag("--offline", g.offline, "force the scripted backend");

  add_kg_commands(app, g);
  add_ingest_commands(app, g);
  add_forge_commands(app, g);
  add_gen_commands(app, g);
  add_annotate_command(app, g);
  add_campaign_commands(app, g);
  add_ident_commands(app, g);
  add_gateway_commands(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const kgdf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_status();
}
