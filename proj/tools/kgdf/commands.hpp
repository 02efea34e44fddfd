#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "kgdf/gateway/config.hpp"

namespace kgdf::cli {

struct Globals {
  std::string config;
  bool offline = false;
};

// Loads --config; InvalidConfig when none was given.
gateway::ServiceConfig require_config(const Globals& g);

// Writes to `out` when set, otherwise to stdout.
void emit(const std::optional<std::string>& out, const std::string& text);

void add_kg_commands(CLI::App& app, Globals& g);
void add_ingest_commands(CLI::App& app, Globals& g);
void add_forge_commands(CLI::App& app, Globals& g);
void add_gen_commands(CLI::App& app, Globals& g);
void add_annotate_command(CLI::App& app, Globals& g);
void add_campaign_commands(CLI::App& app, Globals& g);
void add_ident_commands(CLI::App& app, Globals& g);
void add_gateway_commands(CLI::App& app, Globals& g);

// Exit status for the current command, set by commands that report partial
// failure without throwing.
inline int& exit_status() {
  static int status = 0;
  return status;
}

}  // namespace kgdf::cli
