#pragma once

#include <map>
#include <string>

namespace fgc::cli {

// Flat key=value parameter bag. Every command reads all of its parameters
// from one of these, and the bag is recorded verbatim in the run manifest,
// which is what makes `replay` exact.
using ConfigMap = std::map<std::string, std::string>;

// key=value per line; '#' starts a comment, blank lines are skipped.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct CommandContext {
  std::string command;
  ConfigMap config;  // resolved: config file first, flags override
  std::string out_dir = ".";
  int threads = 1;
};

// Run one verb (simulate, train, cluster, select-k, importance, report,
// benchmark, profile, matrix-info, replay). Creates out_dir, writes the
// verb's fixed-name outputs plus manifest.json, throws fgc errors on any
// failure. Unknown verbs are a validation error.
void run_command(const CommandContext& ctx);

}  // namespace fgc::cli
