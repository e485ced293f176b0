#pragma once

// Shared helpers for the CLI layer. Every take_* reads one key from the
// config bag (or falls back to a default), records the value it actually
// used into `used` so the manifest captures the fully resolved settings,
// and throws ValidationError on unparsable values.

#include <cstdint>
#include <string>
#include <vector>

#include "fgc/cli.hpp"

namespace fgc::cli {

std::string take_str(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                     const std::string& fallback);
std::string take_required(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                          const std::string& verb);
std::int64_t take_int(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                      std::int64_t fallback);
std::uint64_t take_u64(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                       std::uint64_t fallback);
std::size_t take_size(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                      std::size_t fallback);
double take_double(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                   double fallback);
bool take_bool(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
               bool fallback);

// Comma-separated list, entries trimmed, empties dropped.
std::vector<std::string> split_list(const std::string& text);

std::string join_path(const std::string& dir, const std::string& name);

}  // namespace fgc::cli
