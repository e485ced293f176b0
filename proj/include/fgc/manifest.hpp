#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fgc {

// One recorded input file: the config key naming it, its path, and the
// FNV-1a64 digest of its bytes at run time.
struct ManifestInput {
  std::string key;
  std::string path;
  std::string digest;  // 16 lowercase hex digits
};

// Everything needed to rerun a command bit-for-bit: the verb, the resolved
// key=value configuration, and digests of every input file. The timestamp
// sits under "execution" in the JSON and is ignored when comparing runs;
// thread count is recorded but never affects outputs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir;
  std::map<std::string, std::string> config;
  std::vector<ManifestInput> inputs;
  std::string created_at;  // ISO-8601 UTC
};

// Hex FNV-1a64 of a file's bytes, streamed in chunks.
std::string file_digest(const std::string& path);

std::string utc_timestamp_now();

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void save_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace fgc
