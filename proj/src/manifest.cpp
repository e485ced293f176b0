#include "fgc/manifest.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>

#include "fgc/csv.hpp"
#include "fgc/errors.hpp"
#include "fgc/hash.hpp"
#include "json.hpp"

namespace fgc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; i--) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace

std::string file_digest(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) {
    throw IoError("cannot open '" + path + "' for digest: " + std::strerror(errno));
  }
  std::uint64_t state = kFnvOffsetBasis;
  std::array<char, 1 << 20> buf;
  for (;;) {
    std::size_t got = std::fread(buf.data(), 1, buf.size(), f);
    if (got > 0) state = fnv1a64(buf.data(), got, state);
    if (got < buf.size()) {
      if (std::ferror(f) != 0) {
        std::fclose(f);
        throw IoError("read error while digesting '" + path + "'");
      }
      break;
    }
  }
  std::fclose(f);
  return to_hex(state);
}

std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

std::string manifest_to_json(const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  j["tool_version"] = manifest.tool_version;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["out_dir"] = manifest.out_dir;
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : manifest.config) config[key] = value;
  j["config"] = std::move(config);
  ordered_json inputs = ordered_json::array();
  for (const ManifestInput& in : manifest.inputs) {
    ordered_json item;
    item["key"] = in.key;
    item["path"] = in.path;
    item["digest"] = in.digest;
    inputs.push_back(std::move(item));
  }
  j["inputs"] = std::move(inputs);
  j["execution"] = ordered_json{{"created_at", manifest.created_at}};
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<int>();
    m.out_dir = j.at("out_dir").get<std::string>();
    for (const auto& [key, value] : j.at("config").items()) {
      m.config[key] = value.get<std::string>();
    }
    for (const auto& item : j.at("inputs")) {
      ManifestInput in;
      in.key = item.at("key").get<std::string>();
      in.path = item.at("path").get<std::string>();
      in.digest = item.at("digest").get<std::string>();
      m.inputs.push_back(std::move(in));
    }
    if (j.contains("execution") && j["execution"].contains("created_at")) {
      m.created_at = j["execution"]["created_at"].get<std::string>();
    }
    return m;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("manifest is missing required fields: ") + e.what());
  }
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  write_file(path, manifest_to_json(manifest));
}

RunManifest load_manifest(const std::string& path) {
  return manifest_from_json(read_file(path));
}

}  // namespace fgc
