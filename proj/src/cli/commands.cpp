#include "fgc/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <vector>

#include "config_util.hpp"
#include "fgc/benchmark.hpp"
#include "fgc/csv.hpp"
#include "fgc/dataset.hpp"
#include "fgc/distance_matrix.hpp"
#include "fgc/errors.hpp"
#include "fgc/forest.hpp"
#include "fgc/importance.hpp"
#include "fgc/kmedoids.hpp"
#include "fgc/manifest.hpp"
#include "fgc/model_selection.hpp"
#include "fgc/profile.hpp"
#include "fgc/report.hpp"
#include "fgc/simulate.hpp"
#include "fgc/version.hpp"
#include "json.hpp"

namespace fgc::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::string* find_key(const ConfigMap& cfg, const std::string& key) {
  auto it = cfg.find(key);
  return it == cfg.end() ? nullptr : &it->second;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    line_no++;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            " is not key=value: '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + " has an empty key");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string take_str(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                     const std::string& fallback) {
  const std::string* v = find_key(cfg, key);
  std::string out = v ? *v : fallback;
  used[key] = out;
  return out;
}

std::string take_required(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                          const std::string& verb) {
  const std::string* v = find_key(cfg, key);
  if (v == nullptr || v->empty()) {
    throw ValidationError("command '" + verb + "' requires --" + key);
  }
  used[key] = *v;
  return *v;
}

std::int64_t take_int(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                      std::int64_t fallback) {
  const std::string* v = find_key(cfg, key);
  if (v == nullptr) {
    used[key] = std::to_string(fallback);
    return fallback;
  }
  std::int64_t parsed = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ValidationError("value for '--" + key + "' must be an integer, got '" + *v + "'");
  }
  used[key] = *v;
  return parsed;
}

std::uint64_t take_u64(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                       std::uint64_t fallback) {
  const std::string* v = find_key(cfg, key);
  if (v == nullptr) {
    used[key] = std::to_string(fallback);
    return fallback;
  }
  std::uint64_t parsed = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ValidationError("value for '--" + key + "' must be a non-negative integer, got '" +
                          *v + "'");
  }
  used[key] = *v;
  return parsed;
}

std::size_t take_size(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                      std::size_t fallback) {
  return static_cast<std::size_t>(take_u64(cfg, used, key, fallback));
}

double take_double(const ConfigMap& cfg, ConfigMap& used, const std::string& key,
                   double fallback) {
  const std::string* v = find_key(cfg, key);
  if (v == nullptr) {
    used[key] = format_double(fallback);
    return fallback;
  }
  double parsed = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw ValidationError("value for '--" + key + "' must be a number, got '" + *v + "'");
  }
  used[key] = *v;
  return parsed;
}

bool take_bool(const ConfigMap& cfg, ConfigMap& used, const std::string& key, bool fallback) {
  const std::string* v = find_key(cfg, key);
  if (v == nullptr) {
    used[key] = fallback ? "true" : "false";
    return fallback;
  }
  if (*v == "true" || *v == "1" || *v == "yes") {
    used[key] = "true";
    return true;
  }
  if (*v == "false" || *v == "0" || *v == "no") {
    used[key] = "false";
    return false;
  }
  throw ValidationError("value for '--" + key + "' must be true or false, got '" + *v + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

namespace {

void ensure_out_dir(const std::string& dir) {
  if (dir.empty() || dir == ".") return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string default_schema_path(const std::string& data_path) {
  std::size_t dot = data_path.rfind('.');
  std::size_t slash = data_path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return data_path.substr(0, dot) + ".schema";
  }
  return data_path + ".schema";
}

void write_cmd_manifest(const CommandContext& ctx, const ConfigMap& used,
                        const std::vector<std::string>& input_keys) {
  RunManifest m;
  m.command = ctx.command;
  m.tool_version = kVersion;
  if (const std::string* seed = find_key(used, "seed")) {
    ConfigMap scratch;
    ConfigMap one{{"seed", *seed}};
    m.seed = take_u64(one, scratch, "seed", 0);
  }
  m.threads = ctx.threads;
  m.out_dir = ctx.out_dir;
  m.config = used;
  for (const std::string& key : input_keys) {
    const std::string* path = find_key(used, key);
    if (path == nullptr) continue;
    m.inputs.push_back({key, *path, file_digest(*path)});
  }
  m.created_at = utc_timestamp_now();
  save_manifest(m, join_path(ctx.out_dir, "manifest.json"));
}

Dataset load_dataset(const ConfigMap& cfg, ConfigMap& used, const std::string& verb) {
  std::string data = take_required(cfg, used, "data", verb);
  std::string schema = take_str(cfg, used, "schema", default_schema_path(data));
  return load_csv(data, schema);
}

ImportanceMetric take_metric(const ConfigMap& cfg, ConfigMap& used, const Dataset& ds) {
  std::string name = take_str(cfg, used, "metric", "auto");
  ImportanceMetric metric;
  if (name == "auto") {
    metric = default_metric(ds);
  } else if (name == "wasserstein") {
    metric = ImportanceMetric::wasserstein;
  } else if (name == "jensen-shannon") {
    metric = ImportanceMetric::jensen_shannon;
  } else {
    throw ValidationError("--metric must be auto, wasserstein, or jensen-shannon, got '" +
                          name + "'");
  }
  used["metric"] =
      metric == ImportanceMetric::wasserstein ? "wasserstein" : "jensen-shannon";
  return metric;
}

BinningBounds take_bins(const ConfigMap& cfg, ConfigMap& used) {
  BinningBounds bounds;
  bounds.min_bins = take_size(cfg, used, "min-bins", bounds.min_bins);
  bounds.max_bins = take_size(cfg, used, "max-bins", bounds.max_bins);
  return bounds;
}

// ---------------------------------------------------------------------------
// Serializers for the JSON artifacts.

std::string clustering_to_json(const ClusteringResult& res) {
  ordered_json j;
  j["k"] = res.k;
  std::vector<std::size_t> medoids;
  for (std::size_t m : res.medoids) medoids.push_back(m + 1);  // 1-based like the CSVs
  j["medoids"] = medoids;
  j["inertia"] = res.inertia;
  j["iterations_used"] = res.iterations_used;
  j["converged"] = res.converged;
  return j.dump(2) + "\n";
}

std::string kselection_to_json(const KSelectionReport& rep, const KSelectionConfig& cfg) {
  ordered_json j;
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["stability_threshold"] = cfg.threshold;
  if (rep.chosen_k.has_value()) {
    j["chosen_k"] = *rep.chosen_k;
  } else {
    j["chosen_k"] = nullptr;
    j["diagnostic"] = rep.diagnostic;
  }
  ordered_json candidates = ordered_json::array();
  for (const KSelectionEntry& entry : rep.entries) {
    ordered_json item;
    item["k"] = entry.k;
    item["bias"] = entry.bias;
    item["stability_mean"] = entry.stability.mean_jaccard;
    item["stable"] = entry.stability.stable;
    item["per_cluster_jaccard"] = entry.stability.per_cluster;
    item["inertia"] = entry.clustering.inertia;
    candidates.push_back(std::move(item));
  }
  j["candidates"] = std::move(candidates);
  return j.dump(2) + "\n";
}

std::string importance_to_csv(const ImportanceReport& rep) {
  std::string out = "# metric=";
  out += rep.metric == ImportanceMetric::wasserstein ? "wasserstein" : "jensen-shannon";
  out += '\n';
  auto flag_list = [](const std::vector<bool>& flags) {
    std::string s;
    for (std::size_t j = 0; j < flags.size(); j++) {
      if (!flags[j]) continue;
      if (!s.empty()) s += ',';
      s += std::to_string(j + 1);
    }
    return s;
  };
  out += "# all_zero_clusters=" + flag_list(rep.all_zero_cluster) + "\n";
  out += "# low_confidence_clusters=" + flag_list(rep.low_confidence_cluster) + "\n";
  out += "feature,global";
  for (std::size_t j = 0; j < rep.local.size(); j++) {
    out += ",local_" + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t f = 0; f < rep.features.size(); f++) {
    out += rep.features[f];
    out += ',';
    out += format_double(rep.global[f]);
    for (std::size_t j = 0; j < rep.local.size(); j++) {
      out += ',';
      out += format_double(rep.local[j][f]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verbs.

void cmd_simulate(const CommandContext& ctx) {
  ConfigMap used;
  std::uint64_t seed = take_u64(ctx.config, used, "seed", 0);
  SimulationResult sim = simulate_benchmark(seed);
  save_csv(sim.dataset, join_path(ctx.out_dir, "data.csv"),
           join_path(ctx.out_dir, "data.schema"));
  save_partition(sim.ground_truth, join_path(ctx.out_dir, "truth.csv"));
  write_cmd_manifest(ctx, used, {});
}

void cmd_train(const CommandContext& ctx) {
  ConfigMap used;
  Dataset ds = load_dataset(ctx.config, used, "train");
  TrainConfig tc;
  tc.n_trees = take_size(ctx.config, used, "trees", tc.n_trees);
  tc.max_depth = static_cast<int>(take_int(ctx.config, used, "max-depth", tc.max_depth));
  std::string mf = take_str(ctx.config, used, "max-features", "sqrt");
  if (mf == "sqrt") {
    tc.max_features = TrainConfig::MaxFeatures::sqrt_k;
  } else if (mf == "log2") {
    tc.max_features = TrainConfig::MaxFeatures::log2_k;
  } else if (mf == "all") {
    tc.max_features = TrainConfig::MaxFeatures::all;
  } else {
    std::size_t fixed = 0;
    auto [ptr, ec] = std::from_chars(mf.data(), mf.data() + mf.size(), fixed);
    if (ec != std::errc{} || ptr != mf.data() + mf.size() || fixed == 0) {
      throw ValidationError(
          "--max-features must be sqrt, log2, all, or a positive count, got '" + mf + "'");
    }
    tc.max_features = TrainConfig::MaxFeatures::fixed;
    tc.fixed_features = fixed;
  }
  tc.bootstrap_fraction =
      take_double(ctx.config, used, "bootstrap-fraction", tc.bootstrap_fraction);
  tc.min_samples_leaf =
      take_size(ctx.config, used, "min-samples-leaf", tc.min_samples_leaf);
  tc.seed = take_u64(ctx.config, used, "seed", 0);

  TrainResult result = train_forest(ds, tc, static_cast<unsigned>(ctx.threads));
  if (result.constant_model) {
    std::fputs("warning: the target is constant; every tree is a single leaf\n", stderr);
  }
  write_file(join_path(ctx.out_dir, "forest.json"), save_forest(result.model));
  write_cmd_manifest(ctx, used, {"data", "schema"});
}

void cmd_cluster(const CommandContext& ctx) {
  ConfigMap used;
  Dataset ds = load_dataset(ctx.config, used, "cluster");
  std::string forest_path = take_required(ctx.config, used, "forest", "cluster");
  ForestModel model = load_forest(read_file(forest_path));
  model.check_compatible(ds);

  int k = static_cast<int>(take_int(ctx.config, used, "k", 0));
  if (k < 2) throw ValidationError("command 'cluster' requires --k of at least 2");
  std::string algorithm = take_str(ctx.config, used, "algorithm", "pam");
  std::uint64_t seed = take_u64(ctx.config, used, "seed", 0);
  std::size_t max_iter = take_size(ctx.config, used, "max-iter", 100);
  std::string init = take_str(ctx.config, used, "init", "greedy");
  if (init != "greedy" && init != "random") {
    throw ValidationError("--init must be greedy or random, got '" + init + "'");
  }

  LeafMatrix leaves = apply_forest(model, ds, static_cast<unsigned>(ctx.threads));
  ClusteringResult result;
  if (algorithm == "clara") {
    ClaraConfig cc;
    cc.iterations = take_size(ctx.config, used, "clara-iterations", cc.iterations);
    cc.subsample_size = take_size(ctx.config, used, "clara-subsample", 0);
    cc.inner.k = k;
    cc.inner.max_iter = max_iter;
    cc.inner.init = init == "greedy" ? KMedoidsConfig::Init::greedy
                                     : KMedoidsConfig::Init::random;
    cc.seed = seed;
    result = clara(leaves, cc);
  } else if (algorithm == "pam" || algorithm == "pam-naive") {
    KMedoidsConfig kc;
    kc.k = k;
    kc.max_iter = max_iter;
    kc.variant = algorithm == "pam" ? KMedoidsConfig::Variant::pam_fast
                                    : KMedoidsConfig::Variant::pam_naive;
    kc.init = init == "greedy" ? KMedoidsConfig::Init::greedy
                               : KMedoidsConfig::Init::random;
    kc.seed = seed;
    std::string backend = take_str(ctx.config, used, "backend", "dense");
    if (backend == "dense") {
      DistanceMatrix dm =
          DistanceMatrix::dense_from_leaves(leaves, static_cast<unsigned>(ctx.threads));
      result = pam(dm, kc);
    } else if (backend == "memmap") {
      std::size_t budget_mb = take_size(ctx.config, used, "ram-budget-mb", 256);
      if (budget_mb == 0) throw ValidationError("--ram-budget-mb must be at least 1");
      DistanceMatrix dm = DistanceMatrix::memmap_from_leaves(
          leaves, join_path(ctx.out_dir, "distances.bin"),
          static_cast<unsigned>(ctx.threads), budget_mb << 20);
      result = pam(dm, kc);
    } else {
      throw ValidationError("--backend must be dense or memmap, got '" + backend + "'");
    }
  } else {
    throw ValidationError("--algorithm must be pam, pam-naive, or clara, got '" +
                          algorithm + "'");
  }

  save_partition(result.assignments, join_path(ctx.out_dir, "assignments.csv"));
  write_file(join_path(ctx.out_dir, "clustering.json"), clustering_to_json(result));
  write_cmd_manifest(ctx, used, {"data", "schema", "forest"});
}

void cmd_select_k(const CommandContext& ctx) {
  ConfigMap used;
  Dataset ds = load_dataset(ctx.config, used, "select-k");
  std::string forest_path = take_required(ctx.config, used, "forest", "select-k");
  ForestModel model = load_forest(read_file(forest_path));
  model.check_compatible(ds);

  KSelectionConfig sc;
  sc.k_min = static_cast<int>(take_int(ctx.config, used, "k-min", sc.k_min));
  sc.k_max = static_cast<int>(take_int(ctx.config, used, "k-max", sc.k_max));
  sc.threshold = take_double(ctx.config, used, "stability-threshold", sc.threshold);
  sc.bootstrap_iterations =
      take_size(ctx.config, used, "bootstrap-iterations", sc.bootstrap_iterations);
  sc.sample_fraction = take_double(ctx.config, used, "sample-fraction", sc.sample_fraction);
  sc.with_replacement = take_bool(ctx.config, used, "with-replacement", false);
  sc.inner.max_iter = take_size(ctx.config, used, "max-iter", sc.inner.max_iter);
  sc.seed = take_u64(ctx.config, used, "seed", 0);

  LeafMatrix leaves = apply_forest(model, ds, static_cast<unsigned>(ctx.threads));
  std::string backend = take_str(ctx.config, used, "backend", "dense");
  KSelectionReport report;
  if (backend == "dense") {
    DistanceMatrix dm =
        DistanceMatrix::dense_from_leaves(leaves, static_cast<unsigned>(ctx.threads));
    report = select_k(dm, ds.target, sc);
  } else if (backend == "memmap") {
    std::size_t budget_mb = take_size(ctx.config, used, "ram-budget-mb", 256);
    if (budget_mb == 0) throw ValidationError("--ram-budget-mb must be at least 1");
    DistanceMatrix dm = DistanceMatrix::memmap_from_leaves(
        leaves, join_path(ctx.out_dir, "distances.bin"),
        static_cast<unsigned>(ctx.threads), budget_mb << 20);
    report = select_k(dm, ds.target, sc);
  } else {
    throw ValidationError("--backend must be dense or memmap, got '" + backend + "'");
  }

  write_file(join_path(ctx.out_dir, "kselection.json"), kselection_to_json(report, sc));
  write_cmd_manifest(ctx, used, {"data", "schema", "forest"});
}

void cmd_importance(const CommandContext& ctx) {
  ConfigMap used;
  Dataset ds = load_dataset(ctx.config, used, "importance");
  std::string assignments_path = take_required(ctx.config, used, "assignments", "importance");
  Partition part = load_partition(assignments_path);
  ImportanceMetric metric = take_metric(ctx.config, used, ds);
  BinningBounds bounds = take_bins(ctx.config, used);

  ImportanceReport report = local_importance(ds, part, metric, bounds);
  write_file(join_path(ctx.out_dir, "importance.csv"), importance_to_csv(report));
  write_cmd_manifest(ctx, used, {"data", "schema", "assignments"});
}

void cmd_report(const CommandContext& ctx) {
  ConfigMap used;
  Dataset ds = load_dataset(ctx.config, used, "report");
  std::string assignments_path = take_required(ctx.config, used, "assignments", "report");
  Partition part = load_partition(assignments_path);
  ImportanceMetric metric = take_metric(ctx.config, used, ds);

  ReportOptions options;
  options.bins = take_bins(ctx.config, used);
  options.top_n = static_cast<int>(take_int(ctx.config, used, "top-n", options.top_n));
  options.pinned = split_list(take_str(ctx.config, used, "pin", ""));
  options.annotations = split_list(take_str(ctx.config, used, "annotations", ""));

  ImportanceReport importance = local_importance(ds, part, metric, options.bins);
  DecisionPathReport report = build_report(ds, part, importance, options);
  write_file(join_path(ctx.out_dir, "report.json"), report_to_json(report));
  write_file(join_path(ctx.out_dir, "heatmap.csv"), heatmap_to_csv(report));
  write_file(join_path(ctx.out_dir, "report.svg"), render_svg(report));
  write_cmd_manifest(ctx, used, {"data", "schema", "assignments"});
}

void cmd_benchmark(const CommandContext& ctx) {
  ConfigMap used;
  std::uint64_t seed = take_u64(ctx.config, used, "seed", 0);
  BenchmarkResult result = run_benchmark(seed, ctx.config, ctx.threads, &used);
  write_file(join_path(ctx.out_dir, "benchmark.json"), benchmark_to_json(result));
  std::fputs(benchmark_table(result).c_str(), stdout);
  write_cmd_manifest(ctx, used, {});
}

void cmd_profile(const CommandContext& ctx) {
  ConfigMap used;
  ProfileConfig pc;
  for (const std::string& item : split_list(take_str(ctx.config, used, "sizes", "1000,5000"))) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (ec != std::errc{} || ptr != item.data() + item.size() || n < 2) {
      throw ValidationError("--sizes entries must be integers of at least 2, got '" +
                            item + "'");
    }
    pc.sizes.push_back(n);
  }
  pc.construction = false;
  pc.cluster = false;
  for (const std::string& mode :
       split_list(take_str(ctx.config, used, "modes", "construction,cluster"))) {
    if (mode == "construction") {
      pc.construction = true;
    } else if (mode == "cluster") {
      pc.cluster = true;
    } else {
      throw ValidationError("--modes entries must be construction or cluster, got '" +
                            mode + "'");
    }
  }
  pc.k = static_cast<int>(take_int(ctx.config, used, "k", pc.k));
  pc.trees = take_size(ctx.config, used, "trees", pc.trees);
  std::size_t budget_mb = take_size(ctx.config, used, "ram-budget-mb", 64);
  if (budget_mb == 0) throw ValidationError("--ram-budget-mb must be at least 1");
  pc.ram_budget_bytes = budget_mb << 20;
  pc.seed = take_u64(ctx.config, used, "seed", 0);
  pc.scratch_dir = ctx.out_dir;

  std::vector<ProfileRow> rows = run_profile(pc, ctx.threads);
  std::string csv = profile_to_csv(rows);
  write_file(join_path(ctx.out_dir, "profile.csv"), csv);
  std::fputs(csv.c_str(), stdout);
  write_cmd_manifest(ctx, used, {});
}

void cmd_matrix_info(const CommandContext& ctx) {
  ConfigMap used;
  std::string path = take_required(ctx.config, used, "matrix", "matrix-info");
  MatrixFileInfo info = inspect_matrix_file(path);
  static const char* digits = "0123456789abcdef";
  std::string checksum(16, '0');
  std::uint64_t v = info.checksum;
  for (int i = 15; i >= 0; i--) {
    checksum[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  ordered_json j;
  j["magic_ok"] = info.magic_ok;
  j["version"] = info.version;
  j["n"] = info.n;
  j["file_size"] = info.file_size;
  j["expected_size"] = info.expected_size;
  j["checksum"] = checksum;
  std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
}

void cmd_replay(const CommandContext& ctx) {
  ConfigMap used;
  std::string manifest_path = take_required(ctx.config, used, "manifest", "replay");
  RunManifest m = load_manifest(manifest_path);
  if (m.command == "replay") {
    throw ValidationError("manifest records a replay; nothing to rerun");
  }
  if (m.tool_version != kVersion) {
    throw ValidationError("manifest was written by version " + m.tool_version +
                          " but this binary is " + kVersion);
  }
  for (const ManifestInput& input : m.inputs) {
    std::string digest = file_digest(input.path);
    if (digest != input.digest) {
      throw ValidationError("input '" + input.key + "' (" + input.path +
                            ") no longer matches the manifest digest");
    }
  }
  CommandContext sub;
  sub.command = m.command;
  sub.config = m.config;
  sub.out_dir = ctx.out_dir.empty() ? m.out_dir : ctx.out_dir;
  sub.threads = ctx.threads >= 1 ? ctx.threads : m.threads;
  run_command(sub);
}

}  // namespace

void run_command(const CommandContext& ctx) {
  const std::string& verb = ctx.command;
  bool writes_outputs = verb == "simulate" || verb == "train" || verb == "cluster" ||
                        verb == "select-k" || verb == "importance" || verb == "report" ||
                        verb == "benchmark" || verb == "profile";
  if (writes_outputs) {
    if (ctx.threads < 1) throw ValidationError("--threads must be at least 1");
    ensure_out_dir(ctx.out_dir);
  }
  if (verb == "simulate") return cmd_simulate(ctx);
  if (verb == "train") return cmd_train(ctx);
  if (verb == "cluster") return cmd_cluster(ctx);
  if (verb == "select-k") return cmd_select_k(ctx);
  if (verb == "importance") return cmd_importance(ctx);
  if (verb == "report") return cmd_report(ctx);
  if (verb == "benchmark") return cmd_benchmark(ctx);
  if (verb == "profile") return cmd_profile(ctx);
  if (verb == "matrix-info") return cmd_matrix_info(ctx);
  if (verb == "replay") return cmd_replay(ctx);
  throw ValidationError("unknown command '" + verb + "'");
}

}  // namespace fgc::cli
