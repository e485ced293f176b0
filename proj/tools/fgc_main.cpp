#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fgc/cli.hpp"
#include "fgc/errors.hpp"
#include "fgc/version.hpp"
#include "json.hpp"

namespace {

// Deferred argument bag for one subcommand; values land in the config map
// only when the flag was actually given, so config-file values survive.
struct PendingCommand {
  std::string name;
  fgc::cli::ConfigMap flags;
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
};

void add_key_option(CLI::App* cmd, const std::shared_ptr<PendingCommand>& pending,
                    const std::string& flag, const std::string& key,
                    const std::string& desc) {
  cmd->add_option_function<std::string>(
      flag, [pending, key](const std::string& value) { pending->flags[key] = value; },
      desc);
}

void add_key_option(CLI::App* cmd, const std::shared_ptr<PendingCommand>& pending,
                    const std::string& key, const std::string& desc) {
  add_key_option(cmd, pending, "--" + key, key, desc);
}

void print_structured_error(const char* type, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = nlohmann::ordered_json{{"type", type}, {"message", message}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster samples by random-forest decision paths and explain the clusters"};
  app.set_version_flag("--version", std::string("fgc ") + fgc::kVersion);
  app.require_subcommand(1);

  auto make_cmd = [&app](const std::string& name, const std::string& desc,
                         bool replay_defaults = false) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    auto pending = std::make_shared<PendingCommand>();
    pending->name = name;
    if (replay_defaults) {
      // Sentinels meaning "take the value recorded in the manifest".
      pending->out_dir = "";
      pending->threads = 0;
    }
    cmd->add_option("--out", pending->out_dir, "output directory");
    cmd->add_option("--threads", pending->threads, "worker thread cap");
    cmd->add_option("--config", pending->config_path, "key=value config file");
    add_key_option(cmd, pending, "seed", "master seed");
    cmd->callback([pending] {
      fgc::cli::ConfigMap config;
      if (!pending->config_path.empty()) {
        config = fgc::cli::load_config_file(pending->config_path);
      }
      for (const auto& [key, value] : pending->flags) config[key] = value;
      fgc::cli::CommandContext ctx;
      ctx.command = pending->name;
      ctx.config = std::move(config);
      ctx.out_dir = pending->out_dir;
      ctx.threads = pending->threads;
      fgc::cli::run_command(ctx);
    });
    return std::make_pair(cmd, pending);
  };

  make_cmd("simulate", "generate the simulated benchmark dataset");

  {
    auto [cmd, p] = make_cmd("train", "train a random forest on a CSV");
    add_key_option(cmd, p, "data", "input CSV path");
    add_key_option(cmd, p, "schema", "column-kind sidecar (default: <data>.schema)");
    add_key_option(cmd, p, "trees", "number of trees");
    add_key_option(cmd, p, "max-depth", "depth cap, -1 for unlimited");
    add_key_option(cmd, p, "max-features", "per-split feature draw: sqrt, log2, all, or a count");
    add_key_option(cmd, p, "bootstrap-fraction", "per-tree bootstrap sample fraction");
    add_key_option(cmd, p, "min-samples-leaf", "minimum rows per leaf");
  }

  {
    auto [cmd, p] = make_cmd("cluster", "cluster samples on forest proximities");
    add_key_option(cmd, p, "data", "input CSV path");
    add_key_option(cmd, p, "schema", "column-kind sidecar");
    add_key_option(cmd, p, "forest", "trained forest JSON");
    add_key_option(cmd, p, "k", "cluster count");
    add_key_option(cmd, p, "algorithm", "pam, pam-naive, or clara");
    add_key_option(cmd, p, "backend", "distance storage: dense or memmap");
    add_key_option(cmd, p, "max-iter", "swap sweep cap");
    add_key_option(cmd, p, "init", "medoid initialization: greedy or random");
    add_key_option(cmd, p, "ram-budget-mb", "block buffer size for the memmap backend");
    add_key_option(cmd, p, "clara-iterations", "clara subsample rounds");
    add_key_option(cmd, p, "clara-subsample", "clara subsample size, 0 for automatic");
  }

  {
    auto [cmd, p] = make_cmd("select-k", "score a k range by bias and stability");
    add_key_option(cmd, p, "data", "input CSV path");
    add_key_option(cmd, p, "schema", "column-kind sidecar");
    add_key_option(cmd, p, "forest", "trained forest JSON");
    add_key_option(cmd, p, "k-min", "smallest k to score");
    add_key_option(cmd, p, "k-max", "largest k to score");
    add_key_option(cmd, p, "stability-threshold", "minimum mean Jaccard to accept a k");
    add_key_option(cmd, p, "bootstrap-iterations", "resampling rounds per k");
    add_key_option(cmd, p, "sample-fraction", "rows drawn per resampling round");
    add_key_option(cmd, p, "with-replacement", "resample with replacement: true or false");
    add_key_option(cmd, p, "max-iter", "swap sweep cap for each clustering");
    add_key_option(cmd, p, "backend", "distance storage: dense or memmap");
    add_key_option(cmd, p, "ram-budget-mb", "block buffer size for the memmap backend");
  }

  {
    auto [cmd, p] = make_cmd("importance", "per-cluster and global feature importance");
    add_key_option(cmd, p, "data", "input CSV path");
    add_key_option(cmd, p, "schema", "column-kind sidecar");
    add_key_option(cmd, p, "assignments", "cluster assignments CSV");
    add_key_option(cmd, p, "metric", "auto, wasserstein, or jensen-shannon");
    add_key_option(cmd, p, "min-bins", "histogram bin floor");
    add_key_option(cmd, p, "max-bins", "histogram bin cap");
  }

  {
    auto [cmd, p] = make_cmd("report", "decision-path heatmap, panels, SVG");
    add_key_option(cmd, p, "data", "input CSV path");
    add_key_option(cmd, p, "schema", "column-kind sidecar");
    add_key_option(cmd, p, "assignments", "cluster assignments CSV");
    add_key_option(cmd, p, "metric", "auto, wasserstein, or jensen-shannon");
    add_key_option(cmd, p, "top-n", "feature cap by global importance");
    add_key_option(cmd, p, "pin", "comma-separated features to always include");
    add_key_option(cmd, p, "annotations", "comma-separated categorical columns to summarize");
    add_key_option(cmd, p, "min-bins", "histogram bin floor");
    add_key_option(cmd, p, "max-bins", "histogram bin cap");
  }

  {
    auto [cmd, p] = make_cmd("benchmark", "simulated comparison against two baselines");
    add_key_option(cmd, p, "trees", "forest size for the pipeline under test");
    add_key_option(cmd, p, "max-depth", "pipeline forest depth cap");
    add_key_option(cmd, p, "min-samples-leaf", "pipeline leaf size floor");
    add_key_option(cmd, p, "bootstrap-fraction", "pipeline bootstrap fraction");
    add_key_option(cmd, p, "sh-trees", "tree count for the real-vs-noise baseline");
    add_key_option(cmd, p, "k-min", "k range scored by the pipeline");
    add_key_option(cmd, p, "k-max", "k range scored by the pipeline");
    add_key_option(cmd, p, "stability-threshold", "stability bar for k selection");
    add_key_option(cmd, p, "bootstrap-iterations", "stability resampling rounds");
    add_key_option(cmd, p, "sample-fraction", "stability sample fraction");
    add_key_option(cmd, p, "baseline-k", "fixed k handed to both baselines");
  }

  {
    auto [cmd, p] = make_cmd("profile", "runtime/memory table for construction and clustering");
    add_key_option(cmd, p, "sizes", "comma-separated sample counts, ascending");
    add_key_option(cmd, p, "modes", "comma-separated subset of construction,cluster");
    add_key_option(cmd, p, "k", "cluster count for the clustering rows");
    add_key_option(cmd, p, "trees", "synthetic leaf matrix width");
    add_key_option(cmd, p, "ram-budget-mb", "block buffer size for the memmap backend");
  }

  {
    auto [cmd, p] = make_cmd("matrix-info", "inspect an on-disk distance matrix");
    add_key_option(cmd, p, "matrix", "matrix", "matrix file path");
  }

  {
    auto [cmd, p] = make_cmd("replay", "rerun a command from its manifest", true);
    add_key_option(cmd, p, "manifest", "manifest", "manifest.json path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const fgc::ValidationError& e) {
    print_structured_error("validation", e.what());
    return 2;
  } catch (const fgc::IoError& e) {
    print_structured_error("io", e.what());
    return 3;
  } catch (const fgc::InternalError& e) {
    print_structured_error("internal", e.what());
    return 4;
  } catch (const std::exception& e) {
    print_structured_error("internal", e.what());
    return 4;
  }
  return 0;
}
