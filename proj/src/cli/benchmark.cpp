#include "fgc/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "config_util.hpp"
#include "fgc/csv.hpp"
#include "fgc/dataset.hpp"
#include "fgc/distance_matrix.hpp"
#include "fgc/errors.hpp"
#include "fgc/forest.hpp"
#include "fgc/kmedoids.hpp"
#include "fgc/model_selection.hpp"
#include "fgc/rand.hpp"
#include "fgc/simulate.hpp"
#include "json.hpp"

namespace fgc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Plain k-medoids on Euclidean distances over standardized numeric columns;
// categorical columns enter as their raw integer codes (0/1 for the binary
// noise feature), unstandardized.
Partition euclidean_kmedoids(const Dataset& data, int k, std::size_t max_iter,
                             std::uint64_t seed) {
  const std::size_t n = data.row_count;
  StandardizeResult st = standardize(data);
  std::vector<std::vector<double>> columns;
  for (const FeatureColumn& col : st.data.columns) {
    if (col.kind == FeatureKind::numeric) {
      columns.push_back(col.numeric);
    } else {
      std::vector<double> as_double(col.codes.begin(), col.codes.end());
      columns.push_back(std::move(as_double));
    }
  }
  std::vector<float> values(n * n, 0.0f);
  for (std::size_t i = 0; i < n; i++) {
    for (std::size_t j = i + 1; j < n; j++) {
      double sum = 0.0;
      for (const auto& col : columns) {
        double d = col[i] - col[j];
        sum += d * d;
      }
      float dist = static_cast<float>(std::sqrt(sum));
      values[i * n + j] = dist;
      values[j * n + i] = dist;
    }
  }
  DistanceMatrix dm = DistanceMatrix::from_values(n, std::move(values));
  KMedoidsConfig kc;
  kc.k = k;
  kc.max_iter = max_iter;
  kc.seed = seed;
  // Random starting medoids, matching the usual k-medoids package default.
  kc.init = KMedoidsConfig::Init::random;
  return pam(dm, kc).assignments;
}

void check_ari(double ari, const char* method) {
  if (!(ari >= -1.0 - 1e-9 && ari <= 1.0 + 1e-9)) {
    throw InternalError(std::string("ARI for ") + method + " is outside [-1, 1]");
  }
}

}  // namespace

BenchmarkResult run_benchmark(std::uint64_t seed, const ConfigMap& config, int threads,
                              ConfigMap* resolved_out) {
  if (threads < 1) throw ValidationError("--threads must be at least 1");
  ConfigMap scratch;
  ConfigMap& used = resolved_out != nullptr ? *resolved_out : scratch;
  const unsigned th = static_cast<unsigned>(threads);

  std::size_t trees = take_size(config, used, "trees", 300);
  // Shallow trees with a coarse leaf floor: deep trees place every cluster in
  // its own leaf, which makes all cross-cluster proximities vanish and lets a
  // merged 3-cluster solution look as unbiased as the true 4-way split.
  // Depth-limited trees leave class 2 sharing leaves with one subclass or
  // another, so only k = 4 separates the classes cleanly.
  int max_depth = static_cast<int>(take_int(config, used, "max-depth", 3));
  std::size_t min_leaf = take_size(config, used, "min-samples-leaf", 25);
  double bootstrap_fraction = take_double(config, used, "bootstrap-fraction", 1.0);
  std::size_t sh_trees = take_size(config, used, "sh-trees", 2000);
  int k_min = static_cast<int>(take_int(config, used, "k-min", 2));
  int k_max = static_cast<int>(take_int(config, used, "k-max", 8));
  double threshold = take_double(config, used, "stability-threshold", 0.6);
  std::size_t bootstraps = take_size(config, used, "bootstrap-iterations", 100);
  double sample_fraction = take_double(config, used, "sample-fraction", 0.8);
  int baseline_k = static_cast<int>(take_int(config, used, "baseline-k", 4));

  BenchmarkResult out;
  out.seed = seed;
  SimulationResult sim = simulate_benchmark(seed);

  {
    auto start = Clock::now();
    TrainConfig tc;
    tc.n_trees = trees;
    tc.max_depth = max_depth;
    tc.min_samples_leaf = min_leaf;
    tc.bootstrap_fraction = bootstrap_fraction;
    tc.seed = derive_seed(seed, "benchmark.train", 0);
    TrainResult trained = train_forest(sim.dataset, tc, th);
    LeafMatrix leaves = apply_forest(trained.model, sim.dataset, th);
    DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaves, th);
    KSelectionConfig sc;
    sc.k_min = k_min;
    sc.k_max = k_max;
    sc.threshold = threshold;
    sc.bootstrap_iterations = bootstraps;
    sc.sample_fraction = sample_fraction;
    sc.seed = derive_seed(seed, "benchmark.select", 0);
    KSelectionReport report = select_k(dm, sim.dataset.target, sc);
    const KSelectionEntry* pick = nullptr;
    if (report.chosen_k.has_value()) {
      for (const KSelectionEntry& entry : report.entries) {
        if (entry.k == *report.chosen_k) pick = &entry;
      }
    } else {
      // Nothing cleared the stability bar; score the lowest-bias candidate
      // anyway so the comparison row is never empty. chosen_k stays 0.
      for (const KSelectionEntry& entry : report.entries) {
        if (pick == nullptr || entry.bias < pick->bias) pick = &entry;
      }
    }
    if (pick == nullptr) throw InternalError("k selection produced no candidates");
    out.fgc.ari = adjusted_rand_index(pick->clustering.assignments, sim.ground_truth);
    out.fgc.chosen_k = report.chosen_k.value_or(0);
    out.fgc.wall_seconds = seconds_since(start);
  }

  {
    auto start = Clock::now();
    Partition part = euclidean_kmedoids(sim.dataset, baseline_k, 200,
                                        derive_seed(seed, "benchmark.euclid", 0));
    out.kmedoids_euclidean.ari = adjusted_rand_index(part, sim.ground_truth);
    out.kmedoids_euclidean.chosen_k = baseline_k;
    out.kmedoids_euclidean.wall_seconds = seconds_since(start);
  }

  {
    auto start = Clock::now();
    Dataset combined = make_real_vs_noise(sim.dataset, derive_seed(seed, "benchmark.noise", 0));
    TrainConfig tc;
    tc.n_trees = sh_trees;
    tc.seed = derive_seed(seed, "benchmark.noise_train", 0);
    TrainResult trained = train_forest(combined, tc, th);
    // Proximities of the real rows only; the synthetic half is discarded.
    LeafMatrix leaves = apply_forest(trained.model, sim.dataset, th);
    DistanceMatrix dm = DistanceMatrix::dense_from_leaves(leaves, th);
    KMedoidsConfig kc;
    kc.k = baseline_k;
    kc.seed = derive_seed(seed, "benchmark.noise_pam", 0);
    ClusteringResult clustered = pam(dm, kc);
    out.unsupervised_rf.ari = adjusted_rand_index(clustered.assignments, sim.ground_truth);
    out.unsupervised_rf.chosen_k = baseline_k;
    out.unsupervised_rf.wall_seconds = seconds_since(start);
  }

  check_ari(out.fgc.ari, "fgc");
  check_ari(out.kmedoids_euclidean.ari, "kmedoids_euclidean");
  check_ari(out.unsupervised_rf.ari, "unsupervised_rf");
  return out;
}

std::string benchmark_to_json(const BenchmarkResult& result) {
  nlohmann::ordered_json j;
  j["seed"] = result.seed;
  auto method = [](const MethodScore& score) {
    nlohmann::ordered_json m;
    m["ari"] = score.ari;
    m["chosen_k"] = score.chosen_k;
    m["wall_seconds"] = score.wall_seconds;
    return m;
  };
  j["methods"] = nlohmann::ordered_json{{"fgc", method(result.fgc)},
                                        {"kmedoids_euclidean", method(result.kmedoids_euclidean)},
                                        {"unsupervised_rf", method(result.unsupervised_rf)}};
  return j.dump(2) + "\n";
}

std::string benchmark_table(const BenchmarkResult& result) {
  std::string out = kBenchmarkTableHeader;
  out += '\n';
  auto row = [&out](const char* name, const MethodScore& score) {
    out += name;
    out += ',';
    out += format_double(score.ari);
    out += ',';
    out += std::to_string(score.chosen_k);
    out += ',';
    out += format_double(score.wall_seconds);
    out += '\n';
  };
  row("fgc", result.fgc);
  row("kmedoids_euclidean", result.kmedoids_euclidean);
  row("unsupervised_rf", result.unsupervised_rf);
  return out;
}

}  // namespace fgc::cli
