#pragma once

#include <cstdint>
#include <string>

#include "fgc/cli.hpp"

namespace fgc::cli {

struct MethodScore {
  double ari = 0.0;
  int chosen_k = 0;
  double wall_seconds = 0.0;
};

// One seed of the simulated comparison: this toolkit's pipeline with its own
// k selection against two k=4 baselines, Euclidean k-medoids on standardized
// features and the real-vs-synthetic-noise forest.
struct BenchmarkResult {
  std::uint64_t seed = 0;
  MethodScore fgc;
  MethodScore kmedoids_euclidean;
  MethodScore unsupervised_rf;
};

// Config keys (all optional): trees, max-depth, bootstrap-fraction,
// sh-trees, k-min, k-max, stability-threshold, bootstrap-iterations,
// sample-fraction, baseline-k. When `resolved_out` is given, the settings
// actually used are recorded into it for the manifest.
BenchmarkResult run_benchmark(std::uint64_t seed, const ConfigMap& config,
                              int threads, ConfigMap* resolved_out = nullptr);

std::string benchmark_to_json(const BenchmarkResult& result);

// CSV comparison table; the header line is part of the output contract.
inline constexpr const char* kBenchmarkTableHeader =
    "method,ari,chosen_k,wall_seconds";
std::string benchmark_table(const BenchmarkResult& result);

}  // namespace fgc::cli
