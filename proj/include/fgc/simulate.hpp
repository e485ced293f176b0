#pragma once

#include <array>
#include <cstdint>

#include "fgc/dataset.hpp"

namespace fgc {

// Benchmark generator: two classes, the first split into three latent
// subclasses. Rows are emitted cluster by cluster (A, B, C, then class 2).
// Three informative Gaussian features separate the subclasses; one standard
// Gaussian and one Bernoulli feature carry no label information.
struct SimulationParams {
  // Rows per latent cluster: subclasses A/B/C of class 1, then class 2.
  std::array<std::size_t, 4> cluster_sizes{100, 100, 200, 200};
  // means[c][f]: mean of informative feature f inside cluster c. Each
  // subclass is shifted along its own axis; class 2 sits at the origin so
  // telling the classes apart forces splits that also isolate subclasses.
  std::array<std::array<double, 3>, 4> means{{{3.4, 0.0, 0.0},
                                              {0.0, 3.4, 0.0},
                                              {0.0, 0.0, 3.4},
                                              {0.0, 0.0, 0.0}}};
  // sds[c][f]: matching spreads. Shifted axes are tight (0.5) and the
  // remaining axes wide (1.4) so the clusters overlap heavily in raw
  // Euclidean space; class 2 spreads evenly across all three.
  std::array<std::array<double, 3>, 4> sds{{{0.5, 1.4, 1.4},
                                            {1.4, 0.5, 1.4},
                                            {1.4, 1.4, 0.5},
                                            {1.15, 1.15, 1.15}}};
  double noise_sd = 1.0;
  double binary_rate = 0.5;

  void validate() const;
};

struct SimulationResult {
  Dataset dataset;
  Partition ground_truth;  // the 4-way subclass partition
};

SimulationResult simulate_benchmark(std::uint64_t seed,
                                    const SimulationParams& params = {});

}  // namespace fgc
