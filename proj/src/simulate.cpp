#include "fgc/simulate.hpp"

#include <string>

#include "fgc/errors.hpp"
#include "fgc/rand.hpp"

namespace fgc {

void SimulationParams::validate() const {
  for (std::size_t c = 0; c < cluster_sizes.size(); ++c) {
    if (cluster_sizes[c] == 0) {
      throw ValidationError("simulation cluster " + std::to_string(c + 1) +
                            " has zero rows");
    }
    for (std::size_t f = 0; f < 3; ++f) {
      if (!(sds[c][f] > 0.0)) {
        throw ValidationError("simulation spread for cluster " + std::to_string(c + 1) +
                              ", feature " + std::to_string(f + 1) +
                              " must be positive");
      }
    }
  }
  if (!(noise_sd > 0.0)) throw ValidationError("noise spread must be positive");
  if (!(binary_rate > 0.0 && binary_rate < 1.0)) {
    throw ValidationError("binary noise rate must lie strictly between 0 and 1");
  }
}

SimulationResult simulate_benchmark(std::uint64_t seed, const SimulationParams& params) {
  params.validate();

  const std::size_t n = params.cluster_sizes[0] + params.cluster_sizes[1] +
                        params.cluster_sizes[2] + params.cluster_sizes[3];

  SimulationResult result;
  Dataset& ds = result.dataset;
  ds.row_count = n;

  // Each column draws from its own stream so adding a column never shifts
  // the values of the others.
  for (std::size_t f = 0; f < 3; ++f) {
    Rng rng(derive_seed(seed, "sim.column", f));
    FeatureColumn col;
    col.name = "feature_" + std::to_string(f + 1);
    col.kind = FeatureKind::numeric;
    col.numeric.reserve(n);
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t r = 0; r < params.cluster_sizes[c]; ++r) {
        col.numeric.push_back(params.means[c][f] + params.sds[c][f] * rng.next_normal());
      }
    }
    ds.columns.push_back(std::move(col));
  }
  {
    Rng rng(derive_seed(seed, "sim.column", 3));
    FeatureColumn col;
    col.name = "noise_numeric";
    col.kind = FeatureKind::numeric;
    col.numeric.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      col.numeric.push_back(params.noise_sd * rng.next_normal());
    }
    ds.columns.push_back(std::move(col));
  }
  {
    Rng rng(derive_seed(seed, "sim.column", 4));
    FeatureColumn col;
    col.name = "noise_binary";
    col.kind = FeatureKind::categorical;
    col.categories = {"0", "1"};
    col.codes.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      col.codes.push_back(rng.next_bernoulli(params.binary_rate) ? 1 : 0);
    }
    ds.columns.push_back(std::move(col));
  }

  ds.target.kind = TargetKind::classification;
  ds.target.classes = {"class_1", "class_2"};
  ds.target.labels.reserve(n);
  result.ground_truth.k = 4;
  result.ground_truth.assignments.reserve(n);
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t r = 0; r < params.cluster_sizes[c]; ++r) {
      ds.target.labels.push_back(c < 3 ? 0 : 1);
      result.ground_truth.assignments.push_back(static_cast<int>(c));
    }
  }

  ds.validate();
  result.ground_truth.validate();
  return result;
}

}  // namespace fgc
