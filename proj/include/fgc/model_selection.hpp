#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgc/dataset.hpp"
#include "fgc/kmedoids.hpp"

namespace fgc {

// Class-balanced impurity of a clustering against a class target. Each
// cluster's class proportions are reweighted by the inverse global priors,
// so minority classes count as much as majority ones.
struct ClassBiasReport {
  std::vector<std::vector<double>> proportions;  // p[i][g]: raw within-cluster
  std::vector<std::vector<double>> balanced;     // b[i][g]: reweighted, sums to 1
  std::vector<double> priors;                    // q[g]
  std::size_t n_classes = 0;
  double bias = 0.0;  // sum over clusters of (1 - sum_g b^2)
};

ClassBiasReport classification_bias(const Partition& assignments,
                                    const TargetColumn& target);

// Within-cluster variance of a numeric target, normalized by the global
// variance (population convention): sum_j n_j Var(y_j) / (n Var(y)).
struct RegressionBiasReport {
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> cluster_variances;
  std::size_t n = 0;
  double global_variance = 0.0;
  double bias = 0.0;
};

RegressionBiasReport regression_bias(const Partition& assignments,
                                     const TargetColumn& target);

struct StabilityConfig {
  std::size_t iterations = 100;
  double sample_fraction = 0.8;
  double threshold = 0.6;
  // Subsampling is without replacement by default; set to true to draw the
  // same number of rows with replacement instead.
  bool with_replacement = false;
  std::uint64_t seed = 0;
  KMedoidsConfig inner;  // reclustering settings; k must match the base
};

struct StabilityReport {
  std::vector<double> per_cluster;  // best-match Jaccard per original cluster
  double mean_jaccard = 0.0;
  std::size_t bootstrap_count = 0;
  double sample_fraction = 0.0;
  double threshold = 0.0;
  bool stable = false;  // mean_jaccard >= threshold
};

StabilityReport make_stability_report(std::vector<double> per_cluster,
                                      std::size_t iterations, double fraction,
                                      double threshold);

// For each bootstrap: subsample, recluster the submatrix with the same k,
// then score each original cluster by its best-match Jaccard against the
// bootstrap clusters, all sets restricted to the subsampled indices.
StabilityReport cluster_stability(const DistanceMatrix& distances,
                                  const ClusteringResult& base,
                                  const StabilityConfig& config);

// The pure selection rule: minimum bias among stable candidates, ties to
// the smaller k. Returns nullopt when nothing is stable.
struct KCandidate {
  int k = 0;
  double bias = 0.0;
  bool stable = false;
};
std::optional<int> choose_k(const std::vector<KCandidate>& candidates);

struct KSelectionConfig {
  int k_min = 2;
  int k_max = 10;
  double threshold = 0.6;
  std::size_t bootstrap_iterations = 100;
  double sample_fraction = 0.8;
  bool with_replacement = false;
  KMedoidsConfig inner;  // clustering settings template; k is set per entry
  std::uint64_t seed = 0;
};

struct KSelectionEntry {
  int k = 0;
  double bias = 0.0;
  StabilityReport stability;
  ClusteringResult clustering;
};

struct KSelectionReport {
  std::vector<KSelectionEntry> entries;
  std::optional<int> chosen_k;
  std::string diagnostic;  // filled when no k passes the stability bar
};

KSelectionReport select_k(const DistanceMatrix& distances, const TargetColumn& target,
                          const KSelectionConfig& config);

}  // namespace fgc
