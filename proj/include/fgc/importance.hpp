#pragma once

#include <string>
#include <vector>

#include "fgc/dataset.hpp"
#include "fgc/kmedoids.hpp"

namespace fgc {

enum class ImportanceMetric { wasserstein, jensen_shannon };

// wasserstein when numeric features are the strict majority, otherwise
// jensen_shannon.
ImportanceMetric default_metric(const Dataset& dataset);

// Exact first Wasserstein distance between two empirical samples: the
// integral of |F - G| over the merged step functions.
double wasserstein_1d(const std::vector<double>& a, const std::vector<double>& b);

// Quantile of an ascending-sorted sample, linearly interpolating between
// order statistics at position q*(n-1).
double empirical_quantile(const std::vector<double>& sorted_values, double q);

// Square root of the Jensen-Shannon divergence with base-2 logarithms, so
// the value lies in [0, 1]. Inputs are probability masses over one shared
// bin set; 0*log(0) counts as 0.
double jensen_shannon_distance(const std::vector<double>& p,
                               const std::vector<double>& q);

struct BinningBounds {
  std::size_t min_bins = 2;
  std::size_t max_bins = 50;
};

struct BinningSpec {
  std::vector<double> edges;  // strictly increasing, bin_count + 1 entries
  std::size_t bin_count = 0;
  bool constant = false;  // degenerate single-bin spec for a constant feature
};

// Bin count from the Freedman-Diaconis width (Sturges when the IQR is 0),
// clamped to bounds; edges at empirical quantiles so bins hold roughly equal
// mass. Duplicate quantile edges are merged.
BinningSpec bin_numeric(const std::vector<double>& values, const BinningBounds& bounds);

// Probability mass of `values` over the spec's bins. Each bin is [lo, hi),
// the last is closed; values outside the edge range join the end bins.
std::vector<double> histogram_mass(const std::vector<double>& values,
                                   const BinningSpec& spec);

struct ImportanceReport {
  ImportanceMetric metric = ImportanceMetric::wasserstein;
  std::vector<std::string> features;
  std::vector<std::vector<double>> raw_local;  // [cluster][feature] distances
  std::vector<std::vector<double>> local;      // normalized so each cluster peaks at 1
  std::vector<double> global;                  // per-feature mean of local rows
  std::vector<bool> all_zero_cluster;          // cluster had no signal; row left at 0
  std::vector<bool> low_confidence_cluster;    // cluster smaller than 2 samples
};

// Per (cluster, feature) distance between the within-cluster distribution
// and the all-samples background, normalized per cluster by the largest
// distance. Numeric features compare raw samples (wasserstein) or masses
// over background-derived shared bins (jensen_shannon); categorical features
// compare category masses (jensen_shannon) or take the max over per-category
// one-hot indicator distances (wasserstein).
ImportanceReport local_importance(const Dataset& dataset, const Partition& clusters,
                                  ImportanceMetric metric,
                                  const BinningBounds& bounds = {});

}  // namespace fgc
