#include "fgc/model_selection.hpp"

#include <algorithm>
#include <cmath>

#include "fgc/errors.hpp"
#include "fgc/rand.hpp"

namespace fgc {

namespace {

void check_lengths(const Partition& assignments, std::size_t target_rows) {
  assignments.validate();
  if (assignments.assignments.size() != target_rows) {
    throw ValidationError("partition covers " +
                          std::to_string(assignments.assignments.size()) +
                          " rows but the target has " + std::to_string(target_rows));
  }
}

double population_variance(const std::vector<double>& values,
                           const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  double mean = 0.0;
  for (std::size_t r : rows) mean += values[r];
  mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (std::size_t r : rows) var += (values[r] - mean) * (values[r] - mean);
  return var / static_cast<double>(rows.size());
}

}  // namespace

ClassBiasReport classification_bias(const Partition& assignments,
                                    const TargetColumn& target) {
  if (target.kind != TargetKind::classification) {
    throw ValidationError("classification bias needs a class target");
  }
  check_lengths(assignments, target.labels.size());

  const std::size_t n = target.labels.size();
  const std::size_t G = target.classes.size();
  const auto k = static_cast<std::size_t>(assignments.k);

  ClassBiasReport report;
  report.n_classes = G;
  report.priors.assign(G, 0.0);
  for (std::int32_t label : target.labels) {
    report.priors[static_cast<std::size_t>(label)] += 1.0;
  }
  for (std::size_t g = 0; g < G; ++g) {
    if (report.priors[g] == 0.0) {
      throw ValidationError("class '" + target.classes[g] +
                            "' has no samples; balanced bias is undefined");
    }
    report.priors[g] /= static_cast<double>(n);
  }

  std::vector<std::vector<double>> counts(k, std::vector<double>(G, 0.0));
  std::vector<double> sizes(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto i = static_cast<std::size_t>(assignments.assignments[r]);
    counts[i][static_cast<std::size_t>(target.labels[r])] += 1.0;
    sizes[i] += 1.0;
  }

  report.proportions.assign(k, std::vector<double>(G, 0.0));
  report.balanced.assign(k, std::vector<double>(G, 0.0));
  report.bias = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double weight_sum = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
      report.proportions[i][g] = counts[i][g] / sizes[i];
      report.balanced[i][g] = report.proportions[i][g] / report.priors[g];
      weight_sum += report.balanced[i][g];
    }
    double sum_sq = 0.0;
    for (std::size_t g = 0; g < G; ++g) {
      report.balanced[i][g] /= weight_sum;
      sum_sq += report.balanced[i][g] * report.balanced[i][g];
    }
    report.bias += 1.0 - sum_sq;
  }
  return report;
}

RegressionBiasReport regression_bias(const Partition& assignments,
                                     const TargetColumn& target) {
  if (target.kind != TargetKind::regression) {
    throw ValidationError("regression bias needs a numeric target");
  }
  check_lengths(assignments, target.values.size());

  const std::size_t n = target.values.size();
  const auto k = static_cast<std::size_t>(assignments.k);

  RegressionBiasReport report;
  report.n = n;
  std::vector<std::size_t> all(n);
  for (std::size_t r = 0; r < n; ++r) all[r] = r;
  report.global_variance = population_variance(target.values, all);
  if (report.global_variance <= 0.0) {
    throw ValidationError("target is constant; normalized variance is undefined");
  }

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t r = 0; r < n; ++r) {
    members[static_cast<std::size_t>(assignments.assignments[r])].push_back(r);
  }
  report.cluster_sizes.resize(k);
  report.cluster_variances.resize(k);
  double weighted = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    report.cluster_sizes[i] = members[i].size();
    report.cluster_variances[i] = population_variance(target.values, members[i]);
    weighted += static_cast<double>(members[i].size()) * report.cluster_variances[i];
  }
  report.bias = weighted / (static_cast<double>(n) * report.global_variance);
  return report;
}

StabilityReport make_stability_report(std::vector<double> per_cluster,
                                      std::size_t iterations, double fraction,
                                      double threshold) {
  StabilityReport report;
  report.per_cluster = std::move(per_cluster);
  double sum = 0.0;
  for (double v : report.per_cluster) sum += v;
  report.mean_jaccard =
      report.per_cluster.empty() ? 0.0 : sum / static_cast<double>(report.per_cluster.size());
  report.bootstrap_count = iterations;
  report.sample_fraction = fraction;
  report.threshold = threshold;
  report.stable = report.mean_jaccard >= threshold;
  return report;
}

StabilityReport cluster_stability(const DistanceMatrix& distances,
                                  const ClusteringResult& base,
                                  const StabilityConfig& config) {
  const std::size_t n = distances.size();
  if (base.assignments.assignments.size() != n) {
    throw ValidationError("base clustering does not cover the distance matrix");
  }
  if (config.iterations < 1) throw ValidationError("stability needs at least one iteration");
  if (!(config.sample_fraction > 0.0 && config.sample_fraction <= 1.0)) {
    throw ValidationError("sample fraction must lie in (0, 1]");
  }
  const auto k = static_cast<std::size_t>(base.k);
  const auto draw = static_cast<std::size_t>(
      std::ceil(config.sample_fraction * static_cast<double>(n)));
  if (draw <= k) throw ValidationError("stability subsample is not larger than k");

  std::vector<double> accum(k, 0.0);
  for (std::size_t b = 0; b < config.iterations; ++b) {
    Rng rng(derive_seed(config.seed, "stability.sample", b));
    std::vector<std::size_t> idx = config.with_replacement
                                       ? rng.sample_with_replacement(n, draw)
                                       : rng.sample_without_replacement(n, draw);
    if (config.with_replacement) std::sort(idx.begin(), idx.end());

    DistanceMatrix sub = distances.submatrix(idx);
    KMedoidsConfig inner = config.inner;
    inner.k = base.k;
    inner.seed = derive_seed(config.seed, "stability.recluster", b);
    ClusteringResult re = pam(sub, inner);

    // Contingency over distinct subsampled indices (duplicates from the
    // with-replacement mode land in the same cluster and collapse here).
    std::vector<std::vector<double>> inter(k, std::vector<double>(k, 0.0));
    std::vector<double> a_in_s(k, 0.0), b_size(k, 0.0);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      if (p > 0 && idx[p] == idx[p - 1]) continue;
      auto a = static_cast<std::size_t>(base.assignments.assignments[idx[p]]);
      auto bc = static_cast<std::size_t>(re.assignments.assignments[p]);
      inter[a][bc] += 1.0;
      a_in_s[a] += 1.0;
      b_size[bc] += 1.0;
    }
    for (std::size_t i = 0; i < k; ++i) {
      double best = 0.0;
      if (a_in_s[i] > 0.0) {
        for (std::size_t j = 0; j < k; ++j) {
          double uni = a_in_s[i] + b_size[j] - inter[i][j];
          if (uni > 0.0) best = std::max(best, inter[i][j] / uni);
        }
      }
      accum[i] += best;
    }
  }

  for (double& v : accum) v /= static_cast<double>(config.iterations);
  return make_stability_report(std::move(accum), config.iterations,
                               config.sample_fraction, config.threshold);
}

std::optional<int> choose_k(const std::vector<KCandidate>& candidates) {
  std::optional<int> best;
  double best_bias = 0.0;
  for (const KCandidate& c : candidates) {
    if (!c.stable) continue;
    // Strictly-better keeps the smallest k on ties (entries scan in k order);
    // out-of-order input is handled by the explicit k comparison.
    if (!best || c.bias < best_bias || (c.bias == best_bias && c.k < *best)) {
      best = c.k;
      best_bias = c.bias;
    }
  }
  return best;
}

KSelectionReport select_k(const DistanceMatrix& distances, const TargetColumn& target,
                          const KSelectionConfig& config) {
  if (config.k_min > config.k_max) throw ValidationError("empty k range");
  if (config.k_min < 2) throw ValidationError("k range must start at 2 or above");
  if (static_cast<std::size_t>(config.k_max) >= distances.size()) {
    throw ValidationError("k range exceeds the sample count");
  }
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw ValidationError("stability threshold must lie in (0, 1]");
  }

  KSelectionReport report;
  for (int k = config.k_min; k <= config.k_max; ++k) {
    KSelectionEntry entry;
    entry.k = k;

    KMedoidsConfig inner = config.inner;
    inner.k = k;
    inner.seed = derive_seed(config.seed, "select.cluster", static_cast<std::uint64_t>(k));
    entry.clustering = pam(distances, inner);

    StabilityConfig stability;
    stability.iterations = config.bootstrap_iterations;
    stability.sample_fraction = config.sample_fraction;
    stability.threshold = config.threshold;
    stability.with_replacement = config.with_replacement;
    stability.seed = derive_seed(config.seed, "select.stability", static_cast<std::uint64_t>(k));
    stability.inner = config.inner;
    entry.stability = cluster_stability(distances, entry.clustering, stability);

    entry.bias = target.kind == TargetKind::classification
                     ? classification_bias(entry.clustering.assignments, target).bias
                     : regression_bias(entry.clustering.assignments, target).bias;
    report.entries.push_back(std::move(entry));
  }

  std::vector<KCandidate> candidates;
  for (const KSelectionEntry& e : report.entries) {
    candidates.push_back({e.k, e.bias, e.stability.stable});
  }
  report.chosen_k = choose_k(candidates);
  if (!report.chosen_k) {
    const KSelectionEntry* top = &report.entries.front();
    for (const KSelectionEntry& e : report.entries) {
      if (e.stability.mean_jaccard > top->stability.mean_jaccard) top = &e;
    }
    report.diagnostic =
        "no k in [" + std::to_string(config.k_min) + ", " + std::to_string(config.k_max) +
        "] reached mean Jaccard " + std::to_string(config.threshold) +
        "; closest was k=" + std::to_string(top->k) + " at " +
        std::to_string(top->stability.mean_jaccard);
  }
  return report;
}

}  // namespace fgc
