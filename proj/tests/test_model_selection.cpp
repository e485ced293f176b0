#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "fgc/dataset.hpp"
#include "fgc/distance_matrix.hpp"
#include "fgc/errors.hpp"
#include "fgc/kmedoids.hpp"
#include "fgc/leaf_matrix.hpp"
#include "fgc/model_selection.hpp"
#include "fgc/rand.hpp"

using namespace fgc;

namespace {

Partition partition_of(std::vector<int32_t> ids, int32_t k) {
  Partition p;
  p.assignments = std::move(ids);
  p.k = k;
  return p;
}

TargetColumn class_target(std::vector<int32_t> labels, size_t n_classes) {
  TargetColumn t;
  t.kind = TargetKind::classification;
  for (size_t g = 0; g < n_classes; g++) t.classes.push_back(std::string(1, 'a' + g));
  t.labels = std::move(labels);
  return t;
}

TargetColumn numeric_target(std::vector<double> values) {
  TargetColumn t;
  t.kind = TargetKind::regression;
  t.values = std::move(values);
  return t;
}

// Two blocks of near-identical leaf rows: an unambiguous 2-cluster problem.
LeafMatrix two_block_leaves(size_t per_block, size_t n_trees, uint64_t seed) {
  LeafMatrix leaf;
  leaf.n = 2 * per_block;
  leaf.n_trees = n_trees;
  Rng rng(seed);
  for (size_t r = 0; r < leaf.n; r++) {
    int32_t base = r < per_block ? 100 : 200;
    for (size_t t = 0; t < n_trees; t++) {
      bool flip = rng.next_below(10) == 0;
      leaf.leaf_ids.push_back(flip ? base + 50 : base);
    }
  }
  return leaf;
}

KCandidate candidate(int k, double bias, bool stable) { return KCandidate{k, bias, stable}; }

}  // namespace

TEST_CASE("pure clusters have zero class bias") {
  Partition p = partition_of({0, 0, 1, 1, 2, 2}, 3);
  TargetColumn t = class_target({0, 0, 1, 1, 2, 2}, 3);
  ClassBiasReport report = classification_bias(p, t);
  CHECK(report.bias == 0.0);
  for (size_t i = 0; i < 3; i++) {
    double sum = 0.0;
    for (double b : report.balanced[i]) sum += b;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("a prior-matching cluster scores exactly one half with two classes") {
  // balanced case: one cluster, proportions equal the priors
  {
    Partition p = partition_of({0, 0, 0, 0}, 1);
    TargetColumn t = class_target({0, 1, 0, 1}, 2);
    CHECK(classification_bias(p, t).bias == 0.5);
  }
  // the reweighting makes the same hold under a 9:1 imbalance
  {
    std::vector<int32_t> labels(9, 0);
    labels.push_back(1);
    Partition p = partition_of(std::vector<int32_t>(10, 0), 1);
    ClassBiasReport report = classification_bias(p, class_target(labels, 2));
    CHECK(report.bias == 0.5);
    CHECK(report.balanced[0][0] == 0.5);
    CHECK(report.balanced[0][1] == 0.5);
    CHECK(report.priors[0] == 0.9);
  }
}

TEST_CASE("class bias is invariant under row duplication") {
  Partition p = partition_of({0, 0, 1, 1, 1}, 2);
  TargetColumn t = class_target({0, 1, 1, 1, 0}, 2);
  double base = classification_bias(p, t).bias;

  std::vector<int32_t> doubled_ids, doubled_labels;
  for (int copy = 0; copy < 2; copy++) {
    doubled_ids.insert(doubled_ids.end(), p.assignments.begin(), p.assignments.end());
    doubled_labels.insert(doubled_labels.end(), t.labels.begin(), t.labels.end());
  }
  double doubled =
      classification_bias(partition_of(doubled_ids, 2), class_target(doubled_labels, 2)).bias;
  CHECK(doubled == base);
}

TEST_CASE("class bias stays inside its analytic range") {
  Rng rng(83);
  for (int trial = 0; trial < 50; trial++) {
    size_t n = 10 + rng.next_below(40);
    auto k = static_cast<int32_t>(2 + rng.next_below(4));
    auto g = static_cast<size_t>(2 + rng.next_below(3));
    std::vector<int32_t> ids(n), labels(n);
    // force every cluster and class to appear at least once
    for (size_t i = 0; i < n; i++) {
      ids[i] = i < static_cast<size_t>(k) ? static_cast<int32_t>(i)
                                          : static_cast<int32_t>(rng.next_below(k));
      labels[i] = i < g ? static_cast<int32_t>(i)
                        : static_cast<int32_t>(rng.next_below(g));
    }
    double bias = classification_bias(partition_of(ids, k), class_target(labels, g)).bias;
    CHECK(bias >= 0.0);
    CHECK(bias <= k * (1.0 - 1.0 / static_cast<double>(g)) + 1e-12);
  }
}

TEST_CASE("a declared class with no rows is rejected") {
  Partition p = partition_of({0, 0, 1, 1}, 2);
  TargetColumn t = class_target({0, 1, 0, 1}, 3);  // class 'c' never appears
  CHECK_THROWS_AS(classification_bias(p, t), ValidationError);
  CHECK_THROWS_AS(classification_bias(p, numeric_target({1, 2, 3, 4})), ValidationError);
}

TEST_CASE("regression bias spans zero for singletons to one for a single cluster") {
  TargetColumn t = numeric_target({1.0, 4.0, -2.0, 7.5, 0.25});
  Partition singletons = partition_of({0, 1, 2, 3, 4}, 5);
  CHECK(regression_bias(singletons, t).bias == 0.0);

  Partition lump = partition_of({0, 0, 0, 0, 0}, 1);
  CHECK(regression_bias(lump, t).bias == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regression bias separates matched and mismatched splits") {
  TargetColumn t = numeric_target({0.0, 0.0, 10.0, 10.0});
  CHECK(regression_bias(partition_of({0, 0, 1, 1}, 2), t).bias ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(regression_bias(partition_of({0, 1, 0, 1}, 2), t).bias ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regression bias never exceeds one") {
  Rng rng(89);
  for (int trial = 0; trial < 50; trial++) {
    size_t n = 8 + rng.next_below(30);
    auto k = static_cast<int32_t>(2 + rng.next_below(4));
    std::vector<int32_t> ids(n);
    std::vector<double> values(n);
    for (size_t i = 0; i < n; i++) {
      ids[i] = i < static_cast<size_t>(k) ? static_cast<int32_t>(i)
                                          : static_cast<int32_t>(rng.next_below(k));
      values[i] = rng.next_normal();
    }
    double bias = regression_bias(partition_of(ids, k), numeric_target(values)).bias;
    CHECK(bias >= 0.0);
    CHECK(bias <= 1.0 + 1e-9);
  }
}

TEST_CASE("a constant regression target cannot be scored") {
  TargetColumn t = numeric_target({3.0, 3.0, 3.0, 3.0});
  CHECK_THROWS_AS(regression_bias(partition_of({0, 0, 1, 1}, 2), t), ValidationError);
}

TEST_CASE("stability summary averages the per-cluster scores") {
  StabilityReport report =
      make_stability_report({0.99, 0.98, 0.87, 0.72, 0.91}, 25, 0.8, 0.6);
  CHECK(report.mean_jaccard == doctest::Approx(0.894).epsilon(1e-12));
  CHECK(report.stable);
  CHECK(report.bootstrap_count == 25);
  CHECK(report.sample_fraction == 0.8);

  // the same scores fail a stricter bar
  CHECK_FALSE(make_stability_report({0.99, 0.98, 0.87, 0.72, 0.91}, 25, 0.8, 0.9).stable);
}

TEST_CASE("the selection rule takes the least biased stable candidate") {
  std::vector<KCandidate> table = {
      candidate(2, 0.0073, true),  candidate(3, 0.0048, true),
      candidate(4, 0.0027, true),  candidate(5, 0.0020, false),
      candidate(6, 0.00062, true), candidate(7, 0.00053, true),
      candidate(8, 0.00046, true), candidate(9, 0.0004, false),
      candidate(10, 0.0003, false),
  };
  CHECK(choose_k(table) == 8);
}

TEST_CASE("selection ties go to the smaller k and instability disqualifies") {
  CHECK(choose_k({candidate(3, 0.5, true), candidate(5, 0.5, true)}) == 3);
  CHECK(choose_k({candidate(5, 0.5, true), candidate(3, 0.5, true)}) == 3);
  // the lowest bias sits at an unstable k, so the stable runner-up wins
  CHECK(choose_k({candidate(2, 0.9, true), candidate(4, 0.001, false)}) == 2);
  CHECK_FALSE(choose_k({candidate(2, 0.1, false), candidate(3, 0.2, false)}).has_value());
  CHECK_FALSE(choose_k({}).has_value());
}

TEST_CASE("resampling the full dataset reproduces the base clustering") {
  LeafMatrix leaf = two_block_leaves(30, 12, 97);
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);
  KMedoidsConfig kc;
  kc.k = 2;
  ClusteringResult base = pam(d, kc);

  StabilityConfig sc;
  sc.iterations = 3;
  sc.sample_fraction = 1.0;
  sc.inner = kc;
  StabilityReport report = cluster_stability(d, base, sc);
  for (double j : report.per_cluster) CHECK(j == 1.0);
  CHECK(report.mean_jaccard == 1.0);
  CHECK(report.stable);
}

TEST_CASE("clean two-block structure is highly stable") {
  LeafMatrix leaf = two_block_leaves(40, 12, 101);
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);
  KMedoidsConfig kc;
  kc.k = 2;
  ClusteringResult base = pam(d, kc);

  StabilityConfig sc;
  sc.iterations = 20;
  sc.seed = 7;
  sc.inner = kc;
  StabilityReport report = cluster_stability(d, base, sc);
  CHECK(report.mean_jaccard >= 0.95);
  CHECK(report.bootstrap_count == 20);

  // same seed, same draws, same scores
  StabilityReport again = cluster_stability(d, base, sc);
  CHECK(again.per_cluster == report.per_cluster);

  sc.with_replacement = true;
  StabilityReport replacement = cluster_stability(d, base, sc);
  for (double j : replacement.per_cluster) {
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
  }
}

TEST_CASE("stability configuration is validated") {
  LeafMatrix leaf = two_block_leaves(5, 6, 103);
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);
  KMedoidsConfig kc;
  kc.k = 3;
  ClusteringResult base = pam(d, kc);

  StabilityConfig sc;
  sc.inner = kc;
  sc.iterations = 0;
  CHECK_THROWS_AS(cluster_stability(d, base, sc), ValidationError);
  sc.iterations = 5;
  sc.sample_fraction = 0.0;
  CHECK_THROWS_AS(cluster_stability(d, base, sc), ValidationError);
  sc.sample_fraction = 1.5;
  CHECK_THROWS_AS(cluster_stability(d, base, sc), ValidationError);
  // ceil(0.3 * 10) = 3 rows is not more than k = 3
  sc.sample_fraction = 0.3;
  CHECK_THROWS_AS(cluster_stability(d, base, sc), ValidationError);

  sc.sample_fraction = 0.8;
  ClusteringResult mismatched = base;
  mismatched.assignments.assignments.pop_back();
  CHECK_THROWS_AS(cluster_stability(d, mismatched, sc), ValidationError);
}

TEST_CASE("the k sweep picks the cleanest stable clustering") {
  LeafMatrix leaf = two_block_leaves(30, 12, 107);
  // labels follow the blocks, so k = 2 is already pure
  std::vector<int32_t> labels(60, 0);
  for (size_t i = 30; i < 60; i++) labels[i] = 1;
  TargetColumn target = class_target(labels, 2);
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);

  KSelectionConfig config;
  config.k_min = 2;
  config.k_max = 4;
  config.bootstrap_iterations = 10;
  config.seed = 11;
  KSelectionReport report = select_k(d, target, config);

  REQUIRE(report.entries.size() == 3);
  for (size_t i = 0; i < report.entries.size(); i++) {
    const KSelectionEntry& entry = report.entries[i];
    CHECK(entry.k == 2 + static_cast<int>(i));
    CHECK(entry.clustering.k == entry.k);
    // the recorded bias matches a fresh computation on the stored clustering
    CHECK(entry.bias == classification_bias(entry.clustering.assignments, target).bias);
  }
  REQUIRE(report.chosen_k.has_value());
  CHECK(*report.chosen_k == 2);
  CHECK(report.diagnostic.empty());

  // the chosen candidate is stable with minimal bias, ties to the smallest k
  const KSelectionEntry* chosen = nullptr;
  for (const KSelectionEntry& entry : report.entries) {
    if (entry.k == *report.chosen_k) chosen = &entry;
  }
  REQUIRE(chosen != nullptr);
  CHECK(chosen->stability.stable);
  for (const KSelectionEntry& entry : report.entries) {
    if (!entry.stability.stable) continue;
    CHECK(chosen->bias <= entry.bias + 1e-15);
    if (entry.bias == chosen->bias) CHECK(chosen->k <= entry.k);
  }
}

TEST_CASE("an all-unstable sweep reports a diagnostic instead of a k") {
  // random leaves have no cluster structure to rediscover under resampling
  LeafMatrix leaf;
  leaf.n = 60;
  leaf.n_trees = 8;
  Rng rng(109);
  for (size_t i = 0; i < leaf.n * leaf.n_trees; i++) {
    leaf.leaf_ids.push_back(static_cast<int32_t>(rng.next_below(30)));
  }
  std::vector<int32_t> labels(60);
  for (auto& l : labels) l = static_cast<int32_t>(rng.next_below(2));
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);

  KSelectionConfig config;
  config.k_min = 2;
  config.k_max = 3;
  config.bootstrap_iterations = 15;
  config.threshold = 0.995;  // a bar noise cannot clear
  config.seed = 13;
  KSelectionReport report = select_k(d, class_target(labels, 2), config);
  if (!report.chosen_k.has_value()) {
    CHECK_FALSE(report.diagnostic.empty());
    for (const KSelectionEntry& entry : report.entries) {
      CHECK_FALSE(entry.stability.stable);
    }
  } else {
    // if anything clears 0.995 it must be genuinely reproducible
    CHECK(report.entries[static_cast<size_t>(*report.chosen_k - 2)]
              .stability.mean_jaccard >= 0.995);
  }
}

TEST_CASE("k sweep bounds are validated") {
  LeafMatrix leaf = two_block_leaves(10, 6, 113);
  DistanceMatrix d = DistanceMatrix::dense_from_leaves(leaf);
  TargetColumn target = class_target(std::vector<int32_t>(20, 0), 1);

  KSelectionConfig config;
  config.k_min = 5;
  config.k_max = 4;
  CHECK_THROWS_AS(select_k(d, target, config), ValidationError);
  config.k_min = 1;
  config.k_max = 4;
  CHECK_THROWS_AS(select_k(d, target, config), ValidationError);
  config.k_min = 2;
  config.k_max = 20;
  CHECK_THROWS_AS(select_k(d, target, config), ValidationError);
  config.k_max = 4;
  config.threshold = 0.0;
  CHECK_THROWS_AS(select_k(d, target, config), ValidationError);
}
