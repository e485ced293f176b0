#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgc/dataset.hpp"
#include "fgc/leaf_matrix.hpp"

namespace fgc {

struct TreeNode {
  enum class Kind { split, leaf };
  Kind kind = Kind::leaf;

  // Split payload. Numeric splits carry a threshold (value < threshold goes
  // left); categorical splits carry the sorted category codes routed left.
  int feature = -1;
  std::optional<double> threshold;
  std::vector<std::int32_t> subset;
  int left = -1;
  int right = -1;

  // Leaf payload: per-class vote counts, or a single mean for regression.
  std::vector<double> value;
};

struct Tree {
  int root = 0;
  std::vector<TreeNode> nodes;  // node id == position in this table
};

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<std::string> categories;  // categorical only
};

struct ForestModel {
  TargetKind task = TargetKind::classification;
  std::vector<FeatureSpec> features;
  std::vector<std::string> classes;  // classification only
  std::vector<Tree> trees;

  std::size_t n_trees() const { return trees.size(); }
  void validate() const;
  // Feature names/kinds/categories must match the dataset exactly.
  void check_compatible(const Dataset& dataset) const;
};

// Terminal-node id per (sample, tree). Numeric values route left on strict
// `<`; categorical codes route left when in the subset.
LeafMatrix apply_forest(const ForestModel& model, const Dataset& dataset,
                        unsigned threads = 1);

struct PredictResult {
  TargetKind kind = TargetKind::classification;
  std::vector<std::int32_t> labels;  // class codes into model.classes
  std::vector<double> values;
};

// Majority vote across trees (ties to the smallest class label) or mean of
// per-tree leaf means.
PredictResult predict(const ForestModel& model, const Dataset& dataset,
                      unsigned threads = 1);

std::string save_forest(const ForestModel& model);
ForestModel load_forest(const std::string& json_text);

// Same-shape dataset with every column independently resampled (with
// replacement) from its own empirical values, which keeps the marginals and
// destroys cross-feature structure. The target column is copied unchanged.
Dataset synthesize_noise(const Dataset& dataset, std::uint64_t seed);

// Real rows labeled "real" stacked over an equal count of synthesized rows
// labeled "synthetic"; training set for the unsupervised-forest baseline.
Dataset make_real_vs_noise(const Dataset& dataset, std::uint64_t seed);

struct TrainConfig {
  std::size_t n_trees = 100;
  int max_depth = -1;  // -1 = unlimited
  enum class MaxFeatures { sqrt_k, log2_k, all, fixed };
  MaxFeatures max_features = MaxFeatures::sqrt_k;
  std::size_t fixed_features = 0;  // used when max_features == fixed
  double bootstrap_fraction = 1.0;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 0;

  std::size_t features_per_split(std::size_t n_features) const;
  void validate() const;
};

struct TrainResult {
  ForestModel model;
  // Single-class / zero-spread target: the forest is all stumps and every
  // prediction is the same.
  bool constant_model = false;
  // bootstrap_leaves[t][r]: leaf id row r reached while tree t was grown,
  // or -1 when r was out of bag. Re-applying the tree must reproduce these.
  std::vector<std::vector<std::int32_t>> bootstrap_leaves;
};

TrainResult train_forest(const Dataset& dataset, const TrainConfig& config,
                         unsigned threads = 1);

}  // namespace fgc
