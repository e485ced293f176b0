#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fgc/dataset.hpp"
#include "fgc/errors.hpp"
#include "fgc/forest.hpp"
#include "fgc/leaf_matrix.hpp"
#include "fgc/rand.hpp"

using namespace fgc;

namespace {

// Two numeric blobs far apart on f1: trivially separable.
Dataset blob_dataset(size_t per_class, uint64_t seed) {
  Dataset ds;
  ds.row_count = 2 * per_class;
  FeatureColumn f1;
  f1.name = "f1";
  f1.kind = FeatureKind::numeric;
  FeatureColumn f2;
  f2.name = "f2";
  f2.kind = FeatureKind::numeric;
  Rng rng(seed);
  for (size_t i = 0; i < 2 * per_class; i++) {
    double center = i < per_class ? -10.0 : 10.0;
    f1.numeric.push_back(center + rng.next_normal());
    f2.numeric.push_back(rng.next_normal());
  }
  ds.columns = {std::move(f1), std::move(f2)};
  ds.target.kind = TargetKind::classification;
  ds.target.classes = {"low", "high"};
  ds.target.labels.assign(per_class, 0);
  ds.target.labels.insert(ds.target.labels.end(), per_class, 1);
  return ds;
}

// XOR-style sample: label depends on the sign product of both features, so
// no single axis-aligned split can do well.
Dataset xor_dataset(size_t n, uint64_t seed) {
  Dataset ds;
  ds.row_count = n;
  FeatureColumn x1;
  x1.name = "x1";
  x1.kind = FeatureKind::numeric;
  FeatureColumn x2;
  x2.name = "x2";
  x2.kind = FeatureKind::numeric;
  Rng rng(seed);
  ds.target.kind = TargetKind::classification;
  ds.target.classes = {"neg", "pos"};
  for (size_t i = 0; i < n; i++) {
    double a = rng.next_unit() * 2.0 - 1.0;
    double b = rng.next_unit() * 2.0 - 1.0;
    x1.numeric.push_back(a);
    x2.numeric.push_back(b);
    ds.target.labels.push_back(a * b > 0 ? 1 : 0);
  }
  ds.columns = {std::move(x1), std::move(x2)};
  return ds;
}

double train_accuracy(const ForestModel& model, const Dataset& ds) {
  PredictResult pred = predict(model, ds);
  size_t hits = 0;
  for (size_t r = 0; r < ds.row_count; r++) {
    if (pred.labels[r] == ds.target.labels[r]) hits++;
  }
  return static_cast<double>(hits) / static_cast<double>(ds.row_count);
}

// Best accuracy any single threshold test on any one feature can reach,
// found by brute force over all midpoints (either side may be the 1-class).
double best_stump_accuracy(const Dataset& ds) {
  size_t n = ds.row_count;
  double best = 0.0;
  for (const FeatureColumn& col : ds.columns) {
    std::vector<double> cuts = col.numeric;
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(cuts.back() + 1.0);
    for (double cut : cuts) {
      size_t left1 = 0, left = 0, total1 = 0;
      for (size_t r = 0; r < n; r++) {
        bool is1 = ds.target.labels[r] == 1;
        total1 += is1;
        if (col.numeric[r] < cut) {
          left++;
          left1 += is1;
        }
      }
      size_t right1 = total1 - left1;
      size_t right = n - left;
      // predict majority on each side, whichever labeling wins
      size_t correct = std::max(left1, left - left1) + std::max(right1, right - right1);
      best = std::max(best, static_cast<double>(correct) / static_cast<double>(n));
    }
  }
  return best;
}

TreeNode leaf_node(std::vector<double> value) {
  TreeNode node;
  node.kind = TreeNode::Kind::leaf;
  node.value = std::move(value);
  return node;
}

TreeNode split_node(int feature, double threshold, int left, int right) {
  TreeNode node;
  node.kind = TreeNode::Kind::split;
  node.feature = feature;
  node.threshold = threshold;
  node.left = left;
  node.right = right;
  return node;
}

// One numeric feature "x", classes {"a","b"}; trees appended by the caller.
ForestModel single_feature_model() {
  ForestModel model;
  model.task = TargetKind::classification;
  FeatureSpec spec;
  spec.name = "x";
  spec.kind = FeatureKind::numeric;
  model.features.push_back(spec);
  model.classes = {"a", "b"};
  return model;
}

Dataset single_feature_rows(std::vector<double> xs) {
  Dataset ds;
  ds.row_count = xs.size();
  FeatureColumn col;
  col.name = "x";
  col.kind = FeatureKind::numeric;
  col.numeric = std::move(xs);
  ds.columns.push_back(std::move(col));
  return ds;
}

}  // namespace

TEST_CASE("separable blobs are fit perfectly") {
  Dataset ds = blob_dataset(50, 7);
  TrainConfig tc;
  tc.n_trees = 50;
  tc.seed = 7;
  TrainResult result = train_forest(ds, tc);
  CHECK_FALSE(result.constant_model);
  CHECK(train_accuracy(result.model, ds) == 1.0);
}

TEST_CASE("training is deterministic in the seed") {
  Dataset ds = blob_dataset(30, 11);
  TrainConfig tc;
  tc.n_trees = 20;
  tc.seed = 5;
  std::string first = save_forest(train_forest(ds, tc).model);
  std::string second = save_forest(train_forest(ds, tc).model);
  CHECK(first == second);
  tc.seed = 6;
  CHECK(save_forest(train_forest(ds, tc).model) != first);
}

TEST_CASE("thread count does not change the trained model") {
  Dataset ds = blob_dataset(40, 3);
  TrainConfig tc;
  tc.n_trees = 16;
  tc.seed = 9;
  std::string serial = save_forest(train_forest(ds, tc, 1).model);
  std::string threaded = save_forest(train_forest(ds, tc, 4).model);
  CHECK(serial == threaded);
}

TEST_CASE("depth-1 stumps cannot learn xor") {
  Dataset ds = xor_dataset(200, 21);
  // brute force confirms no single split separates this sample well
  double stump_best = best_stump_accuracy(ds);
  CHECK(stump_best <= 0.75);
  TrainConfig tc;
  tc.n_trees = 100;
  tc.max_depth = 1;
  tc.max_features = TrainConfig::MaxFeatures::all;
  tc.seed = 21;
  TrainResult result = train_forest(ds, tc);
  CHECK(train_accuracy(result.model, ds) <= 0.75);

  // unlimited depth memorizes the same sample
  tc.max_depth = -1;
  CHECK(train_accuracy(train_forest(ds, tc).model, ds) == 1.0);
}

TEST_CASE("max_depth 0 grows single-leaf trees") {
  Dataset ds = blob_dataset(20, 2);
  TrainConfig tc;
  tc.n_trees = 5;
  tc.max_depth = 0;
  tc.seed = 2;
  TrainResult result = train_forest(ds, tc);
  for (const Tree& tree : result.model.trees) {
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].kind == TreeNode::Kind::leaf);
  }
  LeafMatrix leaf = apply_forest(result.model, ds);
  for (size_t r = 0; r < leaf.n; r++) {
    for (size_t t = 0; t < leaf.n_trees; t++) {
      CHECK(leaf.row(r)[t] == result.model.trees[t].root);
    }
  }
}

TEST_CASE("numeric routing sends values below the threshold left") {
  ForestModel model = single_feature_model();
  Tree tree;
  tree.root = 0;
  tree.nodes = {split_node(0, 0.0, 1, 2), leaf_node({1, 0}), leaf_node({0, 1})};
  model.trees.push_back(tree);
  model.validate();

  Dataset ds = single_feature_rows({-1.0, -1e-12, 0.0, 1e-12, 3.0});
  LeafMatrix leaf = apply_forest(model, ds);
  CHECK(leaf.row(0)[0] == 1);
  CHECK(leaf.row(1)[0] == 1);
  // the comparison is strict, so the threshold itself goes right
  CHECK(leaf.row(2)[0] == 2);
  CHECK(leaf.row(3)[0] == 2);
  CHECK(leaf.row(4)[0] == 2);
}

TEST_CASE("categorical routing follows subset membership") {
  ForestModel model;
  model.task = TargetKind::classification;
  FeatureSpec spec;
  spec.name = "color";
  spec.kind = FeatureKind::categorical;
  spec.categories = {"blue", "green", "red"};
  model.features.push_back(spec);
  model.classes = {"a", "b"};
  Tree tree;
  tree.root = 0;
  TreeNode split;
  split.kind = TreeNode::Kind::split;
  split.feature = 0;
  split.subset = {0, 2};  // blue and red go left
  split.left = 1;
  split.right = 2;
  tree.nodes = {split, leaf_node({1, 0}), leaf_node({0, 1})};
  model.trees.push_back(tree);
  model.validate();

  Dataset ds;
  ds.row_count = 3;
  FeatureColumn col;
  col.name = "color";
  col.kind = FeatureKind::categorical;
  col.categories = {"blue", "green", "red"};
  col.codes = {0, 1, 2};
  ds.columns.push_back(std::move(col));
  LeafMatrix leaf = apply_forest(model, ds);
  CHECK(leaf.row(0)[0] == 1);
  CHECK(leaf.row(1)[0] == 2);
  CHECK(leaf.row(2)[0] == 1);
}

TEST_CASE("re-applying the forest reproduces the recorded in-bag leaves") {
  Dataset ds = blob_dataset(40, 13);
  TrainConfig tc;
  tc.n_trees = 25;
  tc.seed = 13;
  TrainResult result = train_forest(ds, tc);
  LeafMatrix leaf = apply_forest(result.model, ds);
  size_t in_bag = 0;
  for (size_t t = 0; t < tc.n_trees; t++) {
    for (size_t r = 0; r < ds.row_count; r++) {
      int32_t recorded = result.bootstrap_leaves[t][r];
      if (recorded < 0) continue;
      in_bag++;
      CHECK(leaf.row(r)[t] == recorded);
    }
  }
  CHECK(in_bag > 0);
}

TEST_CASE("bootstrap draws cover about 63 percent of the rows") {
  Dataset ds = blob_dataset(500, 17);  // 1000 rows
  TrainConfig tc;
  tc.n_trees = 10;
  tc.seed = 17;
  TrainResult result = train_forest(ds, tc);
  double covered = 0.0;
  for (size_t t = 0; t < tc.n_trees; t++) {
    size_t unique = 0;
    for (int32_t id : result.bootstrap_leaves[t]) unique += id >= 0;
    covered += static_cast<double>(unique) / static_cast<double>(ds.row_count);
  }
  covered /= static_cast<double>(tc.n_trees);
  // 1 - 1/e for full-size resampling
  CHECK(covered == doctest::Approx(0.632).epsilon(0.08));
}

TEST_CASE("majority vote breaks ties toward the first class") {
  ForestModel model = single_feature_model();
  for (int t = 0; t < 4; t++) {
    Tree tree;
    tree.root = 0;
    tree.nodes = {leaf_node(t < 2 ? std::vector<double>{1, 0} : std::vector<double>{0, 1})};
    model.trees.push_back(tree);
  }
  model.validate();
  PredictResult pred = predict(model, single_feature_rows({0.5}));
  REQUIRE(pred.kind == TargetKind::classification);
  // 2 votes each way: the smaller class index wins
  CHECK(pred.labels[0] == 0);
}

TEST_CASE("regression prediction averages the leaf values") {
  ForestModel model;
  model.task = TargetKind::regression;
  FeatureSpec spec;
  spec.name = "x";
  spec.kind = FeatureKind::numeric;
  model.features.push_back(spec);
  for (double v : {1.0, 3.0}) {
    Tree tree;
    tree.root = 0;
    tree.nodes = {leaf_node({v})};
    model.trees.push_back(tree);
  }
  model.validate();
  PredictResult pred = predict(model, single_feature_rows({0.0}));
  REQUIRE(pred.kind == TargetKind::regression);
  CHECK(pred.values[0] == 2.0);
}

TEST_CASE("constant targets yield a flagged stump forest") {
  Dataset ds = blob_dataset(10, 1);
  ds.target.labels.assign(ds.row_count, 0);
  TrainConfig tc;
  tc.n_trees = 3;
  TrainResult result = train_forest(ds, tc);
  CHECK(result.constant_model);
  PredictResult pred = predict(result.model, ds);
  for (int32_t label : pred.labels) CHECK(label == 0);
}

TEST_CASE("forest json round-trips byte for byte") {
  Dataset ds = blob_dataset(25, 19);
  TrainConfig tc;
  tc.n_trees = 8;
  tc.seed = 19;
  std::string text = save_forest(train_forest(ds, tc).model);
  ForestModel reloaded = load_forest(text);
  CHECK(save_forest(reloaded) == text);
}

TEST_CASE("a hand-written model file loads and routes") {
  std::string text = R"({
    "task": "classification",
    "n_trees": 1,
    "features": [{"name": "x", "kind": "numeric"}],
    "classes": ["a", "b"],
    "trees": [{
      "root": 0,
      "nodes": [
        {"id": 0, "kind": "split", "feature": 0, "threshold": 2.5, "left": 1, "right": 2},
        {"id": 1, "kind": "leaf", "value": [5, 1]},
        {"id": 2, "kind": "leaf", "value": [0, 4]}
      ]
    }]
  })";
  ForestModel model = load_forest(text);
  PredictResult pred = predict(model, single_feature_rows({1.0, 4.0}));
  CHECK(pred.labels[0] == 0);
  CHECK(pred.labels[1] == 1);
}

TEST_CASE("malformed model json is rejected") {
  CHECK_THROWS_AS(load_forest("not json"), ValidationError);
  CHECK_THROWS_AS(load_forest("{}"), ValidationError);

  // node 1 is its own child: the reachability walk must refuse it
  std::string cyclic = R"({
    "task": "classification",
    "n_trees": 1,
    "features": [{"name": "x", "kind": "numeric"}],
    "classes": ["a", "b"],
    "trees": [{
      "root": 0,
      "nodes": [
        {"id": 0, "kind": "split", "feature": 0, "threshold": 0.0, "left": 1, "right": 1},
        {"id": 1, "kind": "leaf", "value": [1, 0]}
      ]
    }]
  })";
  CHECK_THROWS_AS(load_forest(cyclic), ValidationError);

  // declared tree count disagrees with the payload
  std::string miscounted = R"({
    "task": "regression",
    "n_trees": 2,
    "features": [{"name": "x", "kind": "numeric"}],
    "trees": [{"root": 0, "nodes": [{"id": 0, "kind": "leaf", "value": 1.0}]}]
  })";
  CHECK_THROWS_AS(load_forest(miscounted), ValidationError);
}

TEST_CASE("apply rejects datasets that do not match the model schema") {
  Dataset ds = blob_dataset(10, 23);
  TrainConfig tc;
  tc.n_trees = 2;
  ForestModel model = train_forest(ds, tc).model;

  Dataset renamed = ds;
  renamed.columns[0].name = "other";
  CHECK_THROWS_AS(apply_forest(model, renamed), ValidationError);

  Dataset truncated = ds;
  truncated.columns.pop_back();
  CHECK_THROWS_AS(apply_forest(model, truncated), ValidationError);

  Dataset rekinded = ds;
  rekinded.columns[1].kind = FeatureKind::categorical;
  rekinded.columns[1].numeric.clear();
  rekinded.columns[1].categories = {"x"};
  rekinded.columns[1].codes.assign(ds.row_count, 0);
  CHECK_THROWS_AS(apply_forest(model, rekinded), ValidationError);
}

TEST_CASE("training config limits are enforced") {
  Dataset ds = blob_dataset(10, 29);
  TrainConfig tc;
  tc.n_trees = 0;
  CHECK_THROWS_AS(train_forest(ds, tc), ValidationError);
  tc.n_trees = 1;
  tc.bootstrap_fraction = 0.0;
  CHECK_THROWS_AS(train_forest(ds, tc), ValidationError);
  tc.bootstrap_fraction = 1.5;
  CHECK_THROWS_AS(train_forest(ds, tc), ValidationError);
  tc.bootstrap_fraction = 1.0;
  tc.min_samples_leaf = 0;
  CHECK_THROWS_AS(train_forest(ds, tc), ValidationError);
}

TEST_CASE("feature subsampling sizes follow the configured rule") {
  TrainConfig tc;
  tc.max_features = TrainConfig::MaxFeatures::sqrt_k;
  CHECK(tc.features_per_split(9) == 3);
  CHECK(tc.features_per_split(2) == 1);
  tc.max_features = TrainConfig::MaxFeatures::log2_k;
  CHECK(tc.features_per_split(8) == 3);
  tc.max_features = TrainConfig::MaxFeatures::all;
  CHECK(tc.features_per_split(5) == 5);
  tc.max_features = TrainConfig::MaxFeatures::fixed;
  tc.fixed_features = 2;
  CHECK(tc.features_per_split(5) == 2);
  CHECK(tc.features_per_split(1) == 1);
}

TEST_CASE("synthesized noise resamples each column independently") {
  Dataset ds = blob_dataset(300, 31);
  // f2 copies f1 so the pair starts perfectly correlated
  ds.columns[1].numeric = ds.columns[0].numeric;
  Dataset noise = synthesize_noise(ds, 31);
  REQUIRE(noise.row_count == ds.row_count);
  REQUIRE(noise.columns.size() == ds.columns.size());

  for (size_t c = 0; c < ds.columns.size(); c++) {
    std::set<double> source(ds.columns[c].numeric.begin(), ds.columns[c].numeric.end());
    for (double v : noise.columns[c].numeric) CHECK(source.count(v) == 1);
  }

  // independent resampling destroys the cross-column correlation
  auto pearson = [](const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0, mb = 0;
    size_t n = a.size();
    for (size_t i = 0; i < n; i++) {
      ma += a[i];
      mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (size_t i = 0; i < n; i++) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  CHECK(pearson(ds.columns[0].numeric, ds.columns[1].numeric) == doctest::Approx(1.0));
  CHECK(std::abs(pearson(noise.columns[0].numeric, noise.columns[1].numeric)) < 0.2);
}

TEST_CASE("real-vs-noise stacking doubles the rows and relabels them") {
  Dataset ds = blob_dataset(50, 37);
  Dataset combined = make_real_vs_noise(ds, 37);
  REQUIRE(combined.row_count == 2 * ds.row_count);
  CHECK(combined.target.classes == std::vector<std::string>{"real", "synthetic"});
  for (size_t r = 0; r < ds.row_count; r++) {
    CHECK(combined.target.labels[r] == 0);
    CHECK(combined.target.labels[ds.row_count + r] == 1);
    // the first half is the original data, untouched
    CHECK(combined.columns[0].numeric[r] == ds.columns[0].numeric[r]);
  }
}
