#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "fgc/errors.hpp"
#include "fgc/forest.hpp"
#include "fgc/rand.hpp"

namespace fgc {

namespace {

// Candidate split found on one feature. `decrease` is the weighted impurity
// drop (Gini for classification, population variance for regression).
struct SplitCandidate {
  bool found = false;
  double decrease = 0.0;
  int feature = -1;
  double threshold = 0.0;
  std::vector<std::int32_t> subset;  // categorical: codes routed left
};

struct ClassStats {
  std::vector<double> counts;
  double total = 0.0;

  explicit ClassStats(std::size_t n_classes) : counts(n_classes, 0.0) {}
  void add(std::int32_t label) {
    counts[static_cast<std::size_t>(label)] += 1.0;
    total += 1.0;
  }
  double gini() const {
    if (total <= 0.0) return 0.0;
    double sum_sq = 0.0;
    for (double c : counts) sum_sq += (c / total) * (c / total);
    return 1.0 - sum_sq;
  }
};

struct NumericStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  double total = 0.0;

  void add(double y) {
    sum += y;
    sum_sq += y * y;
    total += 1.0;
  }
  double variance() const {
    if (total <= 0.0) return 0.0;
    double mean = sum / total;
    double v = sum_sq / total - mean * mean;
    return v > 0.0 ? v : 0.0;
  }
};

// One tree's growth state. Rows are bootstrap indices into the dataset and
// may repeat; recursion order (node, left subtree, right subtree) fixes the
// random stream, so results do not depend on scheduling.
class TreeGrower {
 public:
  TreeGrower(const Dataset& dataset, const TrainConfig& config, std::size_t m_features,
             Rng& rng, std::vector<std::int32_t>& leaf_of_row)
      : dataset_(dataset),
        config_(config),
        m_features_(m_features),
        rng_(rng),
        leaf_of_row_(leaf_of_row),
        n_classes_(dataset.target.kind == TargetKind::classification
                       ? dataset.target.classes.size()
                       : 0) {}

  Tree grow(std::vector<std::size_t> rows) {
    tree_.root = 0;
    grow_node(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow_node(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    std::vector<double> leaf_value = leaf_payload(rows);
    bool stop = rows.size() < 2 || rows.size() < 2 * config_.min_samples_leaf ||
                (config_.max_depth >= 0 && depth >= config_.max_depth) || is_pure(rows);

    SplitCandidate best;
    if (!stop) best = best_split(rows);

    if (stop || !best.found) {
      TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
      node.kind = TreeNode::Kind::leaf;
      node.value = std::move(leaf_value);
      for (std::size_t r : rows) leaf_of_row_[r] = id;
      return id;
    }

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    const FeatureColumn& col = dataset_.columns[static_cast<std::size_t>(best.feature)];
    for (std::size_t r : rows) {
      bool go_left = col.kind == FeatureKind::numeric
                         ? col.numeric[r] < best.threshold
                         : std::binary_search(best.subset.begin(), best.subset.end(),
                                              col.codes[r]);
      (go_left ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    int left = grow_node(std::move(left_rows), depth + 1);
    int right = grow_node(std::move(right_rows), depth + 1);

    TreeNode& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.kind = TreeNode::Kind::split;
    node.feature = best.feature;
    if (col.kind == FeatureKind::numeric) {
      node.threshold = best.threshold;
    } else {
      node.subset = std::move(best.subset);
    }
    node.left = left;
    node.right = right;
    return id;
  }

  std::vector<double> leaf_payload(const std::vector<std::size_t>& rows) const {
    if (n_classes_ > 0) {
      std::vector<double> counts(n_classes_, 0.0);
      for (std::size_t r : rows) {
        counts[static_cast<std::size_t>(dataset_.target.labels[r])] += 1.0;
      }
      return counts;
    }
    double sum = 0.0;
    for (std::size_t r : rows) sum += dataset_.target.values[r];
    return {sum / static_cast<double>(rows.size())};
  }

  bool is_pure(const std::vector<std::size_t>& rows) const {
    if (n_classes_ > 0) {
      std::int32_t first = dataset_.target.labels[rows[0]];
      for (std::size_t r : rows) {
        if (dataset_.target.labels[r] != first) return false;
      }
      return true;
    }
    double first = dataset_.target.values[rows[0]];
    for (std::size_t r : rows) {
      if (dataset_.target.values[r] != first) return false;
    }
    return true;
  }

  // Strictly-better acceptance plus ascending candidate enumeration
  // (feature, then threshold / prefix length) yields the documented
  // tie-break: highest decrease, lowest feature, lowest threshold.
  SplitCandidate best_split(const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> features =
        rng_.sample_without_replacement(dataset_.columns.size(), m_features_);
    SplitCandidate best;
    for (std::size_t f : features) {
      const FeatureColumn& col = dataset_.columns[f];
      if (col.kind == FeatureKind::numeric) {
        numeric_splits(rows, f, best);
      } else {
        categorical_splits(rows, f, best);
      }
    }
    return best;
  }

  double node_impurity(const std::vector<std::size_t>& rows) const {
    if (n_classes_ > 0) {
      ClassStats stats(n_classes_);
      for (std::size_t r : rows) stats.add(dataset_.target.labels[r]);
      return stats.gini();
    }
    NumericStats stats;
    for (std::size_t r : rows) stats.add(dataset_.target.values[r]);
    return stats.variance();
  }

  void numeric_splits(const std::vector<std::size_t>& rows, std::size_t f,
                      SplitCandidate& best) {
    const std::vector<double>& values = dataset_.columns[f].numeric;
    std::vector<std::size_t> order(rows);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });

    const double parent = node_impurity(rows);
    const double n = static_cast<double>(rows.size());

    if (n_classes_ > 0) {
      ClassStats left(n_classes_), total(n_classes_);
      for (std::size_t r : order) total.add(dataset_.target.labels[r]);
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        left.add(dataset_.target.labels[order[i]]);
        double lo = values[order[i]], hi = values[order[i + 1]];
        if (!(lo < hi)) continue;
        double threshold = std::midpoint(lo, hi);
        if (!(threshold > lo)) continue;  // not representable between the two
        consider_numeric(best, parent, n, left, total, f, threshold, i + 1,
                         order.size() - i - 1);
      }
    } else {
      NumericStats left, total;
      for (std::size_t r : order) total.add(dataset_.target.values[r]);
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        left.add(dataset_.target.values[order[i]]);
        double lo = values[order[i]], hi = values[order[i + 1]];
        if (!(lo < hi)) continue;
        double threshold = std::midpoint(lo, hi);
        if (!(threshold > lo)) continue;
        consider_numeric(best, parent, n, left, total, f, threshold, i + 1,
                         order.size() - i - 1);
      }
    }
  }

  template <typename Stats>
  void consider_numeric(SplitCandidate& best, double parent, double n, const Stats& left,
                        const Stats& total, std::size_t f, double threshold,
                        std::size_t n_left, std::size_t n_right) {
    if (n_left < config_.min_samples_leaf || n_right < config_.min_samples_leaf) return;
    Stats right = subtract(total, left);
    double weighted = (left.total / n) * impurity(left) + (right.total / n) * impurity(right);
    double decrease = parent - weighted;
    if (decrease > 0.0 && decrease > best.decrease) {
      best.found = true;
      best.decrease = decrease;
      best.feature = static_cast<int>(f);
      best.threshold = threshold;
      best.subset.clear();
    }
  }

  static ClassStats subtract(const ClassStats& total, const ClassStats& part) {
    ClassStats out(total.counts.size());
    for (std::size_t g = 0; g < total.counts.size(); ++g) {
      out.counts[g] = total.counts[g] - part.counts[g];
    }
    out.total = total.total - part.total;
    return out;
  }
  static NumericStats subtract(const NumericStats& total, const NumericStats& part) {
    NumericStats out;
    out.sum = total.sum - part.sum;
    out.sum_sq = total.sum_sq - part.sum_sq;
    out.total = total.total - part.total;
    return out;
  }
  static double impurity(const ClassStats& s) { return s.gini(); }
  static double impurity(const NumericStats& s) { return s.variance(); }

  // Categories present at the node, ordered by first-class rate (or target
  // mean); candidate subsets are the prefixes of that ordering, which covers
  // the optimal binary grouping for two-class and regression targets.
  void categorical_splits(const std::vector<std::size_t>& rows, std::size_t f,
                          SplitCandidate& best) {
    const FeatureColumn& col = dataset_.columns[f];
    const std::size_t n_cats = col.categories.size();

    std::vector<double> cat_total(n_cats, 0.0);
    std::vector<double> cat_key_num(n_cats, 0.0);
    std::vector<std::vector<double>> cat_counts;
    std::vector<double> cat_sum(n_cats, 0.0), cat_sum_sq(n_cats, 0.0);
    if (n_classes_ > 0) cat_counts.assign(n_cats, std::vector<double>(n_classes_, 0.0));

    for (std::size_t r : rows) {
      auto c = static_cast<std::size_t>(col.codes[r]);
      cat_total[c] += 1.0;
      if (n_classes_ > 0) {
        cat_counts[c][static_cast<std::size_t>(dataset_.target.labels[r])] += 1.0;
      } else {
        cat_sum[c] += dataset_.target.values[r];
        cat_sum_sq[c] += dataset_.target.values[r] * dataset_.target.values[r];
      }
    }

    std::vector<std::int32_t> present;
    for (std::size_t c = 0; c < n_cats; ++c) {
      if (cat_total[c] > 0.0) {
        present.push_back(static_cast<std::int32_t>(c));
        cat_key_num[c] = n_classes_ > 0 ? cat_counts[c][0] / cat_total[c]
                                        : cat_sum[c] / cat_total[c];
      }
    }
    if (present.size() < 2) return;
    std::sort(present.begin(), present.end(), [&](std::int32_t a, std::int32_t b) {
      auto ka = cat_key_num[static_cast<std::size_t>(a)];
      auto kb = cat_key_num[static_cast<std::size_t>(b)];
      if (ka != kb) return ka < kb;
      return a < b;
    });

    const double parent = node_impurity(rows);
    const double n = static_cast<double>(rows.size());

    if (n_classes_ > 0) {
      ClassStats left(n_classes_), total(n_classes_);
      for (std::int32_t c : present) {
        for (std::size_t g = 0; g < n_classes_; ++g) {
          total.counts[g] += cat_counts[static_cast<std::size_t>(c)][g];
        }
        total.total += cat_total[static_cast<std::size_t>(c)];
      }
      for (std::size_t p = 0; p + 1 < present.size(); ++p) {
        auto c = static_cast<std::size_t>(present[p]);
        for (std::size_t g = 0; g < n_classes_; ++g) left.counts[g] += cat_counts[c][g];
        left.total += cat_total[c];
        consider_categorical(best, parent, n, left, total, f, present, p + 1);
      }
    } else {
      NumericStats left, total;
      for (std::int32_t c : present) {
        total.sum += cat_sum[static_cast<std::size_t>(c)];
        total.sum_sq += cat_sum_sq[static_cast<std::size_t>(c)];
        total.total += cat_total[static_cast<std::size_t>(c)];
      }
      for (std::size_t p = 0; p + 1 < present.size(); ++p) {
        auto c = static_cast<std::size_t>(present[p]);
        left.sum += cat_sum[c];
        left.sum_sq += cat_sum_sq[c];
        left.total += cat_total[c];
        consider_categorical(best, parent, n, left, total, f, present, p + 1);
      }
    }
  }

  template <typename Stats>
  void consider_categorical(SplitCandidate& best, double parent, double n,
                            const Stats& left, const Stats& total, std::size_t f,
                            const std::vector<std::int32_t>& present, std::size_t prefix) {
    auto n_left = static_cast<std::size_t>(left.total);
    auto n_right = static_cast<std::size_t>(total.total - left.total);
    if (n_left < config_.min_samples_leaf || n_right < config_.min_samples_leaf) return;
    Stats right = subtract(total, left);
    double weighted = (left.total / n) * impurity(left) + (right.total / n) * impurity(right);
    double decrease = parent - weighted;
    if (decrease > 0.0 && decrease > best.decrease) {
      best.found = true;
      best.decrease = decrease;
      best.feature = static_cast<int>(f);
      best.threshold = 0.0;
      best.subset.assign(present.begin(), present.begin() + static_cast<long>(prefix));
      std::sort(best.subset.begin(), best.subset.end());
    }
  }

  const Dataset& dataset_;
  const TrainConfig& config_;
  std::size_t m_features_;
  Rng& rng_;
  std::vector<std::int32_t>& leaf_of_row_;
  std::size_t n_classes_;
  Tree tree_;
};

void run_per_tree_indexed(std::size_t n_trees, unsigned threads,
                          const std::function<void(std::size_t)>& work) {
  if (threads <= 1 || n_trees < 2) {
    for (std::size_t t = 0; t < n_trees; ++t) work(t);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n_trees));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n_trees + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t a = static_cast<std::size_t>(w) * chunk;
    std::size_t b = std::min(n_trees, a + chunk);
    if (a >= b) break;
    pool.emplace_back([&work, a, b] {
      for (std::size_t t = a; t < b; ++t) work(t);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::size_t TrainConfig::features_per_split(std::size_t n_features) const {
  switch (max_features) {
    case MaxFeatures::sqrt_k: {
      auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
      return std::max<std::size_t>(1, m);
    }
    case MaxFeatures::log2_k: {
      auto m = static_cast<std::size_t>(std::log2(static_cast<double>(n_features)));
      return std::max<std::size_t>(1, m);
    }
    case MaxFeatures::all:
      return n_features;
    case MaxFeatures::fixed:
      return std::min(n_features, fixed_features);
  }
  throw InternalError("unhandled max_features mode");
}

void TrainConfig::validate() const {
  if (n_trees == 0) throw ValidationError("n_trees must be at least 1");
  if (!(bootstrap_fraction > 0.0 && bootstrap_fraction <= 1.0)) {
    throw ValidationError("bootstrap_fraction must lie in (0, 1]");
  }
  if (min_samples_leaf == 0) throw ValidationError("min_samples_leaf must be at least 1");
  if (max_features == MaxFeatures::fixed && fixed_features == 0) {
    throw ValidationError("fixed max_features needs a positive count");
  }
}

TrainResult train_forest(const Dataset& dataset, const TrainConfig& config,
                         unsigned threads) {
  config.validate();
  if (dataset.columns.empty()) throw ValidationError("cannot train on an empty feature set");
  if (dataset.row_count < 2) throw ValidationError("training needs at least 2 rows");
  if (dataset.target.size() != dataset.row_count) {
    throw ValidationError("target length does not match the dataset");
  }

  TrainResult result;
  ForestModel& model = result.model;
  model.task = dataset.target.kind;
  for (const FeatureColumn& col : dataset.columns) {
    FeatureSpec spec;
    spec.name = col.name;
    spec.kind = col.kind;
    spec.categories = col.categories;
    model.features.push_back(std::move(spec));
  }
  if (model.task == TargetKind::classification) {
    model.classes = dataset.target.classes;
    std::int32_t first = dataset.target.labels[0];
    result.constant_model = std::all_of(dataset.target.labels.begin(),
                                        dataset.target.labels.end(),
                                        [&](std::int32_t l) { return l == first; });
  } else {
    double first = dataset.target.values[0];
    result.constant_model = std::all_of(dataset.target.values.begin(),
                                        dataset.target.values.end(),
                                        [&](double v) { return v == first; });
  }

  const std::size_t n = dataset.row_count;
  const std::size_t m = config.features_per_split(dataset.columns.size());
  const auto draws = static_cast<std::size_t>(
      std::ceil(config.bootstrap_fraction * static_cast<double>(n)));

  model.trees.resize(config.n_trees);
  result.bootstrap_leaves.assign(config.n_trees, {});
  run_per_tree_indexed(config.n_trees, threads, [&](std::size_t t) {
    Rng rng(derive_seed(config.seed, "train.tree", t));
    std::vector<std::size_t> rows = rng.sample_with_replacement(n, draws);
    std::vector<std::int32_t> leaf_of_row(n, -1);
    TreeGrower grower(dataset, config, m, rng, leaf_of_row);
    model.trees[t] = grower.grow(std::move(rows));
    result.bootstrap_leaves[t] = std::move(leaf_of_row);
  });

  model.validate();
  return result;
}

}  // namespace fgc
