#include "fgc/forest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "fgc/errors.hpp"
#include "fgc/rand.hpp"
#include "json.hpp"

namespace fgc {

namespace {

using ordered_json = nlohmann::ordered_json;

void validate_tree(const Tree& tree, const ForestModel& model, std::size_t tree_index) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("tree " + std::to_string(tree_index) + ": " + what);
  };
  const std::size_t count = tree.nodes.size();
  if (count == 0) fail("empty node table");
  if (tree.root < 0 || static_cast<std::size_t>(tree.root) >= count) {
    fail("root id out of range");
  }

  // Walk from the root: every node must be reached exactly once, which
  // rules out cycles, shared children, and orphans in one pass.
  std::vector<char> seen(count, 0);
  std::vector<int> stack = {tree.root};
  std::size_t reached = 0;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(id)]) {
      fail("node " + std::to_string(id) + " is reachable twice (cycle or shared child)");
    }
    seen[static_cast<std::size_t>(id)] = 1;
    ++reached;
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.kind == TreeNode::Kind::leaf) {
      if (model.task == TargetKind::classification) {
        if (node.value.size() != model.classes.size()) {
          fail("leaf " + std::to_string(id) + " vote vector has " +
               std::to_string(node.value.size()) + " entries, expected " +
               std::to_string(model.classes.size()));
        }
      } else if (node.value.size() != 1) {
        fail("regression leaf " + std::to_string(id) + " must hold one value");
      }
      for (double v : node.value) {
        if (!std::isfinite(v)) fail("leaf " + std::to_string(id) + " has a non-finite value");
      }
      continue;
    }
    if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= model.features.size()) {
      fail("split " + std::to_string(id) + " references unknown feature " +
           std::to_string(node.feature));
    }
    const FeatureSpec& spec = model.features[static_cast<std::size_t>(node.feature)];
    if (spec.kind == FeatureKind::numeric) {
      if (!node.threshold.has_value()) {
        fail("split " + std::to_string(id) + " on numeric feature lacks a threshold");
      }
      if (!std::isfinite(*node.threshold)) {
        fail("split " + std::to_string(id) + " has a non-finite threshold");
      }
      if (!node.subset.empty()) {
        fail("split " + std::to_string(id) + " on numeric feature carries a subset");
      }
    } else {
      if (node.threshold.has_value()) {
        fail("split " + std::to_string(id) + " on categorical feature carries a threshold");
      }
      if (node.subset.empty()) {
        fail("split " + std::to_string(id) + " on categorical feature lacks a subset");
      }
      std::int32_t prev = -1;
      for (std::int32_t code : node.subset) {
        if (code < 0 || static_cast<std::size_t>(code) >= spec.categories.size()) {
          fail("split " + std::to_string(id) + " subset code " + std::to_string(code) +
               " outside the category set");
        }
        if (code <= prev) fail("split " + std::to_string(id) + " subset must be sorted and unique");
        prev = code;
      }
    }
    for (int child : {node.left, node.right}) {
      if (child < 0 || static_cast<std::size_t>(child) >= count) {
        fail("split " + std::to_string(id) + " child id out of range");
      }
      stack.push_back(child);
    }
  }
  if (reached != count) {
    fail(std::to_string(count - reached) + " node(s) unreachable from the root");
  }
}

int route_sample(const Tree& tree, const ForestModel& model, const Dataset& dataset,
                 std::size_t row) {
  int id = tree.root;
  while (true) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.kind == TreeNode::Kind::leaf) return id;
    const FeatureColumn& col = dataset.columns[static_cast<std::size_t>(node.feature)];
    bool go_left;
    if (col.kind == FeatureKind::numeric) {
      go_left = col.numeric[row] < *node.threshold;
    } else {
      go_left = std::binary_search(node.subset.begin(), node.subset.end(), col.codes[row]);
    }
    id = go_left ? node.left : node.right;
  }
}

// Index of the largest entry, ties to the lowest index.
std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

void run_per_tree(std::size_t n_trees, unsigned threads,
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

void ForestModel::validate() const {
  if (trees.empty()) throw ValidationError("forest has no trees");
  if (features.empty()) throw ValidationError("forest has no features");
  std::set<std::string> names;
  for (const FeatureSpec& spec : features) {
    if (spec.name.empty()) throw ValidationError("forest feature with empty name");
    if (!names.insert(spec.name).second) {
      throw ValidationError("forest repeats feature '" + spec.name + "'");
    }
    if (spec.kind == FeatureKind::categorical && spec.categories.empty()) {
      throw ValidationError("categorical feature '" + spec.name + "' lists no categories");
    }
    if (spec.kind == FeatureKind::numeric && !spec.categories.empty()) {
      throw ValidationError("numeric feature '" + spec.name + "' lists categories");
    }
  }
  if (task == TargetKind::classification) {
    if (classes.empty()) throw ValidationError("classification forest lists no classes");
    std::set<std::string> uniq(classes.begin(), classes.end());
    if (uniq.size() != classes.size()) throw ValidationError("forest repeats a class label");
  } else if (!classes.empty()) {
    throw ValidationError("regression forest must not list classes");
  }
  for (std::size_t t = 0; t < trees.size(); ++t) validate_tree(trees[t], *this, t);
}

void ForestModel::check_compatible(const Dataset& dataset) const {
  if (dataset.columns.size() != features.size()) {
    throw ValidationError("dataset has " + std::to_string(dataset.columns.size()) +
                          " feature(s), model expects " + std::to_string(features.size()));
  }
  for (std::size_t f = 0; f < features.size(); ++f) {
    const FeatureSpec& spec = features[f];
    const FeatureColumn& col = dataset.columns[f];
    if (spec.name != col.name) {
      throw ValidationError("feature " + std::to_string(f) + " is '" + col.name +
                            "', model expects '" + spec.name + "'");
    }
    if (spec.kind != col.kind) {
      throw ValidationError("feature '" + spec.name + "' kind differs from the model");
    }
    if (spec.kind == FeatureKind::categorical && spec.categories != col.categories) {
      throw ValidationError("feature '" + spec.name +
                            "' category set differs from the model");
    }
  }
}

LeafMatrix apply_forest(const ForestModel& model, const Dataset& dataset, unsigned threads) {
  model.check_compatible(dataset);
  if (dataset.row_count == 0) throw ValidationError("cannot apply a forest to zero rows");
  LeafMatrix leaf;
  leaf.n = dataset.row_count;
  leaf.n_trees = model.trees.size();
  leaf.leaf_ids.resize(leaf.n * leaf.n_trees);
  run_per_tree(model.trees.size(), threads, [&](std::size_t t) {
    const Tree& tree = model.trees[t];
    for (std::size_t r = 0; r < dataset.row_count; ++r) {
      leaf.leaf_ids[r * leaf.n_trees + t] =
          static_cast<std::int32_t>(route_sample(tree, model, dataset, r));
    }
  });
  return leaf;
}

PredictResult predict(const ForestModel& model, const Dataset& dataset, unsigned threads) {
  model.check_compatible(dataset);
  PredictResult out;
  out.kind = model.task;
  const std::size_t n = dataset.row_count;

  if (model.task == TargetKind::regression) {
    std::vector<double> sums(n, 0.0);
    std::mutex merge;
    run_per_tree(model.trees.size(), threads, [&](std::size_t t) {
      const Tree& tree = model.trees[t];
      std::vector<double> local(n);
      for (std::size_t r = 0; r < n; ++r) {
        local[r] = tree.nodes[static_cast<std::size_t>(route_sample(tree, model, dataset, r))]
                       .value[0];
      }
      std::scoped_lock lock(merge);
      for (std::size_t r = 0; r < n; ++r) sums[r] += local[r];
    });
    out.values.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      out.values[r] = sums[r] / static_cast<double>(model.trees.size());
    }
    return out;
  }

  const std::size_t n_classes = model.classes.size();
  std::vector<std::vector<double>> votes(n, std::vector<double>(n_classes, 0.0));
  std::mutex merge;
  run_per_tree(model.trees.size(), threads, [&](std::size_t t) {
    const Tree& tree = model.trees[t];
    std::vector<std::size_t> local(n);
    for (std::size_t r = 0; r < n; ++r) {
      const TreeNode& leaf =
          tree.nodes[static_cast<std::size_t>(route_sample(tree, model, dataset, r))];
      local[r] = argmax(leaf.value);
    }
    std::scoped_lock lock(merge);
    for (std::size_t r = 0; r < n; ++r) votes[r][local[r]] += 1.0;
  });
  out.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    out.labels[r] = static_cast<std::int32_t>(argmax(votes[r]));
  }
  return out;
}

std::string save_forest(const ForestModel& model) {
  model.validate();
  ordered_json doc;
  doc["task"] = model.task == TargetKind::classification ? "classification" : "regression";
  doc["n_trees"] = model.trees.size();
  doc["features"] = ordered_json::array();
  for (const FeatureSpec& spec : model.features) {
    ordered_json f;
    f["name"] = spec.name;
    f["kind"] = spec.kind == FeatureKind::numeric ? "numeric" : "categorical";
    if (spec.kind == FeatureKind::categorical) f["categories"] = spec.categories;
    doc["features"].push_back(std::move(f));
  }
  if (model.task == TargetKind::classification) doc["classes"] = model.classes;
  doc["trees"] = ordered_json::array();
  for (const Tree& tree : model.trees) {
    ordered_json t;
    t["root"] = tree.root;
    t["nodes"] = ordered_json::array();
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      const TreeNode& node = tree.nodes[id];
      ordered_json nj;
      nj["id"] = id;
      if (node.kind == TreeNode::Kind::split) {
        nj["kind"] = "split";
        nj["feature"] = node.feature;
        if (node.threshold.has_value()) {
          nj["threshold"] = *node.threshold;
        } else {
          nj["subset"] = node.subset;
        }
        nj["left"] = node.left;
        nj["right"] = node.right;
      } else {
        nj["kind"] = "leaf";
        if (model.task == TargetKind::classification) {
          nj["value"] = node.value;
        } else {
          nj["value"] = node.value[0];
        }
      }
      t["nodes"].push_back(std::move(nj));
    }
    doc["trees"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

ForestModel load_forest(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("forest JSON does not parse: ") + e.what());
  }

  ForestModel model;
  try {
    std::string task = doc.at("task").get<std::string>();
    if (task == "classification") {
      model.task = TargetKind::classification;
    } else if (task == "regression") {
      model.task = TargetKind::regression;
    } else {
      throw ValidationError("forest JSON: unknown task '" + task + "'");
    }

    for (const auto& f : doc.at("features")) {
      FeatureSpec spec;
      spec.name = f.at("name").get<std::string>();
      std::string kind = f.at("kind").get<std::string>();
      if (kind == "numeric") {
        spec.kind = FeatureKind::numeric;
      } else if (kind == "categorical") {
        spec.kind = FeatureKind::categorical;
        spec.categories = f.at("categories").get<std::vector<std::string>>();
      } else {
        throw ValidationError("forest JSON: unknown feature kind '" + kind + "'");
      }
      model.features.push_back(std::move(spec));
    }

    if (model.task == TargetKind::classification) {
      model.classes = doc.at("classes").get<std::vector<std::string>>();
    }

    for (const auto& tj : doc.at("trees")) {
      Tree tree;
      tree.root = tj.at("root").get<int>();
      const auto& nodes = tj.at("nodes");
      tree.nodes.resize(nodes.size());
      std::vector<char> filled(nodes.size(), 0);
      for (const auto& nj : nodes) {
        long long id = nj.at("id").get<long long>();
        if (id < 0 || static_cast<std::size_t>(id) >= nodes.size()) {
          throw ValidationError("forest JSON: node id " + std::to_string(id) +
                                " outside [0, " + std::to_string(nodes.size()) + ")");
        }
        if (filled[static_cast<std::size_t>(id)]) {
          throw ValidationError("forest JSON: duplicate node id " + std::to_string(id));
        }
        filled[static_cast<std::size_t>(id)] = 1;
        TreeNode node;
        std::string kind = nj.at("kind").get<std::string>();
        if (kind == "split") {
          node.kind = TreeNode::Kind::split;
          node.feature = nj.at("feature").get<int>();
          if (nj.contains("threshold") == nj.contains("subset")) {
            throw ValidationError("forest JSON: split node " + std::to_string(id) +
                                  " needs exactly one of threshold/subset");
          }
          if (nj.contains("threshold")) {
            node.threshold = nj.at("threshold").get<double>();
          } else {
            node.subset = nj.at("subset").get<std::vector<std::int32_t>>();
          }
          node.left = nj.at("left").get<int>();
          node.right = nj.at("right").get<int>();
        } else if (kind == "leaf") {
          node.kind = TreeNode::Kind::leaf;
          const auto& value = nj.at("value");
          if (value.is_array()) {
            node.value = value.get<std::vector<double>>();
          } else {
            node.value = {value.get<double>()};
          }
        } else {
          throw ValidationError("forest JSON: unknown node kind '" + kind + "'");
        }
        tree.nodes[static_cast<std::size_t>(id)] = std::move(node);
      }
      model.trees.push_back(std::move(tree));
    }

    long long declared = doc.at("n_trees").get<long long>();
    if (declared != static_cast<long long>(model.trees.size())) {
      throw ValidationError("forest JSON: n_trees says " + std::to_string(declared) +
                            " but " + std::to_string(model.trees.size()) +
                            " trees are present");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("forest JSON is malformed: ") + e.what());
  }

  model.validate();
  return model;
}

Dataset synthesize_noise(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.row_count == 0) throw ValidationError("cannot synthesize noise from zero rows");
  Dataset noise = dataset;
  const std::size_t n = dataset.row_count;
  for (std::size_t c = 0; c < noise.columns.size(); ++c) {
    Rng rng(derive_seed(seed, "noise.column", c));
    FeatureColumn& col = noise.columns[c];
    if (col.kind == FeatureKind::numeric) {
      const std::vector<double>& src = dataset.columns[c].numeric;
      for (std::size_t r = 0; r < n; ++r) {
        col.numeric[r] = src[rng.next_below(n)];
      }
    } else {
      const std::vector<std::int32_t>& src = dataset.columns[c].codes;
      for (std::size_t r = 0; r < n; ++r) {
        col.codes[r] = src[rng.next_below(n)];
      }
    }
  }
  return noise;
}

Dataset make_real_vs_noise(const Dataset& dataset, std::uint64_t seed) {
  Dataset noise = synthesize_noise(dataset, seed);
  Dataset combined;
  combined.row_count = dataset.row_count * 2;
  for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
    FeatureColumn col = dataset.columns[c];
    const FeatureColumn& extra = noise.columns[c];
    if (col.kind == FeatureKind::numeric) {
      col.numeric.insert(col.numeric.end(), extra.numeric.begin(), extra.numeric.end());
    } else {
      col.codes.insert(col.codes.end(), extra.codes.begin(), extra.codes.end());
    }
    combined.columns.push_back(std::move(col));
  }
  combined.target.kind = TargetKind::classification;
  combined.target.classes = {"real", "synthetic"};
  combined.target.labels.assign(dataset.row_count, 0);
  combined.target.labels.insert(combined.target.labels.end(), dataset.row_count, 1);
  combined.validate();
  return combined;
}

}  // namespace fgc
