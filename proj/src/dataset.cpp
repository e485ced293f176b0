#include "fgc/dataset.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

#include "fgc/errors.hpp"

namespace fgc {

void Dataset::validate() const {
  std::set<std::string> names;
  for (const auto& col : columns) {
    if (col.name.empty()) throw ValidationError("dataset: empty feature name");
    if (!names.insert(col.name).second)
      throw ValidationError("dataset: duplicate feature name '" + col.name + "'");
    if (col.size() != row_count)
      throw ValidationError("dataset: column '" + col.name + "' has " +
                            std::to_string(col.size()) + " rows, expected " +
                            std::to_string(row_count));
    if (col.kind == FeatureKind::categorical) {
      for (int32_t code : col.codes) {
        if (code < 0 || static_cast<size_t>(code) >= col.categories.size())
          throw ValidationError("dataset: column '" + col.name +
                                "' has a value outside its category set");
      }
    }
  }
  if (target.size() != row_count)
    throw ValidationError("dataset: target length mismatch");
  if (target.kind == TargetKind::classification) {
    std::set<int32_t> present(target.labels.begin(), target.labels.end());
    if (present.size() < 2)
      throw ValidationError("dataset: class target needs at least 2 distinct labels");
    for (int32_t code : target.labels) {
      if (code < 0 || static_cast<size_t>(code) >= target.classes.size())
        throw ValidationError("dataset: target label code out of range");
    }
  }
}

const FeatureColumn& Dataset::column(const std::string& name) const {
  for (const auto& col : columns)
    if (col.name == name) return col;
  throw ValidationError("dataset: unknown column '" + name + "'");
}

int Dataset::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return static_cast<int>(i);
  return -1;
}

void Partition::validate() const {
  if (k <= 0) throw ValidationError("partition: k must be positive");
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int32_t a : assignments) {
    if (a < 0 || a >= k)
      throw ValidationError("partition: cluster index out of [0, k)");
    used[static_cast<size_t>(a)] = true;
  }
  for (int32_t c = 0; c < k; ++c) {
    if (!used[static_cast<size_t>(c)])
      throw ValidationError("partition: cluster " + std::to_string(c + 1) +
                            " is empty");
  }
}

StandardizeResult standardize(const Dataset& dataset) {
  StandardizeResult out;
  out.data = dataset;
  for (auto& col : out.data.columns) {
    if (col.kind != FeatureKind::numeric) continue;
    const size_t n = col.numeric.size();
    double mean = 0.0;
    for (double v : col.numeric) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : col.numeric) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    ColumnStats stats{col.name, mean, sd, sd == 0.0};
    if (stats.constant) {
      for (auto& v : col.numeric) v = 0.0;
    } else {
      for (auto& v : col.numeric) v = (v - mean) / sd;
    }
    out.stats.push_back(stats);
  }
  return out;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  if (a.assignments.size() != b.assignments.size())
    throw ValidationError("adjusted_rand_index: partition lengths differ");
  const size_t n = a.assignments.size();
  if (n == 0) throw ValidationError("adjusted_rand_index: empty partitions");

  auto pairs2 = [](uint64_t m) -> double {
    return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  };

  std::unordered_map<int64_t, uint64_t> cell;
  std::unordered_map<int32_t, uint64_t> row_sum, col_sum;
  for (size_t i = 0; i < n; ++i) {
    const int32_t ai = a.assignments[i];
    const int32_t bi = b.assignments[i];
    cell[(static_cast<int64_t>(ai) << 32) | static_cast<uint32_t>(bi)]++;
    row_sum[ai]++;
    col_sum[bi]++;
  }

  double sum_cells = 0.0;
  for (const auto& [key, count] : cell) sum_cells += pairs2(count);
  double sum_rows = 0.0;
  for (const auto& [key, count] : row_sum) sum_rows += pairs2(count);
  double sum_cols = 0.0;
  for (const auto& [key, count] : col_sum) sum_cols += pairs2(count);

  const double total = pairs2(n);
  if (total == 0.0) return 1.0;  // single row: partitions trivially agree
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  const double denom = maximum - expected;
  if (denom == 0.0) return 1.0;  // both trivial partitions (all-singleton or one-cluster)
  return (sum_cells - expected) / denom;
}

}  // namespace fgc
