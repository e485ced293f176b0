#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fgc {

enum class FeatureKind { numeric, categorical };
enum class TargetKind { classification, regression };

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<double> numeric;          // filled when kind == numeric
  std::vector<int32_t> codes;           // filled when kind == categorical
  std::vector<std::string> categories;  // category labels, sorted ascending

  size_t size() const {
    return kind == FeatureKind::numeric ? numeric.size() : codes.size();
  }
};

struct TargetColumn {
  TargetKind kind = TargetKind::classification;
  std::vector<int32_t> labels;        // class codes into `classes`
  std::vector<std::string> classes;   // class labels, sorted ascending
  std::vector<double> values;         // regression targets

  size_t size() const {
    return kind == TargetKind::classification ? labels.size() : values.size();
  }
};

struct Dataset {
  std::vector<FeatureColumn> columns;
  TargetColumn target;
  size_t row_count = 0;

  void validate() const;  // throws ValidationError on broken invariants
  const FeatureColumn& column(const std::string& name) const;
  int column_index(const std::string& name) const;  // -1 when absent
};

// Cluster assignments for every row; ids are 0-based internally and
// rendered 1-based in CSV exports.
struct Partition {
  std::vector<int32_t> assignments;
  int32_t k = 0;

  void validate() const;  // every id in [0, k) and every cluster non-empty
};

struct ColumnStats {
  std::string column;
  double mean = 0.0;
  double stddev = 0.0;  // population (1/n) convention
  bool constant = false;
};

struct StandardizeResult {
  Dataset data;
  std::vector<ColumnStats> stats;  // one entry per numeric column
};

// Numeric columns to zero mean / unit variance (population stddev, so the
// documented {1,2,3} -> {-1.2247, 0, 1.2247} example is exact). Constant
// columns map to all-zeros and are flagged; categoricals pass through.
StandardizeResult standardize(const Dataset& dataset);

// Permutation-model adjusted Rand index from the contingency table.
double adjusted_rand_index(const Partition& a, const Partition& b);

}  // namespace fgc
