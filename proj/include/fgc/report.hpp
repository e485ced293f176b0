#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgc/dataset.hpp"
#include "fgc/importance.hpp"

namespace fgc {

// Five-number summary of raw values plus probability mass over the
// feature's shared background bins (numeric) or category set (categorical).
// The quartile fields are only meaningful for numeric panels.
struct DistributionSummary {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  std::vector<double> histogram;
};

// Raw-value distribution panel for one reported feature across all clusters.
struct FeaturePanel {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<double> bin_edges;        // numeric: shared background bin edges
  std::vector<std::string> categories;  // categorical: level labels
  std::vector<DistributionSummary> per_cluster;
};

// Per-cluster level proportions for one labelled column (the target or an
// annotation); each cluster's proportions sum to 1.
struct CompositionRow {
  std::string name;
  std::vector<std::string> levels;
  std::vector<std::vector<double>> proportions;  // [cluster][level]
};

struct DecisionPathReport {
  int32_t k = 0;
  std::vector<int32_t> cluster_order;  // 1-based ids, ascending
  std::vector<int32_t> cluster_sizes;
  std::vector<std::string> feature_order;  // global importance desc, name asc
  std::vector<double> feature_importance;  // aligned with feature_order
  // [cluster][feature] mean standardized value. Categorical features enter
  // as the standardized indicator of their most frequent category.
  std::vector<std::vector<double>> heatmap;
  TargetKind target_kind = TargetKind::classification;
  CompositionRow target_composition;  // classification targets
  std::vector<double> target_mean;    // regression targets, per cluster
  std::vector<double> target_stddev;
  std::vector<CompositionRow> annotations;
  std::vector<FeaturePanel> panels;  // aligned with feature_order
};

struct ReportOptions {
  int top_n = 30;                        // feature cap by global importance
  std::vector<std::string> pinned;       // features kept regardless of rank
  std::vector<std::string> annotations;  // categorical columns to summarize
  BinningBounds bins;
};

// Assemble the decision-path structures: per-cluster means of standardized
// features, raw-value distribution summaries over shared background bins,
// and composition rows for the target and any annotation columns. Features
// are the top_n by global importance plus any pinned ones, ordered by
// descending importance with name ties broken lexicographically.
DecisionPathReport build_report(const Dataset& dataset, const Partition& clusters,
                                const ImportanceReport& importance,
                                const ReportOptions& options = {});

// Serializations; cluster ids are 1-based in every export.
std::string report_to_json(const DecisionPathReport& report);
std::string heatmap_to_csv(const DecisionPathReport& report);

// Deterministic standalone SVG: the heatmap under a diverging color scale
// clipped at +/-2 standardized units, composition bars, and per-feature
// histogram small multiples. Identical reports render byte-identically.
std::string render_svg(const DecisionPathReport& report);

}  // namespace fgc
