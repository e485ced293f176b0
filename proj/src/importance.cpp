#include "fgc/importance.hpp"

#include <algorithm>
#include <cmath>

#include "fgc/errors.hpp"

namespace fgc {

double empirical_quantile(const std::vector<double>& sorted_values, double q) {
  const std::size_t n = sorted_values.size();
  if (n == 0) throw ValidationError("quantile of an empty sample");
  if (n == 1) return sorted_values[0];
  double pos = q * static_cast<double>(n - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo >= n - 1) return sorted_values[n - 1];
  double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

namespace {

void check_mass_vector(const std::vector<double>& p, const char* name) {
  if (p.empty()) throw ValidationError(std::string(name) + " mass vector is empty");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError(std::string(name) + " mass vector has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError(std::string(name) + " mass vector sums to " +
                          std::to_string(sum) + ", not 1");
  }
}

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> out(v);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ImportanceMetric default_metric(const Dataset& dataset) {
  std::size_t numeric = 0;
  for (const FeatureColumn& col : dataset.columns) {
    if (col.kind == FeatureKind::numeric) ++numeric;
  }
  return numeric * 2 > dataset.columns.size() ? ImportanceMetric::wasserstein
                                              : ImportanceMetric::jensen_shannon;
}

double wasserstein_1d(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("wasserstein needs non-empty samples");
  std::vector<double> sa = sorted_copy(a);
  std::vector<double> sb = sorted_copy(b);

  // Walk the merged breakpoints; between consecutive ones both CDFs are
  // constant, so the integral is a sum of |F - G| * gap terms.
  std::size_t ia = 0, ib = 0;
  double prev = 0.0;
  bool have_prev = false;
  double total = 0.0;
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  while (ia < sa.size() || ib < sb.size()) {
    double x;
    if (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) {
      x = sa[ia];
    } else {
      x = sb[ib];
    }
    if (have_prev && x > prev) {
      double f = static_cast<double>(ia) / na;
      double g = static_cast<double>(ib) / nb;
      total += std::abs(f - g) * (x - prev);
    }
    while (ia < sa.size() && sa[ia] == x) ++ia;
    while (ib < sb.size() && sb[ib] == x) ++ib;
    prev = x;
    have_prev = true;
  }
  return total;
}

double jensen_shannon_distance(const std::vector<double>& p,
                               const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw ValidationError("jensen-shannon needs mass vectors over the same bins");
  }
  check_mass_vector(p, "first");
  check_mass_vector(q, "second");

  double divergence = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) divergence += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) divergence += 0.5 * q[i] * std::log2(q[i] / m);
  }
  if (divergence < 0.0) divergence = 0.0;  // guard tiny negative rounding
  return std::sqrt(divergence);
}

BinningSpec bin_numeric(const std::vector<double>& values, const BinningBounds& bounds) {
  if (values.empty()) throw ValidationError("cannot bin an empty sample");
  if (bounds.min_bins < 1 || bounds.max_bins < bounds.min_bins) {
    throw ValidationError("invalid binning bounds");
  }
  std::vector<double> sorted = sorted_copy(values);
  const double lo = sorted.front();
  const double hi = sorted.back();

  BinningSpec spec;
  if (lo == hi) {
    spec.constant = true;
    spec.bin_count = 1;
    spec.edges = {lo, hi};
    return spec;
  }

  const double n = static_cast<double>(sorted.size());
  const double iqr = empirical_quantile(sorted, 0.75) - empirical_quantile(sorted, 0.25);
  std::size_t count;
  if (iqr > 0.0) {
    double width = 2.0 * iqr * std::pow(n, -1.0 / 3.0);
    double raw = std::ceil((hi - lo) / width);
    count = raw >= static_cast<double>(bounds.max_bins)
                ? bounds.max_bins
                : static_cast<std::size_t>(raw);
  } else {
    count = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
  }
  count = std::clamp(count, bounds.min_bins, bounds.max_bins);

  // Quantile edges give approximately equal occupancy; duplicates collapse
  // when the data is heavily tied.
  spec.edges.push_back(sorted.front());
  for (std::size_t j = 1; j < count; ++j) {
    double e = empirical_quantile(sorted, static_cast<double>(j) / static_cast<double>(count));
    if (e > spec.edges.back()) spec.edges.push_back(e);
  }
  if (sorted.back() > spec.edges.back()) spec.edges.push_back(sorted.back());
  spec.bin_count = spec.edges.size() - 1;
  if (spec.bin_count == 0) {
    spec.constant = true;
    spec.bin_count = 1;
    spec.edges = {lo, hi};
  }
  return spec;
}

std::vector<double> histogram_mass(const std::vector<double>& values,
                                   const BinningSpec& spec) {
  if (values.empty()) throw ValidationError("cannot histogram an empty sample");
  if (spec.edges.size() != spec.bin_count + 1) {
    throw InternalError("binning spec edges do not match its bin count");
  }
  std::vector<double> mass(spec.bin_count, 0.0);
  for (double v : values) {
    // upper_bound - 1 puts v in [edge_i, edge_{i+1}); clamping folds the
    // closed last bin and any out-of-range values into the end bins.
    auto it = std::upper_bound(spec.edges.begin(), spec.edges.end(), v);
    std::size_t idx = it == spec.edges.begin()
                          ? 0
                          : static_cast<std::size_t>(it - spec.edges.begin()) - 1;
    if (idx >= spec.bin_count) idx = spec.bin_count - 1;
    mass[idx] += 1.0;
  }
  for (double& m : mass) m /= static_cast<double>(values.size());
  return mass;
}

ImportanceReport local_importance(const Dataset& dataset, const Partition& clusters,
                                  ImportanceMetric metric, const BinningBounds& bounds) {
  clusters.validate();
  if (clusters.assignments.size() != dataset.row_count) {
    throw ValidationError("partition does not cover the dataset");
  }

  const auto k = static_cast<std::size_t>(clusters.k);
  const std::size_t n_features = dataset.columns.size();
  const std::size_t n = dataset.row_count;

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t r = 0; r < n; ++r) {
    members[static_cast<std::size_t>(clusters.assignments[r])].push_back(r);
  }

  ImportanceReport report;
  report.metric = metric;
  for (const FeatureColumn& col : dataset.columns) report.features.push_back(col.name);
  report.raw_local.assign(k, std::vector<double>(n_features, 0.0));
  report.local.assign(k, std::vector<double>(n_features, 0.0));
  report.global.assign(n_features, 0.0);
  report.all_zero_cluster.assign(k, false);
  report.low_confidence_cluster.assign(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    report.low_confidence_cluster[i] = members[i].size() < 2;
  }

  for (std::size_t f = 0; f < n_features; ++f) {
    const FeatureColumn& col = dataset.columns[f];
    if (col.kind == FeatureKind::numeric) {
      if (metric == ImportanceMetric::wasserstein) {
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<double> within;
          within.reserve(members[i].size());
          for (std::size_t r : members[i]) within.push_back(col.numeric[r]);
          report.raw_local[i][f] = wasserstein_1d(within, col.numeric);
        }
      } else {
        BinningSpec spec = bin_numeric(col.numeric, bounds);
        if (spec.constant) continue;  // no shift is expressible; distances stay 0
        std::vector<double> background = histogram_mass(col.numeric, spec);
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<double> within;
          within.reserve(members[i].size());
          for (std::size_t r : members[i]) within.push_back(col.numeric[r]);
          report.raw_local[i][f] =
              jensen_shannon_distance(histogram_mass(within, spec), background);
        }
      }
      continue;
    }

    const std::size_t n_cats = col.categories.size();
    if (metric == ImportanceMetric::jensen_shannon) {
      std::vector<double> background(n_cats, 0.0);
      for (std::int32_t code : col.codes) background[static_cast<std::size_t>(code)] += 1.0;
      for (double& v : background) v /= static_cast<double>(n);
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> within(n_cats, 0.0);
        for (std::size_t r : members[i]) {
          within[static_cast<std::size_t>(col.codes[r])] += 1.0;
        }
        for (double& v : within) v /= static_cast<double>(members[i].size());
        report.raw_local[i][f] = jensen_shannon_distance(within, background);
      }
    } else {
      // One-hot: each category becomes a 0/1 indicator; the feature's raw
      // distance is the largest per-indicator distance.
      for (std::size_t i = 0; i < k; ++i) {
        double best = 0.0;
        for (std::size_t c = 0; c < n_cats; ++c) {
          std::vector<double> within, background;
          within.reserve(members[i].size());
          background.reserve(n);
          for (std::size_t r : members[i]) {
            within.push_back(col.codes[r] == static_cast<std::int32_t>(c) ? 1.0 : 0.0);
          }
          for (std::size_t r = 0; r < n; ++r) {
            background.push_back(col.codes[r] == static_cast<std::int32_t>(c) ? 1.0 : 0.0);
          }
          best = std::max(best, wasserstein_1d(within, background));
        }
        report.raw_local[i][f] = best;
      }
    }
  }

  for (std::size_t i = 0; i < k; ++i) {
    double top = 0.0;
    for (double v : report.raw_local[i]) top = std::max(top, v);
    if (top == 0.0) {
      report.all_zero_cluster[i] = true;
      continue;  // normalized row stays all zero
    }
    for (std::size_t f = 0; f < n_features; ++f) {
      report.local[i][f] = report.raw_local[i][f] / top;
    }
  }
  for (std::size_t f = 0; f < n_features; ++f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += report.local[i][f];
    report.global[f] = sum / static_cast<double>(k);
  }
  return report;
}

}  // namespace fgc
