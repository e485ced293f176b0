#include "fgc/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>

#include "fgc/csv.hpp"
#include "fgc/errors.hpp"
#include "json.hpp"

namespace fgc {

namespace {

using ordered_json = nlohmann::ordered_json;

struct RankedFeature {
  std::string name;
  double global = 0.0;
};

// Descending importance, names break ties so the order is total.
bool rank_before(const RankedFeature& a, const RankedFeature& b) {
  if (a.global != b.global) return a.global > b.global;
  return a.name < b.name;
}

// Standardized view of one feature as a flat vector: numeric columns come
// from the standardized dataset, categoricals become the standardized
// indicator of their most frequent category (ties pick the lowest code).
std::vector<double> standardized_values(const Dataset& dataset,
                                        const Dataset& standardized,
                                        const std::string& name) {
  const FeatureColumn& col = dataset.column(name);
  if (col.kind == FeatureKind::numeric) return standardized.column(name).numeric;

  const std::size_t n = col.codes.size();
  std::vector<std::size_t> counts(col.categories.size(), 0);
  for (int32_t code : col.codes) counts[static_cast<std::size_t>(code)]++;
  std::size_t modal = 0;
  for (std::size_t c = 1; c < counts.size(); c++) {
    if (counts[c] > counts[modal]) modal = c;
  }
  double p = static_cast<double>(counts[modal]) / static_cast<double>(n);
  double sd = std::sqrt(p * (1.0 - p));
  std::vector<double> z(n, 0.0);
  if (sd == 0.0) return z;  // single category present: constant, all zeros
  for (std::size_t i = 0; i < n; i++) {
    double ind = col.codes[i] == static_cast<int32_t>(modal) ? 1.0 : 0.0;
    z[i] = (ind - p) / sd;
  }
  return z;
}

CompositionRow composition_of(const std::string& name,
                              const std::vector<std::string>& levels,
                              const std::vector<int32_t>& codes,
                              const std::vector<std::vector<int32_t>>& members) {
  CompositionRow row;
  row.name = name;
  row.levels = levels;
  row.proportions.assign(members.size(), std::vector<double>(levels.size(), 0.0));
  for (std::size_t j = 0; j < members.size(); j++) {
    for (int32_t r : members[j]) {
      row.proportions[j][static_cast<std::size_t>(codes[static_cast<std::size_t>(r)])] += 1.0;
    }
    for (double& p : row.proportions[j]) {
      p /= static_cast<double>(members[j].size());
    }
  }
  return row;
}

void check_csv_safe(const std::string& name) {
  if (name.find_first_of(",\"\n\r") != std::string::npos) {
    throw ValidationError("feature name '" + name +
                          "' contains CSV separator characters");
  }
}

}  // namespace

DecisionPathReport build_report(const Dataset& dataset, const Partition& clusters,
                                const ImportanceReport& importance,
                                const ReportOptions& options) {
  if (options.top_n < 1) throw ValidationError("report top_n must be at least 1");
  dataset.validate();
  clusters.validate();
  if (clusters.assignments.size() != dataset.row_count) {
    throw ValidationError("partition covers " + std::to_string(clusters.assignments.size()) +
                          " rows but the dataset has " + std::to_string(dataset.row_count));
  }
  if (importance.features.size() != importance.global.size()) {
    throw ValidationError("importance report is inconsistent: " +
                          std::to_string(importance.features.size()) + " features, " +
                          std::to_string(importance.global.size()) + " global scores");
  }
  if (importance.local.size() != static_cast<std::size_t>(clusters.k)) {
    throw ValidationError("importance report has " + std::to_string(importance.local.size()) +
                          " clusters but the partition has " + std::to_string(clusters.k));
  }

  std::vector<RankedFeature> ranked;
  ranked.reserve(importance.features.size());
  for (std::size_t i = 0; i < importance.features.size(); i++) {
    ranked.push_back({importance.features[i], importance.global[i]});
  }
  std::sort(ranked.begin(), ranked.end(), rank_before);

  std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(options.top_n), ranked.size());
  std::vector<RankedFeature> chosen(ranked.begin(), ranked.begin() + static_cast<long>(cap));
  for (const std::string& pin : options.pinned) {
    bool already = std::any_of(chosen.begin(), chosen.end(),
                               [&](const RankedFeature& f) { return f.name == pin; });
    if (already) continue;
    auto it = std::find_if(ranked.begin(), ranked.end(),
                           [&](const RankedFeature& f) { return f.name == pin; });
    if (it == ranked.end()) {
      throw ValidationError("pinned feature '" + pin + "' is not in the importance report");
    }
    chosen.push_back(*it);
  }
  std::sort(chosen.begin(), chosen.end(), rank_before);

  const int32_t k = clusters.k;
  DecisionPathReport rep;
  rep.k = k;
  for (int32_t j = 0; j < k; j++) rep.cluster_order.push_back(j + 1);

  std::vector<std::vector<int32_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < clusters.assignments.size(); i++) {
    members[static_cast<std::size_t>(clusters.assignments[i])].push_back(
        static_cast<int32_t>(i));
  }
  for (const auto& m : members) rep.cluster_sizes.push_back(static_cast<int32_t>(m.size()));

  for (const RankedFeature& f : chosen) {
    rep.feature_order.push_back(f.name);
    rep.feature_importance.push_back(f.global);
  }

  StandardizeResult standardized = standardize(dataset);
  rep.heatmap.assign(static_cast<std::size_t>(k),
                     std::vector<double>(chosen.size(), 0.0));
  for (std::size_t f = 0; f < chosen.size(); f++) {
    std::vector<double> z = standardized_values(dataset, standardized.data, chosen[f].name);
    for (std::size_t j = 0; j < members.size(); j++) {
      double sum = 0.0;
      for (int32_t r : members[j]) sum += z[static_cast<std::size_t>(r)];
      rep.heatmap[j][f] = sum / static_cast<double>(members[j].size());
    }
  }

  for (const RankedFeature& f : chosen) {
    const FeatureColumn& col = dataset.column(f.name);
    FeaturePanel panel;
    panel.name = f.name;
    panel.kind = col.kind;
    if (col.kind == FeatureKind::numeric) {
      BinningSpec spec = bin_numeric(col.numeric, options.bins);
      panel.bin_edges = spec.edges;
      for (const auto& m : members) {
        std::vector<double> vals;
        vals.reserve(m.size());
        for (int32_t r : m) vals.push_back(col.numeric[static_cast<std::size_t>(r)]);
        DistributionSummary s;
        s.histogram = histogram_mass(vals, spec);
        std::sort(vals.begin(), vals.end());
        s.min = vals.front();
        s.q25 = empirical_quantile(vals, 0.25);
        s.median = empirical_quantile(vals, 0.5);
        s.q75 = empirical_quantile(vals, 0.75);
        s.max = vals.back();
        panel.per_cluster.push_back(std::move(s));
      }
    } else {
      panel.categories = col.categories;
      for (const auto& m : members) {
        DistributionSummary s;
        s.histogram.assign(col.categories.size(), 0.0);
        for (int32_t r : m) {
          s.histogram[static_cast<std::size_t>(col.codes[static_cast<std::size_t>(r)])] += 1.0;
        }
        for (double& mass : s.histogram) mass /= static_cast<double>(m.size());
        panel.per_cluster.push_back(std::move(s));
      }
    }
    rep.panels.push_back(std::move(panel));
  }

  rep.target_kind = dataset.target.kind;
  if (dataset.target.kind == TargetKind::classification) {
    rep.target_composition =
        composition_of("target", dataset.target.classes, dataset.target.labels, members);
  } else {
    for (const auto& m : members) {
      double mean = 0.0;
      for (int32_t r : m) mean += dataset.target.values[static_cast<std::size_t>(r)];
      mean /= static_cast<double>(m.size());
      double var = 0.0;
      for (int32_t r : m) {
        double d = dataset.target.values[static_cast<std::size_t>(r)] - mean;
        var += d * d;
      }
      var /= static_cast<double>(m.size());
      rep.target_mean.push_back(mean);
      rep.target_stddev.push_back(std::sqrt(var));
    }
  }

  for (const std::string& name : options.annotations) {
    const FeatureColumn& col = dataset.column(name);
    if (col.kind != FeatureKind::categorical) {
      throw ValidationError("annotation column '" + name + "' must be categorical");
    }
    rep.annotations.push_back(composition_of(name, col.categories, col.codes, members));
  }

  return rep;
}

std::string report_to_json(const DecisionPathReport& rep) {
  ordered_json j;
  j["k"] = rep.k;
  j["cluster_order"] = rep.cluster_order;
  j["cluster_sizes"] = rep.cluster_sizes;
  ordered_json features = ordered_json::array();
  for (std::size_t f = 0; f < rep.feature_order.size(); f++) {
    ordered_json item;
    item["name"] = rep.feature_order[f];
    item["global_importance"] = rep.feature_importance[f];
    features.push_back(std::move(item));
  }
  j["features"] = std::move(features);
  j["heatmap"] = rep.heatmap;

  ordered_json target;
  if (rep.target_kind == TargetKind::classification) {
    target["kind"] = "classification";
    target["levels"] = rep.target_composition.levels;
    target["composition"] = rep.target_composition.proportions;
  } else {
    target["kind"] = "regression";
    target["mean"] = rep.target_mean;
    target["stddev"] = rep.target_stddev;
  }
  j["target"] = std::move(target);

  ordered_json annotations = ordered_json::array();
  for (const CompositionRow& row : rep.annotations) {
    ordered_json item;
    item["name"] = row.name;
    item["levels"] = row.levels;
    item["composition"] = row.proportions;
    annotations.push_back(std::move(item));
  }
  j["annotations"] = std::move(annotations);

  ordered_json panels = ordered_json::array();
  for (const FeaturePanel& panel : rep.panels) {
    ordered_json item;
    item["name"] = panel.name;
    if (panel.kind == FeatureKind::numeric) {
      item["kind"] = "numeric";
      item["bin_edges"] = panel.bin_edges;
    } else {
      item["kind"] = "categorical";
      item["categories"] = panel.categories;
    }
    ordered_json per_cluster = ordered_json::array();
    for (const DistributionSummary& s : panel.per_cluster) {
      ordered_json cell;
      if (panel.kind == FeatureKind::numeric) {
        cell["min"] = s.min;
        cell["q25"] = s.q25;
        cell["median"] = s.median;
        cell["q75"] = s.q75;
        cell["max"] = s.max;
      }
      cell["histogram"] = s.histogram;
      per_cluster.push_back(std::move(cell));
    }
    item["clusters"] = std::move(per_cluster);
    panels.push_back(std::move(item));
  }
  j["panels"] = std::move(panels);

  return j.dump(2) + "\n";
}

std::string heatmap_to_csv(const DecisionPathReport& rep) {
  std::string out = "cluster";
  for (const std::string& name : rep.feature_order) {
    check_csv_safe(name);
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t j = 0; j < rep.heatmap.size(); j++) {
    out += std::to_string(j + 1);
    for (double v : rep.heatmap[j]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG rendering. Every coordinate goes through fmt2() so output bytes are a
// pure function of the report.

namespace {

std::string fmt2(double v) {
  std::array<char, 64> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed, 2);
  std::string s(buf.data(), res.ptr);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Blue-white-red ramp over [-2, 2], clipped.
std::string diverging_color(double v) {
  static const double kBlue[3] = {33.0, 102.0, 172.0};
  static const double kWhite[3] = {247.0, 247.0, 247.0};
  static const double kRed[3] = {178.0, 24.0, 43.0};
  double t = std::clamp(v, -2.0, 2.0) / 2.0;
  const double* end = t < 0.0 ? kBlue : kRed;
  double u = std::abs(t);
  std::string out = "rgb(";
  for (int c = 0; c < 3; c++) {
    long ch = std::lround(kWhite[c] + (end[c] - kWhite[c]) * u);
    out += std::to_string(ch);
    out += c < 2 ? "," : ")";
  }
  return out;
}

const char* kPalette[10] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                            "#59a14f", "#edc949", "#b07aa1", "#ff9da7",
                            "#9c755f", "#bab0ac"};

const char* cluster_color(std::size_t j) { return kPalette[j % 10]; }

void rect(std::string& s, double x, double y, double w, double h,
          const std::string& fill, const std::string& extra = "") {
  s += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" + fmt2(w) +
       "\" height=\"" + fmt2(h) + "\" fill=\"" + fill + "\"" + extra + "/>\n";
}

void text(std::string& s, double x, double y, const std::string& content,
          int size, const char* anchor = "start", const char* fill = "#1a1a1a",
          const char* weight = "") {
  s += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" font-size=\"" +
       std::to_string(size) + "\" text-anchor=\"";
  s += anchor;
  s += "\" fill=\"";
  s += fill;
  s += "\"";
  s += weight;
  s += ">" + xml_escape(content) + "</text>\n";
}

std::size_t longest(const std::vector<std::string>& names) {
  std::size_t best = 0;
  for (const auto& n : names) best = std::max(best, n.size());
  return best;
}

}  // namespace

std::string render_svg(const DecisionPathReport& rep) {
  if (rep.feature_order.empty()) throw ValidationError("report has no features");
  if (rep.k < 1) throw ValidationError("report has no clusters");
  if (rep.heatmap.size() != static_cast<std::size_t>(rep.k)) {
    throw ValidationError("report heatmap has " + std::to_string(rep.heatmap.size()) +
                          " rows for " + std::to_string(rep.k) + " clusters");
  }
  for (const auto& row : rep.heatmap) {
    if (row.size() != rep.feature_order.size()) {
      throw ValidationError("report heatmap width does not match the feature order");
    }
  }
  if (rep.panels.size() != rep.feature_order.size()) {
    throw ValidationError("report panels do not match the feature order");
  }

  const std::size_t k = static_cast<std::size_t>(rep.k);
  const std::size_t nf = rep.feature_order.size();
  const double margin = 16.0;
  const double cell_w = 56.0, cell_h = 24.0;
  const double plot_w = 96.0, plot_h = 56.0, plot_gap = 10.0;
  const double block_h = plot_h + 34.0;

  // Row-label gutter sized to the longest label we will draw.
  std::vector<std::string> labels = rep.feature_order;
  labels.push_back(rep.target_kind == TargetKind::classification ? "target"
                                                                 : "target (mean, sd)");
  for (const auto& a : rep.annotations) labels.push_back(a.name);
  double label_w = std::clamp(16.0 + 7.0 * static_cast<double>(longest(labels)), 110.0, 300.0);
  const double heat_x = margin + label_w;
  const double heat_y = 72.0;
  const double heat_bottom = heat_y + static_cast<double>(nf) * cell_h;
  const double imp_x = heat_x + static_cast<double>(k) * cell_w + 16.0;

  const double scale_y = heat_bottom + 16.0;
  double comp_y = scale_y + 44.0;
  std::vector<const CompositionRow*> comp_rows;
  if (rep.target_kind == TargetKind::classification) comp_rows.push_back(&rep.target_composition);
  for (const auto& a : rep.annotations) comp_rows.push_back(&a);

  double comp_cursor = comp_y + 18.0;
  std::vector<double> comp_row_y;
  std::vector<double> comp_row_h;
  std::size_t max_level_len = 0;
  if (rep.target_kind == TargetKind::regression) {
    comp_row_y.push_back(comp_cursor);
    comp_row_h.push_back(24.0);
    comp_cursor += 24.0;
  }
  for (const CompositionRow* row : comp_rows) {
    double h = std::max(24.0, 13.0 * static_cast<double>(row->levels.size()) + 8.0);
    comp_row_y.push_back(comp_cursor);
    comp_row_h.push_back(h);
    comp_cursor += h;
    max_level_len = std::max(max_level_len, longest(row->levels));
  }

  const double panels_y = comp_cursor + 24.0;
  double panels_bottom = panels_y + 18.0 + static_cast<double>(nf) * block_h;

  double width = std::max({imp_x + 180.0,
                           heat_x + static_cast<double>(k) * (plot_w + plot_gap) + margin,
                           imp_x + 24.0 + 7.0 * static_cast<double>(max_level_len) + margin});
  double height = panels_bottom + margin;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) +
       "\" height=\"" + fmt2(height) + "\" viewBox=\"0 0 " + fmt2(width) + " " +
       fmt2(height) + "\" font-family=\"monospace\">\n";
  s += "<desc>Decision-path summary. Heatmap cells are per-cluster means of "
       "standardized features on a diverging scale clipped at +/-2; panels show "
       "raw-value distributions over shared bins.</desc>\n";
  s += "<defs>\n<linearGradient id=\"scale\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">\n";
  s += "<stop offset=\"0\" stop-color=\"rgb(33,102,172)\"/>\n";
  s += "<stop offset=\"0.5\" stop-color=\"rgb(247,247,247)\"/>\n";
  s += "<stop offset=\"1\" stop-color=\"rgb(178,24,43)\"/>\n";
  s += "</linearGradient>\n</defs>\n";
  rect(s, 0, 0, width, height, "#ffffff");

  text(s, margin, 28.0, "Decision paths", 15, "start", "#1a1a1a",
       " font-weight=\"bold\"");
  std::string subtitle = "k=" + std::to_string(rep.k) + ", cluster sizes";
  for (std::size_t j = 0; j < rep.cluster_sizes.size(); j++) {
    subtitle += (j == 0 ? " " : "/") + std::to_string(rep.cluster_sizes[j]);
  }
  text(s, margin, 46.0, subtitle, 11, "start", "#555555");

  // Heatmap.
  for (std::size_t j = 0; j < k; j++) {
    text(s, heat_x + (static_cast<double>(j) + 0.5) * cell_w, heat_y - 8.0,
         "C" + std::to_string(j + 1), 11, "middle");
  }
  text(s, imp_x, heat_y - 8.0, "importance", 10, "start", "#555555");
  for (std::size_t f = 0; f < nf; f++) {
    double y = heat_y + static_cast<double>(f) * cell_h;
    text(s, heat_x - 8.0, y + cell_h / 2.0 + 3.5, rep.feature_order[f], 11, "end");
    for (std::size_t j = 0; j < k; j++) {
      double v = rep.heatmap[j][f];
      double x = heat_x + static_cast<double>(j) * cell_w;
      rect(s, x, y, cell_w - 2.0, cell_h - 2.0, diverging_color(v));
      const char* ink = std::abs(v) > 1.2 ? "#ffffff" : "#1a1a1a";
      text(s, x + (cell_w - 2.0) / 2.0, y + cell_h / 2.0 + 3.5, fmt2(v), 10,
           "middle", ink);
    }
    double imp = std::clamp(rep.feature_importance[f], 0.0, 1.0);
    rect(s, imp_x, y + 5.0, 60.0 * imp, cell_h - 12.0, "#8c8c8c");
    text(s, imp_x + 66.0, y + cell_h / 2.0 + 3.5, fmt2(rep.feature_importance[f]),
         10, "start", "#555555");
  }

  // Color scale bar.
  rect(s, heat_x, scale_y, 120.0, 10.0, "url(#scale)");
  text(s, heat_x, scale_y + 22.0, "-2", 9, "start", "#555555");
  text(s, heat_x + 60.0, scale_y + 22.0, "0", 9, "middle", "#555555");
  text(s, heat_x + 120.0, scale_y + 22.0, "+2", 9, "end", "#555555");
  text(s, heat_x + 132.0, scale_y + 9.0, "mean standardized value", 9, "start",
       "#555555");

  // Composition rows.
  text(s, margin, comp_y + 4.0, "Composition", 12, "start", "#1a1a1a",
       " font-weight=\"bold\"");
  std::size_t row_slot = 0;
  if (rep.target_kind == TargetKind::regression) {
    double y = comp_row_y[row_slot];
    text(s, heat_x - 8.0, y + 15.0, "target (mean, sd)", 11, "end");
    for (std::size_t j = 0; j < k; j++) {
      double x = heat_x + static_cast<double>(j) * cell_w;
      text(s, x + (cell_w - 2.0) / 2.0, y + 15.0,
           fmt2(rep.target_mean[j]) + " (" + fmt2(rep.target_stddev[j]) + ")", 8,
           "middle");
    }
    row_slot++;
  }
  for (const CompositionRow* row : comp_rows) {
    double y = comp_row_y[row_slot];
    double h = comp_row_h[row_slot];
    row_slot++;
    text(s, heat_x - 8.0, y + 15.0, row->name, 11, "end");
    for (std::size_t j = 0; j < k; j++) {
      double x = heat_x + static_cast<double>(j) * cell_w;
      double acc = 0.0;
      for (std::size_t g = 0; g < row->levels.size(); g++) {
        double wseg = row->proportions[j][g] * (cell_w - 6.0);
        if (wseg > 0.0) {
          rect(s, x + acc, y + 6.0, wseg, 14.0, cluster_color(g));
        }
        acc += wseg;
      }
    }
    for (std::size_t g = 0; g < row->levels.size(); g++) {
      double ly = y + 6.0 + 13.0 * static_cast<double>(g);
      rect(s, imp_x, ly, 9.0, 9.0, cluster_color(g));
      text(s, imp_x + 13.0, ly + 8.0, row->levels[g], 9, "start", "#555555");
    }
    (void)h;
  }

  // Distribution panels, one block per reported feature.
  text(s, margin, panels_y + 4.0, "Feature distributions", 12, "start", "#1a1a1a",
       " font-weight=\"bold\"");
  for (std::size_t f = 0; f < nf; f++) {
    const FeaturePanel& panel = rep.panels[f];
    double by = panels_y + 18.0 + static_cast<double>(f) * block_h;
    text(s, heat_x - 8.0, by + plot_h / 2.0 + 3.5, panel.name, 11, "end");
    double max_mass = 0.0;
    for (const auto& summary : panel.per_cluster) {
      for (double m : summary.histogram) max_mass = std::max(max_mass, m);
    }
    if (max_mass <= 0.0) max_mass = 1.0;
    for (std::size_t j = 0; j < k; j++) {
      double px = heat_x + static_cast<double>(j) * (plot_w + plot_gap);
      rect(s, px, by, plot_w, plot_h, "none",
           " stroke=\"#cccccc\" stroke-width=\"1\"");
      const std::vector<double>& mass = panel.per_cluster[j].histogram;
      double bw = plot_w / static_cast<double>(mass.size());
      for (std::size_t b = 0; b < mass.size(); b++) {
        double bh = (mass[b] / max_mass) * (plot_h - 6.0);
        if (bh <= 0.0) continue;
        rect(s, px + static_cast<double>(b) * bw + 0.5, by + plot_h - bh,
             bw - 1.0, bh, cluster_color(j));
      }
      text(s, px + 3.0, by + 10.0, "C" + std::to_string(j + 1), 8, "start",
           "#555555");
      if (panel.kind == FeatureKind::numeric) {
        text(s, px, by + plot_h + 11.0, fmt2(panel.bin_edges.front()), 8, "start",
             "#555555");
        text(s, px + plot_w, by + plot_h + 11.0, fmt2(panel.bin_edges.back()), 8,
             "end", "#555555");
      }
    }
    if (panel.kind == FeatureKind::categorical) {
      std::string cats = "categories: ";
      for (std::size_t c = 0; c < panel.categories.size(); c++) {
        if (c > 0) cats += ", ";
        cats += panel.categories[c];
      }
      if (cats.size() > 96) cats = cats.substr(0, 93) + "...";
      text(s, heat_x, by + plot_h + 11.0, cats, 8, "start", "#555555");
    }
  }

  s += "</svg>\n";
  return s;
}

}  // namespace fgc
