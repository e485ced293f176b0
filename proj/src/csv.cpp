#include "fgc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fgc/errors.hpp"

namespace fgc {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

double parse_double_field(const std::string& field, std::size_t row,
                          const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ValidationError("row " + std::to_string(row) + ", column '" + column +
                          "': cannot parse '" + field + "' as a number");
  }
  return value;
}

void check_writable_field(const std::string& field) {
  if (field.find(',') != std::string::npos ||
      field.find('\n') != std::string::npos ||
      field.find('\r') != std::string::npos) {
    throw ValidationError("value '" + field +
                          "' contains a separator and cannot be written as CSV");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InternalError("to_chars failed");
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

CsvSchema CsvSchema::parse(const std::string& text) {
  CsvSchema schema;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line.erase(0, start);
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("schema line " + std::to_string(line_no) +
                            ": expected 'column=kind', got '" + raw + "'");
    }
    std::string name = line.substr(0, eq);
    std::string kind_text = line.substr(eq + 1);
    Kind kind;
    if (kind_text == "numeric") {
      kind = Kind::numeric;
    } else if (kind_text == "categorical") {
      kind = Kind::categorical;
    } else if (kind_text == "class") {
      kind = Kind::target_class;
    } else if (kind_text == "target_numeric") {
      kind = Kind::target_numeric;
    } else {
      throw ValidationError("schema line " + std::to_string(line_no) +
                            ": unknown kind '" + kind_text + "'");
    }
    if (!schema.kinds.emplace(name, kind).second) {
      throw ValidationError("schema declares column '" + name + "' twice");
    }
  }
  return schema;
}

CsvSchema CsvSchema::load(const std::string& path) {
  return parse(read_file(path));
}

std::string CsvSchema::serialize(const std::vector<std::string>& column_order) const {
  std::string out;
  for (const std::string& name : column_order) {
    auto it = kinds.find(name);
    if (it == kinds.end()) throw InternalError("schema missing column '" + name + "'");
    out += name;
    out += '=';
    switch (it->second) {
      case Kind::numeric: out += "numeric"; break;
      case Kind::categorical: out += "categorical"; break;
      case Kind::target_class: out += "class"; break;
      case Kind::target_numeric: out += "target_numeric"; break;
    }
    out += '\n';
  }
  return out;
}

Dataset parse_csv(const std::string& csv_text, const CsvSchema& schema) {
  std::vector<std::string> lines = split_lines(csv_text);
  if (lines.empty()) throw ValidationError("CSV is empty (missing header row)");

  std::vector<std::string> header = split_line(lines[0]);
  std::set<std::string> seen;
  for (const std::string& name : header) {
    if (name.empty()) throw ValidationError("CSV header has an empty column name");
    if (!seen.insert(name).second) {
      throw ValidationError("CSV header repeats column '" + name + "'");
    }
    if (schema.kinds.find(name) == schema.kinds.end()) {
      throw ValidationError("column '" + name + "' is not declared in the schema");
    }
  }
  for (const auto& [name, kind] : schema.kinds) {
    (void)kind;
    if (seen.find(name) == seen.end()) {
      throw ValidationError("schema column '" + name + "' is missing from the CSV header");
    }
  }

  const std::size_t n_cols = header.size();
  const std::size_t n_rows = lines.size() - 1;

  int target_col = -1;
  for (std::size_t c = 0; c < n_cols; ++c) {
    CsvSchema::Kind kind = schema.kinds.at(header[c]);
    if (kind == CsvSchema::Kind::target_class || kind == CsvSchema::Kind::target_numeric) {
      if (target_col >= 0) {
        throw ValidationError("schema declares more than one target column ('" +
                              header[static_cast<std::size_t>(target_col)] + "' and '" +
                              header[c] + "')");
      }
      target_col = static_cast<int>(c);
    }
  }

  // Raw cells per column, then typed per the schema.
  std::vector<std::vector<std::string>> cells(n_cols);
  for (auto& col : cells) col.reserve(n_rows);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<std::string> fields = split_line(lines[r]);
    if (fields.size() != n_cols) {
      throw ValidationError("row " + std::to_string(r) + ": expected " +
                            std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (fields[c].empty()) {
        throw ValidationError("row " + std::to_string(r) + ", column '" + header[c] +
                              "': missing cell");
      }
      cells[c].push_back(std::move(fields[c]));
    }
  }

  Dataset dataset;
  dataset.row_count = n_rows;
  for (std::size_t c = 0; c < n_cols; ++c) {
    const std::string& name = header[c];
    CsvSchema::Kind kind = schema.kinds.at(name);
    if (kind == CsvSchema::Kind::numeric) {
      FeatureColumn col;
      col.name = name;
      col.kind = FeatureKind::numeric;
      col.numeric.reserve(n_rows);
      for (std::size_t r = 0; r < n_rows; ++r) {
        col.numeric.push_back(parse_double_field(cells[c][r], r + 1, name));
      }
      dataset.columns.push_back(std::move(col));
    } else if (kind == CsvSchema::Kind::categorical) {
      FeatureColumn col;
      col.name = name;
      col.kind = FeatureKind::categorical;
      std::set<std::string> uniq(cells[c].begin(), cells[c].end());
      col.categories.assign(uniq.begin(), uniq.end());
      col.codes.reserve(n_rows);
      for (const std::string& v : cells[c]) {
        auto it = std::lower_bound(col.categories.begin(), col.categories.end(), v);
        col.codes.push_back(static_cast<int>(it - col.categories.begin()));
      }
      dataset.columns.push_back(std::move(col));
    } else if (kind == CsvSchema::Kind::target_class) {
      TargetColumn& t = dataset.target;
      t.kind = TargetKind::classification;
      std::set<std::string> uniq(cells[c].begin(), cells[c].end());
      t.classes.assign(uniq.begin(), uniq.end());
      t.labels.reserve(n_rows);
      for (const std::string& v : cells[c]) {
        auto it = std::lower_bound(t.classes.begin(), t.classes.end(), v);
        t.labels.push_back(static_cast<int>(it - t.classes.begin()));
      }
    } else {
      TargetColumn& t = dataset.target;
      t.kind = TargetKind::regression;
      t.values.reserve(n_rows);
      for (std::size_t r = 0; r < n_rows; ++r) {
        t.values.push_back(parse_double_field(cells[c][r], r + 1, name));
      }
    }
  }
  if (target_col < 0) {
    throw ValidationError("schema declares no target column (class or target_numeric)");
  }
  dataset.validate();
  return dataset;
}

Dataset load_csv(const std::string& data_path, const std::string& schema_path) {
  CsvSchema schema = CsvSchema::load(schema_path);
  return parse_csv(read_file(data_path), schema);
}

std::string serialize_csv(const Dataset& dataset) {
  std::string out;
  bool first = true;
  for (const FeatureColumn& col : dataset.columns) {
    if (!first) out += ',';
    check_writable_field(col.name);
    out += col.name;
    first = false;
  }
  if (!first) out += ',';
  out += "target\n";

  for (std::size_t r = 0; r < dataset.row_count; ++r) {
    first = true;
    for (const FeatureColumn& col : dataset.columns) {
      if (!first) out += ',';
      if (col.kind == FeatureKind::numeric) {
        out += format_double(col.numeric[r]);
      } else {
        const std::string& cat = col.categories[static_cast<std::size_t>(col.codes[r])];
        check_writable_field(cat);
        out += cat;
      }
      first = false;
    }
    if (!first) out += ',';
    if (dataset.target.kind == TargetKind::classification) {
      const std::string& label =
          dataset.target.classes[static_cast<std::size_t>(dataset.target.labels[r])];
      check_writable_field(label);
      out += label;
    } else {
      out += format_double(dataset.target.values[r]);
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::string& data_path,
              const std::string& schema_path) {
  CsvSchema schema;
  std::vector<std::string> order;
  for (const FeatureColumn& col : dataset.columns) {
    schema.kinds[col.name] = col.kind == FeatureKind::numeric
                                 ? CsvSchema::Kind::numeric
                                 : CsvSchema::Kind::categorical;
    order.push_back(col.name);
  }
  schema.kinds["target"] = dataset.target.kind == TargetKind::classification
                               ? CsvSchema::Kind::target_class
                               : CsvSchema::Kind::target_numeric;
  order.push_back("target");
  write_file(data_path, serialize_csv(dataset));
  write_file(schema_path, schema.serialize(order));
}

std::string serialize_partition(const Partition& partition) {
  std::string out = "row_index,cluster\n";
  for (std::size_t i = 0; i < partition.assignments.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(partition.assignments[i] + 1);
    out += '\n';
  }
  return out;
}

Partition parse_partition(const std::string& csv_text) {
  std::vector<std::string> lines = split_lines(csv_text);
  if (lines.empty() || lines[0] != "row_index,cluster") {
    throw ValidationError("partition CSV must start with header 'row_index,cluster'");
  }
  Partition partition;
  int max_cluster = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<std::string> fields = split_line(lines[r]);
    if (fields.size() != 2) {
      throw ValidationError("partition row " + std::to_string(r) +
                            ": expected 2 fields, got " + std::to_string(fields.size()));
    }
    long row_index = 0;
    long cluster = 0;
    auto parse_long = [&](const std::string& f, const char* what) {
      long v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ValidationError("partition row " + std::to_string(r) +
                              ": cannot parse " + what + " '" + f + "'");
      }
      return v;
    };
    row_index = parse_long(fields[0], "row index");
    cluster = parse_long(fields[1], "cluster id");
    if (row_index != static_cast<long>(r)) {
      throw ValidationError("partition row " + std::to_string(r) +
                            ": row_index must be " + std::to_string(r) + ", got " +
                            std::to_string(row_index));
    }
    if (cluster < 1) {
      throw ValidationError("partition row " + std::to_string(r) +
                            ": cluster ids are 1-based, got " + std::to_string(cluster));
    }
    partition.assignments.push_back(static_cast<int>(cluster - 1));
    max_cluster = std::max(max_cluster, static_cast<int>(cluster));
  }
  partition.k = max_cluster;
  partition.validate();
  return partition;
}

void save_partition(const Partition& partition, const std::string& path) {
  write_file(path, serialize_partition(partition));
}

Partition load_partition(const std::string& path) {
  return parse_partition(read_file(path));
}

}  // namespace fgc
