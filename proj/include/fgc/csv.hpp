#pragma once

#include <map>
#include <string>

#include "fgc/dataset.hpp"

namespace fgc {

// Column kind declarations for a CSV file, parsed from a key=value sidecar:
// one `column_name=numeric|categorical|class|target_numeric` line per column.
// Kinds are always declared, never inferred.
struct CsvSchema {
  enum class Kind { numeric, categorical, target_class, target_numeric };
  std::map<std::string, Kind> kinds;

  static CsvSchema parse(const std::string& text);
  static CsvSchema load(const std::string& path);
  std::string serialize(const std::vector<std::string>& column_order) const;
};

// UTF-8, header row, comma separators, dot decimals. Parse failures name
// the offending row/column. Missing cells are rejected.
Dataset load_csv(const std::string& data_path, const std::string& schema_path);
Dataset parse_csv(const std::string& csv_text, const CsvSchema& schema);

std::string serialize_csv(const Dataset& dataset);
void save_csv(const Dataset& dataset, const std::string& data_path,
              const std::string& schema_path);

// Partition wire format: row_index,cluster with 1-based cluster ids.
std::string serialize_partition(const Partition& partition);
Partition parse_partition(const std::string& csv_text);
void save_partition(const Partition& partition, const std::string& path);
Partition load_partition(const std::string& path);

// Shortest round-trip decimal rendering (std::to_chars); locale-independent.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fgc
