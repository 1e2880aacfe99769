// CSV ingestion: header row, comma delimiter, RFC-4180 style quoting.
// Column kinds are inferred (all-numeric -> continuous, else categorical)
// and can be overridden per column; rows with missing values are rejected
// with row-numbered errors.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendroevo/feature_matrix.hpp"

namespace dendroevo {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin);

enum class ColumnRole { continuous, categorical, label, ignore };

ColumnRole parse_column_role(std::string_view name);

struct IngestResult {
  FeatureMatrix features;
  bool has_labels = false;
  std::vector<int> labels;                // codes into label_levels
  std::vector<std::string> label_levels;  // sorted
  std::string label_name;
};

// `overrides` maps column names to roles; `label_column` is shorthand for
// an override with role `label` (at most one label column).
IngestResult ingest(const std::string& path,
                    const std::map<std::string, ColumnRole>& overrides = {},
                    const std::string& label_column = "");

// Strict double parsing of a whole field (surrounding whitespace allowed).
std::optional<double> parse_double_field(const std::string& field);

}  // namespace dendroevo
