#include "dendroevo/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dendroevo {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<double> parse_double_field(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(field_was_quoted ? field : trim(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_row = [&](std::size_t at_line) {
    end_field();
    if (row.size() == 1 && row[0].empty()) {  // blank line
      row.clear();
      return;
    }
    if (table.header.empty()) {
      table.header = std::move(row);
    } else {
      if (row.size() != table.header.size())
        fail(origin, "row " + std::to_string(at_line) + " has " +
                         std::to_string(row.size()) + " fields, expected " +
                         std::to_string(table.header.size()));
      table.rows.push_back(std::move(row));
    }
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') fail(origin, "newline inside quoted field on line " +
                                        std::to_string(line));
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() && trim(field).empty()) field.clear();
        if (!field.empty())
          fail(origin, "stray quote on line " + std::to_string(line));
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',': end_field(); break;
      case '\r': break;
      case '\n':
        end_row(line);
        ++line;
        break;
      default: field += c;
    }
  }
  if (in_quotes) fail(origin, "unterminated quote");
  if (!field.empty() || !row.empty()) end_row(line);
  if (table.header.empty()) fail(origin, "empty file");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path);
}

ColumnRole parse_column_role(std::string_view name) {
  if (name == "continuous") return ColumnRole::continuous;
  if (name == "categorical") return ColumnRole::categorical;
  if (name == "label") return ColumnRole::label;
  if (name == "ignore") return ColumnRole::ignore;
  throw std::invalid_argument("unknown column role: " + std::string(name));
}

IngestResult ingest(const std::string& path,
                    const std::map<std::string, ColumnRole>& overrides,
                    const std::string& label_column) {
  const CsvTable table = read_csv(path);
  const std::size_t n_cols = table.header.size();
  const std::size_t n_rows = table.rows.size();
  if (n_rows == 0) fail(path, "no data rows");

  std::set<std::string> seen;
  for (const std::string& name : table.header) {
    if (name.empty()) fail(path, "empty column name in header");
    if (!seen.insert(name).second) fail(path, "duplicate column name '" + name + "'");
  }
  auto has_column = [&](const std::string& name) {
    return std::find(table.header.begin(), table.header.end(), name) !=
           table.header.end();
  };
  for (const auto& [name, role] : overrides) {
    (void)role;
    if (!has_column(name)) fail(path, "override names unknown column '" + name + "'");
  }
  if (!label_column.empty() && !has_column(label_column))
    fail(path, "label column '" + label_column + "' not found");

  static const std::set<std::string> kMissingTokens = {"", "NA", "na", "N/A",
                                                       "n/a", "?"};

  IngestResult result;
  std::vector<Feature> features;
  for (std::size_t c = 0; c < n_cols; ++c) {
    const std::string& name = table.header[c];

    std::optional<ColumnRole> role;
    if (auto it = overrides.find(name); it != overrides.end()) role = it->second;
    if (name == label_column) {
      if (role && *role != ColumnRole::label)
        fail(path, "conflicting roles for column '" + name + "'");
      role = ColumnRole::label;
    }
    if (role == ColumnRole::ignore) continue;

    std::vector<std::string> raw(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      raw[r] = table.rows[r][c];
      if (kMissingTokens.count(trim(raw[r])))
        fail(path, "missing value at row " + std::to_string(r + 2) +
                       ", column '" + name + "'");
    }

    if (role == ColumnRole::label) {
      if (result.has_labels) fail(path, "more than one label column");
      Feature f = make_categorical(name, raw);
      result.has_labels = true;
      result.labels = std::move(f.codes);
      result.label_levels = std::move(f.levels);
      result.label_name = name;
      continue;
    }

    bool numeric = true;
    std::vector<double> values(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const auto v = parse_double_field(raw[r]);
      if (!v) {
        numeric = false;
        break;
      }
      values[r] = *v;
    }

    if (role == ColumnRole::continuous && !numeric)
      fail(path, "column '" + name + "' declared continuous but is not numeric");
    const bool continuous =
        role ? (*role == ColumnRole::continuous) : numeric;
    if (continuous)
      features.push_back(make_continuous(name, std::move(values)));
    else
      features.push_back(make_categorical(name, raw));
  }

  result.features = FeatureMatrix(n_rows, std::move(features));
  return result;
}

}  // namespace dendroevo
