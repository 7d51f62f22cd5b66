// Copyright 2026 The hybridspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV tables with '#'-prefixed metadata header lines.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace hybridspin {

using CsvCell = std::variant<double, long long, std::string>;

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Adds a "# key: <json>" header line. Keys keep insertion order.
  void add_meta(const std::string& key, const nlohmann::json& value);
  void add_row(std::vector<CsvCell> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }

  std::string str() const;
  /// Writes to a temporary sibling and renames it into place.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Parsed CSV: metadata values are the raw JSON text.
struct CsvData {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvData parse_csv(const std::string& text);
CsvData read_csv(const std::filesystem::path& path);

}  // namespace hybridspin
