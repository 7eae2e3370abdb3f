// Copyright 2026 The coopgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COOPGAME_HARNESS_RESULT_TABLE_H_
#define COOPGAME_HARNESS_RESULT_TABLE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace coopgame::harness {

using Cell = std::variant<double, long long, std::string>;

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless or labels
};

// Column-oriented result records. Rectangular: every row has one cell per
// column.
class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<Column> columns)
      : columns_(std::move(columns)) {}

  // Throws Error(kInternal) on a width mismatch.
  void AddRow(std::vector<Cell> row);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
  // Numeric cell by column name; throws if absent or not numeric.
  double Number(std::size_t row, std::string_view column) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

enum class OutputFormat { kCsv, kText };

std::optional<OutputFormat> ParseOutputFormat(std::string_view name);

// Shortest round-trip decimal for doubles.
std::string FormatCell(const Cell& cell);

// Header row, unit row, then data; fields quoted per RFC 4180 when they
// contain a comma, quote or line break.
void EmitCsv(const ResultTable& table, std::ostream& out);
// Right-aligned columns with the units in brackets under each name.
void EmitText(const ResultTable& table, std::ostream& out);
void EmitResults(const ResultTable& table, OutputFormat format,
                 std::ostream& out);
// Throws Error(kIo) carrying the system error text.
void EmitResults(const ResultTable& table, OutputFormat format,
                 const std::filesystem::path& destination);

std::string ToCsv(const ResultTable& table);

}  // namespace coopgame::harness

#endif  // COOPGAME_HARNESS_RESULT_TABLE_H_
