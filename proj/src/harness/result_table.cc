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

#include "coopgame/harness/result_table.h"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "coopgame/errors.h"

namespace coopgame::harness {
namespace {

std::string QuoteCsv(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void WriteCsvLine(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << QuoteCsv(fields[i]);
  }
  out << '\n';
}

}  // namespace

void ResultTable::AddRow(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCategory::kInternal,
                fmt::format("row has {} cells, table has {} columns",
                            row.size(), columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::optional<std::size_t> ResultTable::ColumnIndex(
    std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

double ResultTable::Number(std::size_t row, std::string_view column) const {
  const auto index = ColumnIndex(column);
  if (!index) {
    throw Error(ErrorCategory::kInternal,
                fmt::format("no column named {}", column));
  }
  const Cell& cell = rows_.at(row).at(*index);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<long long>(&cell)) {
    return static_cast<double>(*i);
  }
  throw Error(ErrorCategory::kInternal,
              fmt::format("column {} is not numeric", column));
}

std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "text") return OutputFormat::kText;
  return std::nullopt;
}

std::string FormatCell(const Cell& cell) {
  return std::visit(
      [](const auto& value) -> std::string {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return value;
        } else {
          return fmt::format("{}", value);
        }
      },
      cell);
}

void EmitCsv(const ResultTable& table, std::ostream& out) {
  std::vector<std::string> names;
  std::vector<std::string> units;
  for (const auto& c : table.columns()) {
    names.push_back(c.name);
    units.push_back(c.unit);
  }
  WriteCsvLine(out, names);
  WriteCsvLine(out, units);
  for (const auto& row : table.rows()) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const auto& cell : row) fields.push_back(FormatCell(cell));
    WriteCsvLine(out, fields);
  }
}

void EmitText(const ResultTable& table, std::ostream& out) {
  const auto& columns = table.columns();
  std::vector<std::vector<std::string>> lines;
  lines.emplace_back();
  lines.emplace_back();
  for (const auto& c : columns) {
    lines[0].push_back(c.name);
    lines[1].push_back(c.unit.empty() ? "" : "[" + c.unit + "]");
  }
  for (const auto& row : table.rows()) {
    lines.emplace_back();
    for (const auto& cell : row) lines.back().push_back(FormatCell(cell));
  }
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out << "  ";
      out << fmt::format("{:>{}}", line[i], width[i]);
    }
    out << '\n';
  }
}

void EmitResults(const ResultTable& table, OutputFormat format,
                 std::ostream& out) {
  if (format == OutputFormat::kCsv) {
    EmitCsv(table, out);
  } else {
    EmitText(table, out);
  }
}

void EmitResults(const ResultTable& table, OutputFormat format,
                 const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCategory::kIo,
                fmt::format("{}: {}", destination.string(),
                            std::strerror(errno)));
  }
  EmitResults(table, format, out);
  out.flush();
  if (!out) {
    throw Error(ErrorCategory::kIo,
                fmt::format("{}: {}", destination.string(),
                            std::strerror(errno)));
  }
}

std::string ToCsv(const ResultTable& table) {
  std::ostringstream out;
  EmitCsv(table, out);
  return out.str();
}

}  // namespace coopgame::harness
