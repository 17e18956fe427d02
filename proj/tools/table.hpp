// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ozmac::cli {

/// A double rendered with a fixed number of decimals everywhere it appears.
struct Fixed {
  double value;
  int decimals;
};

using Cell = std::variant<std::monostate, std::string, std::int64_t, Fixed>;

enum class Format { Csv, Json, Text };

/// Row-oriented result set with one column schema shared by all formats.
/// JSON output is an array of objects keyed by column name whose numbers
/// carry exactly the digits printed in CSV.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  void write(std::ostream& out, Format format) const;
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  void write_text(std::ostream& out) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string render(const Cell& cell);

}  // namespace ozmac::cli
