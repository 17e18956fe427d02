// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "table.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ozmac::cli {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string render(const Cell& cell) {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string(); },
                        [](const std::string& s) { return s; },
                        [](std::int64_t v) { return fmt::format("{}", v); },
                        [](Fixed f) { return fmt::format("{:.{}f}", f.value, f.decimals); },
                    },
                    cell);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error(fmt::format("row has {} cells, table has {} columns", row.size(),
                                       columns_.size()));
  }
  rows_.push_back(std::move(row));
}

void Table::write(std::ostream& out, Format format) const {
  switch (format) {
    case Format::Csv: write_csv(out); break;
    case Format::Json: write_json(out); break;
    case Format::Text: write_text(out); break;
  }
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(render(row[c]));
    out << '\n';
  }
}

void Table::write_json(std::ostream& out) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[columns_[c]] = std::visit(
          Overloaded{
              [](std::monostate) { return nlohmann::ordered_json(); },
              [](const std::string& s) { return nlohmann::ordered_json(s); },
              [](std::int64_t v) { return nlohmann::ordered_json(v); },
              // Round-trip through the printed digits so JSON mirrors CSV.
              [](Fixed f) { return nlohmann::ordered_json(std::stod(render(f))); },
          },
          row[c]);
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

void Table::write_text(std::ostream& out) const {
  std::vector<std::size_t> width(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) width[c] = columns_[c].size();
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto s = render(row[c]);
      width[c] = std::max(width[c], s.empty() ? std::size_t{1} : s.size());
    }
  }
  auto line = [&](auto&& cell_text) {
    std::string s;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) s += "  ";
      s += fmt::format("{:>{}}", cell_text(c), width[c]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };
  line([&](std::size_t c) { return columns_[c]; });
  line([&](std::size_t c) { return std::string(width[c], '-'); });
  for (const auto& row : rows_) {
    line([&](std::size_t c) {
      auto s = render(row[c]);
      return s.empty() ? std::string("-") : s;
    });
  }
}

}  // namespace ozmac::cli
