#include "coql/cli/render.hpp"

#include <algorithm>

#include "coql/csv.hpp"

namespace coql::cli {

namespace {

std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string cell_text(const eval::Value& v) { return v.is_null() ? "" : schema::to_text(v); }

}  // namespace

std::string render_table(const eval::ResultTable& table) {
  const auto n = table.columns.size();
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(n, 0);
  for (std::size_t c = 0; c < n; ++c) width[c] = display_width(table.columns[c].name);
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < n; ++c) {
      line.push_back(cell_text(row[c]));
      width[c] = std::max(width[c], display_width(line.back()));
    }
    cells.push_back(std::move(line));
  }

  auto emit = [&](std::string& out, const std::vector<std::string>& line) {
    std::string text;
    for (std::size_t c = 0; c < n; ++c) {
      if (c) text += " | ";
      text += line[c];
      if (c + 1 < n) text.append(width[c] - display_width(line[c]), ' ');
    }
    out += text + "\n";
  };

  std::string out;
  std::vector<std::string> header;
  for (const auto& col : table.columns) header.push_back(col.name);
  emit(out, header);
  std::string rule;
  for (std::size_t c = 0; c < n; ++c) {
    if (c) rule += "-+-";
    rule.append(width[c], '-');
  }
  out += rule + "\n";
  for (const auto& line : cells) emit(out, line);
  out += "(" + std::to_string(table.rows.size()) + (table.rows.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

void write_csv(const eval::ResultTable& table, std::ostream& out) {
  std::vector<std::string> cells;
  for (const auto& col : table.columns) cells.push_back(col.name);
  csv::write_row(out, cells);
  for (const auto& row : table.rows) {
    cells.clear();
    for (const auto& v : row) cells.push_back(cell_text(v));
    csv::write_row(out, cells);
  }
}

void render(const eval::ResultTable& table, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    write_csv(table, out);
  } else {
    out << render_table(table);
  }
}

}  // namespace coql::cli
