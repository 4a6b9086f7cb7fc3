#pragma once

#include <ostream>
#include <string>

#include "coql/eval/result_table.hpp"

namespace coql::cli {

enum class Format { Table, Csv };

/// Fixed-width text: header, dash rule, one line per row, then a row count.
std::string render_table(const eval::ResultTable& table);

/// Header row plus one row per result row.
void write_csv(const eval::ResultTable& table, std::ostream& out);

void render(const eval::ResultTable& table, Format format, std::ostream& out);

}  // namespace coql::cli
