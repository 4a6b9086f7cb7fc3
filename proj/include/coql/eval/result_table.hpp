#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coql/schema/value.hpp"

namespace coql::eval {

using schema::Value;

struct Column {
  std::string name;
  std::string type;  // INT, DOUBLE, CHAR, BOOL, IDENTITY, NULL or ANY
};

struct ResultTable {
  std::vector<Column> columns;
  std::vector<std::vector<Value>> rows;

  std::size_t size() const { return rows.size(); }

  /// Fills in missing column types from the row values and renames
  /// duplicate column names to `name#2`, `name#3`, ...
  void finalize();
};

std::string type_name(const Value& value);

}  // namespace coql::eval
