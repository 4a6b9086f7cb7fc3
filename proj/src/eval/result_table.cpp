#include "coql/eval/result_table.hpp"

#include <set>
#include <variant>

namespace coql::eval {

std::string type_name(const Value& value) {
  struct V {
    std::string operator()(schema::Null) const { return "NULL"; }
    std::string operator()(bool) const { return "BOOL"; }
    std::string operator()(std::int64_t) const { return "INT"; }
    std::string operator()(double) const { return "DOUBLE"; }
    std::string operator()(const std::string&) const { return "CHAR"; }
    std::string operator()(const schema::ComplexIdentity&) const { return "IDENTITY"; }
  };
  return std::visit(V{}, static_cast<const Value::variant&>(value));
}

void ResultTable::finalize() {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (!columns[c].type.empty()) continue;
    std::string type = "NULL";
    for (const auto& row : rows) {
      auto t = type_name(row.at(c));
      if (t == "NULL" || t == type) continue;
      if (type == "NULL") {
        type = t;
      } else if ((type == "INT" && t == "DOUBLE") || (type == "DOUBLE" && t == "INT")) {
        type = "DOUBLE";
      } else {
        type = "ANY";
      }
    }
    columns[c].type = type;
  }
  std::set<std::string> seen;
  for (auto& col : columns) {
    std::string name = col.name;
    for (int n = 2; !seen.insert(name).second; ++n) name = col.name + "#" + std::to_string(n);
    col.name = name;
  }
}

}  // namespace coql::eval
