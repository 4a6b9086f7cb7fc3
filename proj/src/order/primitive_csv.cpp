#include "coql/order/primitive_csv.hpp"

#include "coql/csv.hpp"

namespace coql::order {

void write_primitive_csv(const OrderedModel& model, std::ostream& out) {
  const PrimitiveTable table = model.primitive_semantics();
  std::vector<std::string> cells{"identity"};
  for (const auto& column : table.columns) cells.push_back(column.text());
  csv::write_row(out, cells);
  for (const auto& row : table.rows) {
    cells.assign(1, model.identity_text(row.source));
    for (auto bit : row.cells) cells.push_back(bit ? "1" : "0");
    csv::write_row(out, cells);
  }
}

}  // namespace coql::order
