#pragma once

#include <ostream>

#include "coql/order/ordered_model.hpp"

namespace coql::order {

/// Writes the canonical table: a header of `identity` followed by the dotted
/// column paths, then one line per row with the source element's complex
/// identity and 0/1 cells.
void write_primitive_csv(const OrderedModel& model, std::ostream& out);

}  // namespace coql::order
