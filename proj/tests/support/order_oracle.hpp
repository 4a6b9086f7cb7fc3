#pragma once

// Brute-force reference implementations for nested ordered sets. They work
// on the plain description only and share no code with the engine.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coql/order/ordered_model.hpp"

namespace coql::testing {

struct Verdict {
  bool valid = true;
  std::string reason;
};

/// Whole-description check: tree shape, label rules, bounds, acyclicity
/// (transitive closure), primitive rule, syntactic constraint.
Verdict validate(const order::ModelDescription& desc);

/// Every path leaving `from` upward (or downward), as dotted label text in
/// upward order, optionally only those ending at `stop`. Sorted.
/// Node indices follow the description (top = n, bottom = n + 1).
std::vector<std::string> paths_up(const order::ModelDescription& desc, std::size_t from,
                                  std::optional<std::size_t> stop = std::nullopt);
std::vector<std::string> paths_down(const order::ModelDescription& desc, std::size_t from,
                                    std::optional<std::size_t> stop = std::nullopt);

struct OraclePrimitive {
  std::vector<std::string> columns;
  // description index (top = n, bottom = n + 1) -> rows in sub-path order
  std::map<std::size_t, std::vector<std::vector<std::uint8_t>>> rows;
};

OraclePrimitive primitive(const order::ModelDescription& desc);

}  // namespace coql::testing
