#pragma once

// Navigation algebra over item sets: projection (up along a dimension),
// de-projection (down along a sub-dimension), their hierarchical variants
// through `parent`, restriction, product, union, intersection, aggregation.
// All operations are read-only with respect to the store.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coql/order/ordered_model.hpp"
#include "coql/schema/store.hpp"

namespace coql::nav {

using schema::ItemId;
using schema::Store;
using schema::Value;

/// Duplicate-free, ordered members of one collection.
struct ItemSet {
  std::string collection;
  std::vector<ItemId> items;

  static ItemSet all(const Store& store, std::string_view collection);

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool contains(ItemId id) const;

  friend bool operator==(const ItemSet&, const ItemSet&) = default;
};

/// Cells of a product. A cell's ordinal is its fresh identity; its members
/// (one per axis, in axis order) are its super-items.
struct ProductSet {
  std::vector<std::string> axes;
  std::vector<std::vector<ItemId>> cells;

  std::size_t size() const { return cells.size(); }
};

enum class Aggregate { Sum, Size, Min, Max, Avg };

/// Case-insensitive SUM/SIZE/MIN/MAX/AVG.
std::optional<Aggregate> parse_aggregate(std::string_view name);
std::string_view to_string(Aggregate fn);

/// Collection reached from `collection` along `dimension`; `parent` labels
/// step to the parent collection. Throws UnknownDimension / NoParentConcept.
std::string dimension_target(const Store& store, std::string_view collection,
                             const order::ComplexDimension& dimension);

/// E -> d -> (bound collection). Rank k folds k simple projections; targets
/// keep first-occurrence order and appear once.
ItemSet project(const Store& store, const ItemSet& source, const order::ComplexDimension& dimension);

/// E -> d -> D: as above, keeping only targets that are members of `target`.
ItemSet project(const Store& store, const ItemSet& source, const order::ComplexDimension& dimension,
                const ItemSet& target);

/// E <- f <- F = { s in F | s.f in E }, in F's order.
ItemSet deproject(const Store& store, const ItemSet& source, std::string_view label, const ItemSet& from);
ItemSet deproject(const Store& store, const ItemSet& source, std::string_view label, std::string_view collection);

/// Parents of the members (deduplicated) / children of the members within F.
ItemSet project_parent(const Store& store, const ItemSet& source);
ItemSet deproject_children(const Store& store, const ItemSet& source, const ItemSet& children);
ItemSet deproject_children(const Store& store, const ItemSet& source, std::string_view collection);

/// Order-preserving filter.
ItemSet restrict(const ItemSet& source, const std::function<bool(ItemId)>& predicate);

/// Cartesian product in lexicographic order (first input varies slowest).
/// Throws BudgetExceeded when the size would exceed `limit`.
ProductSet product(std::span<const ItemSet> inputs,
                   std::size_t limit = std::numeric_limits<std::size_t>::max());

ItemSet unite(const ItemSet& a, const ItemSet& b);
ItemSet intersect(const ItemSet& a, const ItemSet& b);

/// SIZE counts members; the other functions read `field` (a field path) from
/// each member. SUM of nothing is 0; MIN/MAX/AVG of nothing fail.
Value aggregate(const Store& store, const ItemSet& set, Aggregate fn,
                std::optional<std::string_view> field = std::nullopt);

/// Aggregation over plain values. Integers stay integers unless a decimal
/// takes part.
Value aggregate_values(Aggregate fn, std::span<const Value> values);

}  // namespace coql::nav
