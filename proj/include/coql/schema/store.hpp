#pragma once

// The two-level model. Concepts and collections form the parent level, items
// are their children. Concept-typed fields induce order edges, labelled with
// the field name, at both levels:
//
//   concept level  Concept ->field-> FieldType         (concept_order())
//   data level     Collection ->field-> BoundCollection, item ->field-> item
//                  with every item a child of its collection  (data_order())
//
// Because item edges mirror their collection's edges, the syntactic constraint
// holds for every insert. The inclusion hierarchy (Account IN Bank) is kept
// alongside and drives complex identities.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "coql/order/ordered_model.hpp"
#include "coql/schema/value.hpp"

namespace coql::schema {

enum class FieldKind { Identity, Entity };

struct FieldType {
  enum class Kind { Char, Double, Int, Concept };
  Kind kind = Kind::Int;
  std::size_t length = 0;  // CHAR(n)
  std::string concept_name;

  static FieldType char_type(std::size_t n) { return {Kind::Char, n, {}}; }
  static FieldType double_type() { return {Kind::Double, 0, {}}; }
  static FieldType int_type() { return {Kind::Int, 0, {}}; }
  static FieldType concept_type(std::string name) { return {Kind::Concept, 0, std::move(name)}; }

  bool is_concept() const { return kind == Kind::Concept; }
  bool is_numeric() const { return kind == Kind::Double || kind == Kind::Int; }
  std::string text() const;

  friend bool operator==(const FieldType&, const FieldType&) = default;
};

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::Entity;
  FieldType type;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct Concept {
  std::string name;
  std::optional<std::string> parent;
  std::vector<FieldSpec> identity;
  std::vector<FieldSpec> entity;

  /// Identity fields first, then entity fields.
  const FieldSpec* find_field(std::string_view field) const;
};

struct Collection {
  std::string name;
  std::string concept_name;
  std::optional<std::string> parent;
  std::map<std::string, std::string> bindings;  // field -> collection
};

struct ItemId {
  std::uint32_t value = 0;

  friend auto operator<=>(const ItemId&, const ItemId&) = default;
};

struct Item {
  ItemId id;
  std::string collection;
  std::optional<ItemId> parent;
  Segment identity;                          // local segment
  std::map<std::string, Value> values;       // every field, identity ones included
  std::map<std::string, ItemId> references;  // concept-typed fields, resolved
  order::NodeRef node;
};

/// One step of navigation from an item: a stored value or another item.
using StepResult = std::variant<Value, ItemId>;

class Store {
 public:
  Store();

  void declare_concept(Concept concept_decl);
  void create_collection(Collection collection);

  /// Inserts an item and returns its complex identity. `values` must hold
  /// every field of the concept; concept-typed fields take the complex
  /// identity of an item in the bound collection.
  ComplexIdentity insert_item(std::string_view collection, const std::optional<ComplexIdentity>& parent,
                              const std::map<std::string, Value>& values);

  ItemId resolve(std::string_view collection, const ComplexIdentity& identity) const;

  /// Follows a dotted path from an item. Steps are field names, `parent`, or
  /// the names described at step().
  Value field_path_value(ItemId item, std::string_view path) const;

  /// Resolves one step name from an item, in this order: `parent`, the
  /// item's own fields, identity fields along its parent chain (nearest
  /// first), and the item's own concept name (case-insensitive), which
  /// denotes the item itself. References come back as item ids.
  StepResult step(ItemId item, std::string_view name) const;

  /// Entity values may change; identity values and references may not.
  void set_entity_value(ItemId item, std::string_view field, Value value);

  const Concept& concept_of(std::string_view concept_name) const;
  const Concept& concept_of_collection(std::string_view collection) const;
  const Collection& collection(std::string_view name) const;
  bool has_concept(std::string_view name) const;
  bool has_collection(std::string_view name) const;
  const std::vector<std::string>& concept_names() const { return concept_order_names_; }
  const std::vector<std::string>& collection_names() const { return collection_order_names_; }

  const Item& item(ItemId id) const;
  std::span<const ItemId> items(std::string_view collection) const;
  std::size_t item_count() const { return items_.size(); }
  ComplexIdentity identity(ItemId id) const;

  /// Collections from the root of the inclusion chain down to `collection`.
  std::vector<std::string> collection_chain(std::string_view collection) const;
  std::vector<std::string> concept_chain(std::string_view concept_name) const;

  const order::OrderedModel& concept_order() const { return concepts_order_; }
  const order::OrderedModel& data_order() const { return data_order_; }
  std::optional<order::NodeRef> concept_node(std::string_view concept_name) const;
  std::optional<order::NodeRef> collection_node(std::string_view collection) const;

  /// Full scan: every stored reference resolves to the item it records.
  void check_integrity() const;

  /// Order-sensitive digest of the complete state (schema, items, values).
  std::uint64_t fingerprint() const;

 private:
  struct CollectionState {
    Collection spec;
    order::NodeRef node;
    std::vector<ItemId> members;
    std::map<std::pair<std::int64_t, std::string>, ItemId> index;  // (parent or -1, segment key)
  };

  Value typed_value(const FieldSpec& field, const Collection& coll, const Value& raw, ItemId* ref) const;
  CollectionState& state(std::string_view name);
  const CollectionState& state(std::string_view name) const;

  std::map<std::string, Concept, std::less<>> concepts_;
  std::map<std::string, order::NodeRef, std::less<>> concept_nodes_;
  std::vector<std::string> concept_order_names_;
  std::map<std::string, CollectionState, std::less<>> collections_;
  std::vector<std::string> collection_order_names_;
  std::vector<Item> items_;
  order::OrderedModel concepts_order_;
  order::OrderedModel data_order_;
};

}  // namespace coql::schema
