#pragma once

// Nested ordered sets: every element sits in a containment tree (one parent
// each, a single root) and in a labelled strict order whose edges lead from a
// sub-element up to a super-element. The engine owns two synthetic bounds,
// top and bottom, created as children of the root together with the root.
//
// Elements that have no user-defined super-element are implicitly ordered
// below top (label "⊤:<identity>"), and elements that have no sub-element are
// implicitly ordered above bottom (label "⊥:<identity>"). Implicit edges are
// never stored; they are derived whenever paths are enumerated.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace coql::order {

/// Opaque handle of one element. Handles are never reused.
struct NodeRef {
  std::uint32_t index = std::numeric_limits<std::uint32_t>::max();

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

/// `source <_label target`: source is strictly below target.
struct OrderEdge {
  NodeRef source;
  std::string label;
  NodeRef target;

  friend bool operator==(const OrderEdge&, const OrderEdge&) = default;
};

/// Upward path x_1.x_2...x_k of rank k >= 1.
struct ComplexDimension {
  std::vector<std::string> labels;

  std::size_t rank() const { return labels.size(); }
  std::string text() const;

  friend auto operator<=>(const ComplexDimension&, const ComplexDimension&) = default;
};

/// One row of the canonical table: a point of {0,1}^N.
struct PrimitiveRow {
  NodeRef source;
  std::vector<std::uint8_t> cells;
};

struct PrimitiveTable {
  std::vector<ComplexDimension> columns;
  std::vector<PrimitiveRow> rows;
};

/// Label prefixes reserved for implicit edges.
inline constexpr std::string_view kTopLabelPrefix = "⊤:";
inline constexpr std::string_view kBottomLabelPrefix = "⊥:";
inline constexpr std::string_view kTopName = "⊤";
inline constexpr std::string_view kBottomName = "⊥";
inline constexpr std::size_t kDefaultPathBudget = 10'000;

/// Whole-model input for bulk construction. Element indices refer into
/// `elements`; `top_index()` and `bottom_index()` address the synthetic bounds.
struct ModelDescription {
  struct Element {
    std::string name;
    std::optional<std::size_t> parent;
  };
  struct Edge {
    std::size_t source = 0;
    std::string label;
    std::size_t target = 0;
  };

  std::vector<Element> elements;
  std::vector<Edge> edges;

  std::size_t top_index() const { return elements.size(); }
  std::size_t bottom_index() const { return elements.size() + 1; }
};

class OrderedModel {
 public:
  OrderedModel() = default;

  /// Builds a model from a description; throws on the first violated
  /// constraint. Edges are inserted by increasing depth of their source so the
  /// outcome does not depend on the order edges are listed in. Returns the
  /// model and the handle assigned to each description element.
  struct Built;
  static Built build(const ModelDescription& description);

  /// Adds an element. Without a parent the element becomes the root, and top
  /// and bottom are created as its first two children. Names default to
  /// "#<index>" and must be unique among siblings.
  NodeRef add_element(std::optional<NodeRef> parent, std::string name = {});

  /// Adds `source <_label target` after checking label validity and
  /// uniqueness, the bounds, acyclicity, the primitive-element rule, and the
  /// syntactic constraint.
  OrderEdge add_order_edge(NodeRef source, std::string_view label, NodeRef target);

  /// Target of the user edge labelled `label` leaving `element` (a.x = b).
  NodeRef super_element(NodeRef element, std::string_view label) const;

  /// Number of user edges leaving / entering the element.
  std::size_t arity(NodeRef element) const;
  std::size_t cardinality(NodeRef element) const;

  /// All upward paths from `element`, restricted to those ending at `stop`
  /// when given. Implicit bound edges take part. Sorted by dotted text.
  std::vector<ComplexDimension> enumerate_dimensions(NodeRef element,
                                                     std::optional<NodeRef> stop = std::nullopt) const;

  /// All downward paths from `element` (ending at `stop` when given),
  /// each reported in upward label order. Sorted by dotted text.
  std::vector<ComplexDimension> enumerate_subdimensions(NodeRef element,
                                                        std::optional<NodeRef> stop = std::nullopt) const;

  /// All bottom-to-top paths, sorted by dotted text.
  std::vector<ComplexDimension> primitive_syntax() const;

  /// Canonical table. Rows follow element creation order; within one element
  /// they follow the order of its primitive sub-dimensions.
  PrimitiveTable primitive_semantics() const;

  /// Re-verifies every structural invariant; throws on the first failure.
  void check() const;

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeRef node) const { return node.index < nodes_.size(); }

  std::optional<NodeRef> root() const;
  NodeRef top() const;
  NodeRef bottom() const;
  bool is_bound(NodeRef node) const;

  std::optional<NodeRef> parent(NodeRef node) const;
  std::span<const NodeRef> children(NodeRef node) const;
  const std::string& name(NodeRef node) const;

  /// Names from the root's child down to the element, joined with '/'.
  std::string identity_text(NodeRef node) const;

  /// True if `node` equals `ancestor` or lies below it in the containment tree.
  bool is_within(NodeRef node, NodeRef ancestor) const;

  /// User-defined edges only.
  const std::vector<OrderEdge>& edges() const { return edges_; }
  std::vector<OrderEdge> out_edges(NodeRef node) const;
  std::vector<OrderEdge> in_edges(NodeRef node) const;

  /// User edges plus the implicit edges to top and from bottom.
  std::vector<OrderEdge> effective_edges() const;

  std::size_t path_budget() const { return path_budget_; }
  void set_path_budget(std::size_t budget) { path_budget_ = budget; }

 private:
  struct Node {
    std::string name;
    std::optional<NodeRef> parent;
    std::vector<NodeRef> children;
    std::unordered_set<std::string> child_names;
    std::vector<std::size_t> out;  // indices into edges_
    std::vector<std::size_t> in;
  };

  const Node& node(NodeRef ref) const;
  bool reaches(NodeRef from, NodeRef to) const;

  std::vector<Node> nodes_;
  std::vector<OrderEdge> edges_;
  std::size_t path_budget_ = kDefaultPathBudget;
};

struct OrderedModel::Built {
  OrderedModel model;
  std::vector<NodeRef> handles;  // description index -> handle; then top, bottom
};

}  // namespace coql::order
