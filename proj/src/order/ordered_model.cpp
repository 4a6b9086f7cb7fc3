#include "coql/order/ordered_model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_set>
#include <utility>

#include "coql/error.hpp"

namespace coql::order {

std::string ComplexDimension::text() const {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += '.';
    out += labels[i];
  }
  return out;
}

namespace {

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

// Effective adjacency (user edges plus implicit bound edges), built once per
// enumeration call.
struct Adjacency {
  struct Arc {
    std::string label;
    std::uint32_t node;
  };
  std::vector<std::vector<Arc>> up;
  std::vector<std::vector<Arc>> down;
};

Adjacency make_adjacency(std::size_t node_count, const std::vector<OrderEdge>& effective) {
  Adjacency adj;
  adj.up.resize(node_count);
  adj.down.resize(node_count);
  for (const auto& e : effective) {
    adj.up[e.source.index].push_back({e.label, e.target.index});
    adj.down[e.target.index].push_back({e.label, e.source.index});
  }
  return adj;
}

// Nodes from which `stop` is reachable along `arcs` (reverse direction given).
std::vector<bool> reaching(std::size_t node_count, const std::vector<std::vector<Adjacency::Arc>>& reverse,
                           std::uint32_t stop) {
  std::vector<bool> seen(node_count, false);
  std::vector<std::uint32_t> stack{stop};
  seen[stop] = true;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (const auto& arc : reverse[n]) {
      if (!seen[arc.node]) {
        seen[arc.node] = true;
        stack.push_back(arc.node);
      }
    }
  }
  return seen;
}

// Depth-first enumeration of every path leaving `start` along `arcs`. With a
// stop node only paths ending there are reported.
std::vector<ComplexDimension> enumerate_paths(std::size_t node_count,
                                              const std::vector<std::vector<Adjacency::Arc>>& arcs,
                                              const std::vector<std::vector<Adjacency::Arc>>& reverse,
                                              std::uint32_t start, std::optional<std::uint32_t> stop,
                                              bool reverse_labels, std::size_t budget) {
  std::vector<bool> useful;
  if (stop) useful = reaching(node_count, reverse, *stop);
  std::vector<ComplexDimension> out;
  std::vector<std::string> labels;

  std::function<void(std::uint32_t)> walk = [&](std::uint32_t n) {
    for (const auto& arc : arcs[n]) {
      if (stop && !useful[arc.node]) continue;
      labels.push_back(arc.label);
      if (!stop || arc.node == *stop) {
        if (out.size() >= budget) {
          throw Error(ErrorKind::PathBudgetExceeded,
                      "path enumeration exceeded the budget of " + std::to_string(budget) + " paths");
        }
        ComplexDimension d{labels};
        if (reverse_labels) std::reverse(d.labels.begin(), d.labels.end());
        out.push_back(std::move(d));
      }
      walk(arc.node);
      labels.pop_back();
    }
  };
  if (!stop || useful[start]) walk(start);

  std::vector<std::pair<std::string, ComplexDimension>> keyed;
  keyed.reserve(out.size());
  for (auto& d : out) keyed.emplace_back(d.text(), std::move(d));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  out.clear();
  for (auto& [text, d] : keyed) out.push_back(std::move(d));
  return out;
}

}  // namespace

const OrderedModel::Node& OrderedModel::node(NodeRef ref) const {
  if (!contains(ref)) {
    throw Error(ErrorKind::InvalidNode, "invalid node handle " + std::to_string(ref.index));
  }
  return nodes_[ref.index];
}

std::optional<NodeRef> OrderedModel::root() const {
  if (nodes_.empty()) return std::nullopt;
  return NodeRef{0};
}

NodeRef OrderedModel::top() const {
  if (nodes_.size() < 3) throw Error(ErrorKind::InvalidNode, "model has no root yet");
  return NodeRef{1};
}

NodeRef OrderedModel::bottom() const {
  if (nodes_.size() < 3) throw Error(ErrorKind::InvalidNode, "model has no root yet");
  return NodeRef{2};
}

bool OrderedModel::is_bound(NodeRef n) const { return nodes_.size() >= 3 && (n.index == 1 || n.index == 2); }

std::optional<NodeRef> OrderedModel::parent(NodeRef n) const { return node(n).parent; }

std::span<const NodeRef> OrderedModel::children(NodeRef n) const { return node(n).children; }

const std::string& OrderedModel::name(NodeRef n) const { return node(n).name; }

std::string OrderedModel::identity_text(NodeRef n) const {
  std::vector<const std::string*> names;
  for (std::optional<NodeRef> cur = n; cur && node(*cur).parent; cur = node(*cur).parent) {
    names.push_back(&node(*cur).name);
  }
  std::string out;
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    if (!out.empty()) out += '/';
    out += **it;
  }
  return out;
}

bool OrderedModel::is_within(NodeRef n, NodeRef ancestor) const {
  for (std::optional<NodeRef> cur = n; cur; cur = node(*cur).parent) {
    if (*cur == ancestor) return true;
  }
  return false;
}

NodeRef OrderedModel::add_element(std::optional<NodeRef> parent, std::string name) {
  if (!parent) {
    if (!nodes_.empty()) throw Error(ErrorKind::SecondRoot, "model already has a root element");
    nodes_.push_back(Node{name.empty() ? "#0" : std::move(name), std::nullopt, {}, {}, {}, {}});
    add_element(NodeRef{0}, std::string(kTopName));
    add_element(NodeRef{0}, std::string(kBottomName));
    return NodeRef{0};
  }
  const Node& p = node(*parent);
  if (is_bound(*parent)) {
    throw Error(ErrorKind::BoundViolation, "top and bottom cannot contain elements");
  }
  NodeRef ref{static_cast<std::uint32_t>(nodes_.size())};
  if (name.empty()) name = "#" + std::to_string(ref.index);
  if (p.child_names.count(name)) {
    throw Error(ErrorKind::InvalidTree, "duplicate element name '" + name + "' under one parent");
  }
  nodes_[parent->index].child_names.insert(name);
  nodes_[parent->index].children.push_back(ref);
  nodes_.push_back(Node{std::move(name), parent, {}, {}, {}, {}});
  return ref;
}

bool OrderedModel::reaches(NodeRef from, NodeRef to) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeRef> stack{from};
  while (!stack.empty()) {
    NodeRef n = stack.back();
    stack.pop_back();
    if (n == to) return true;
    if (seen[n.index]) continue;
    seen[n.index] = true;
    for (auto e : nodes_[n.index].out) stack.push_back(edges_[e].target);
  }
  return false;
}

OrderEdge OrderedModel::add_order_edge(NodeRef source, std::string_view label, NodeRef target) {
  const Node& src = node(source);
  node(target);

  if (label.empty() || label.find('.') != std::string_view::npos || starts_with(label, kTopLabelPrefix) ||
      starts_with(label, kBottomLabelPrefix)) {
    throw Error(ErrorKind::InvalidLabel, "invalid label '" + std::string(label) + "'");
  }
  if (source.index == 0 || target.index == 0) {
    throw Error(ErrorKind::BoundViolation, "the root element takes no part in the order");
  }
  if (source == top() || target == bottom()) {
    throw Error(ErrorKind::BoundViolation, "no element lies above top or below bottom");
  }
  if (source == target) {
    throw Error(ErrorKind::CycleDetected, "edge '" + std::string(label) + "' would order an element below itself");
  }
  for (auto e : src.out) {
    if (edges_[e].label == label) {
      throw Error(ErrorKind::DuplicateLabel,
                  "label '" + std::string(label) + "' already leaves element " + identity_text(source));
    }
  }
  const bool to_top = target == top();
  for (auto e : src.out) {
    if (to_top || edges_[e].target == top()) {
      throw Error(ErrorKind::PrimitiveViolation,
                  "a primitive element has exactly one super-element, which is top: " + identity_text(source));
    }
  }
  if (reaches(target, source)) {
    throw Error(ErrorKind::CycleDetected, "edge " + identity_text(source) + " -" + std::string(label) + "-> " +
                                              identity_text(target) + " closes a cycle");
  }
  if (source != bottom() && !to_top && src.parent && src.parent->index != 0) {
    const Node& p = nodes_[src.parent->index];
    bool ok = false;
    bool parent_has_label = false;
    for (auto e : p.out) {
      if (edges_[e].label == label) {
        parent_has_label = true;
        ok = is_within(target, edges_[e].target);
      }
    }
    if (!ok) {
      throw Error(ErrorKind::SyntacticViolation,
                  parent_has_label
                      ? "target of '" + std::string(label) + "' is not inside the parent's super-element"
                      : "parent of " + identity_text(source) + " has no dimension '" + std::string(label) + "'");
    }
  }

  edges_.push_back(OrderEdge{source, std::string(label), target});
  nodes_[source.index].out.push_back(edges_.size() - 1);
  nodes_[target.index].in.push_back(edges_.size() - 1);
  return edges_.back();
}

NodeRef OrderedModel::super_element(NodeRef element, std::string_view label) const {
  for (auto e : node(element).out) {
    if (edges_[e].label == label) return edges_[e].target;
  }
  throw Error(ErrorKind::NoSuchDimension,
              "element " + identity_text(element) + " has no dimension '" + std::string(label) + "'");
}

std::size_t OrderedModel::arity(NodeRef element) const { return node(element).out.size(); }

std::size_t OrderedModel::cardinality(NodeRef element) const { return node(element).in.size(); }

std::vector<OrderEdge> OrderedModel::out_edges(NodeRef n) const {
  std::vector<OrderEdge> out;
  for (auto e : node(n).out) out.push_back(edges_[e]);
  return out;
}

std::vector<OrderEdge> OrderedModel::in_edges(NodeRef n) const {
  std::vector<OrderEdge> out;
  for (auto e : node(n).in) out.push_back(edges_[e]);
  return out;
}

std::vector<OrderEdge> OrderedModel::effective_edges() const {
  std::vector<OrderEdge> out = edges_;
  if (nodes_.size() < 3) return out;
  for (std::uint32_t i = 3; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.out.empty()) {
      out.push_back(OrderEdge{NodeRef{i}, std::string(kTopLabelPrefix) + identity_text(NodeRef{i}), top()});
    }
    if (n.in.empty()) {
      out.push_back(OrderEdge{bottom(), std::string(kBottomLabelPrefix) + identity_text(NodeRef{i}), NodeRef{i}});
    }
  }
  return out;
}

std::vector<ComplexDimension> OrderedModel::enumerate_dimensions(NodeRef element, std::optional<NodeRef> stop) const {
  node(element);
  if (stop) node(*stop);
  auto adj = make_adjacency(nodes_.size(), effective_edges());
  std::optional<std::uint32_t> s;
  if (stop) s = stop->index;
  return enumerate_paths(nodes_.size(), adj.up, adj.down, element.index, s, false, path_budget_);
}

std::vector<ComplexDimension> OrderedModel::enumerate_subdimensions(NodeRef element,
                                                                    std::optional<NodeRef> stop) const {
  node(element);
  if (stop) node(*stop);
  auto adj = make_adjacency(nodes_.size(), effective_edges());
  std::optional<std::uint32_t> s;
  if (stop) s = stop->index;
  return enumerate_paths(nodes_.size(), adj.down, adj.up, element.index, s, true, path_budget_);
}

std::vector<ComplexDimension> OrderedModel::primitive_syntax() const {
  if (nodes_.empty()) return {};
  return enumerate_dimensions(bottom(), top());
}

PrimitiveTable OrderedModel::primitive_semantics() const {
  PrimitiveTable table;
  if (nodes_.empty()) return table;

  auto adj = make_adjacency(nodes_.size(), effective_edges());
  const auto t = top().index;
  const auto b = bottom().index;
  table.columns = enumerate_paths(nodes_.size(), adj.up, adj.down, b, t, false, path_budget_);

  std::map<std::string, std::size_t> column_of;
  for (std::size_t i = 0; i < table.columns.size(); ++i) column_of.emplace(table.columns[i].text(), i);
  const std::size_t width = table.columns.size();

  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    if (i == t) {
      table.rows.push_back({NodeRef{i}, std::vector<std::uint8_t>(width, 0)});
      continue;
    }
    if (i == b) {
      table.rows.push_back({NodeRef{i}, std::vector<std::uint8_t>(width, 1)});
      continue;
    }
    auto supers = enumerate_paths(nodes_.size(), adj.up, adj.down, i, t, false, path_budget_);
    auto subs = enumerate_paths(nodes_.size(), adj.down, adj.up, i, b, true, path_budget_);
    for (const auto& f : subs) {
      PrimitiveRow row{NodeRef{i}, std::vector<std::uint8_t>(width, 0)};
      const std::string prefix = f.text() + ".";
      for (const auto& d : supers) row.cells[column_of.at(prefix + d.text())] = 1;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void OrderedModel::check() const {
  if (nodes_.empty()) return;
  if (nodes_[0].parent) throw Error(ErrorKind::InvalidTree, "root has a parent");
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) {
    const auto& p = nodes_[i].parent;
    if (!p) throw Error(ErrorKind::SecondRoot, "element " + std::to_string(i) + " has no parent");
    if (p->index >= i) throw Error(ErrorKind::InvalidTree, "parent created after child");
    const auto& siblings = nodes_[p->index].children;
    if (std::count(siblings.begin(), siblings.end(), NodeRef{i}) != 1) {
      throw Error(ErrorKind::InvalidTree, "child list out of sync");
    }
  }

  // Kahn's algorithm over user edges.
  std::vector<std::size_t> indegree(nodes_.size(), 0);
  for (const auto& e : edges_) ++indegree[e.target.index];
  std::deque<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop_front();
    ++visited;
    for (auto e : nodes_[n].out) {
      if (--indegree[edges_[e].target.index] == 0) ready.push_back(edges_[e].target.index);
    }
  }
  if (visited != nodes_.size()) throw Error(ErrorKind::CycleDetected, "order edges contain a cycle");

  for (const auto& n : nodes_) {
    std::unordered_set<std::string> labels;
    bool to_top = false;
    for (auto e : n.out) {
      if (!labels.insert(edges_[e].label).second) throw Error(ErrorKind::DuplicateLabel, "duplicate label");
      to_top = to_top || edges_[e].target == top();
    }
    if (to_top && n.out.size() != 1) {
      throw Error(ErrorKind::PrimitiveViolation, "primitive element with a non-top super-element");
    }
  }

  for (const auto& e : edges_) {
    if (e.source == bottom() || e.target == top()) continue;
    const auto& p = nodes_[e.source.index].parent;
    if (!p || p->index == 0) continue;
    bool ok = false;
    for (auto pe : nodes_[p->index].out) {
      if (edges_[pe].label == e.label && is_within(e.target, edges_[pe].target)) ok = true;
    }
    if (!ok) throw Error(ErrorKind::SyntacticViolation, "edge '" + e.label + "' violates the syntactic constraint");
  }
}

OrderedModel::Built OrderedModel::build(const ModelDescription& description) {
  const std::size_t n = description.elements.size();
  std::vector<std::vector<std::size_t>> kids(n);
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& parent = description.elements[i].parent;
    if (!parent) {
      if (root) throw Error(ErrorKind::SecondRoot, "description has more than one root");
      root = i;
      continue;
    }
    if (*parent == description.top_index() || *parent == description.bottom_index()) {
      throw Error(ErrorKind::BoundViolation, "top and bottom cannot contain elements");
    }
    if (*parent >= n) throw Error(ErrorKind::InvalidTree, "parent index out of range");
    kids[*parent].push_back(i);
  }
  if (!root) {
    if (n == 0) return Built{};
    throw Error(ErrorKind::InvalidTree, "description has no root");
  }

  Built built;
  built.handles.assign(n + 2, NodeRef{});
  std::vector<std::size_t> depth(n + 2, 1);
  std::deque<std::size_t> queue{*root};
  std::size_t placed = 0;
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    const auto& el = description.elements[i];
    if (i == *root) {
      built.handles[i] = built.model.add_element(std::nullopt, el.name);
      depth[i] = 0;
    } else {
      built.handles[i] = built.model.add_element(built.handles[*el.parent], el.name);
      depth[i] = depth[*el.parent] + 1;
    }
    ++placed;
    for (auto k : kids[i]) queue.push_back(k);
  }
  if (placed != n) throw Error(ErrorKind::InvalidTree, "parent links contain a cycle");
  built.handles[description.top_index()] = built.model.top();
  built.handles[description.bottom_index()] = built.model.bottom();

  std::vector<std::size_t> order(description.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& e = description.edges[i];
    if (e.source >= n + 2 || e.target >= n + 2) throw Error(ErrorKind::InvalidNode, "edge endpoint out of range");
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depth[description.edges[a].source] < depth[description.edges[b].source];
  });
  for (auto i : order) {
    const auto& e = description.edges[i];
    built.model.add_order_edge(built.handles[e.source], e.label, built.handles[e.target]);
  }
  return built;
}

}  // namespace coql::order
