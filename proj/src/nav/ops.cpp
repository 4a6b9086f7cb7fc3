#include "coql/nav/ops.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "coql/error.hpp"

namespace coql::nav {

namespace {

struct ItemIdHash {
  std::size_t operator()(ItemId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

using IdSet = std::unordered_set<ItemId, ItemIdHash>;

IdSet to_set(const ItemSet& s) { return IdSet(s.items.begin(), s.items.end()); }

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// One rank-1 step from `collection` along `label`.
std::string simple_target(const Store& store, std::string_view collection, std::string_view label) {
  const auto& coll = store.collection(collection);
  if (label == "parent") {
    if (!coll.parent) {
      throw Error(ErrorKind::NoParentConcept, "'" + coll.name + "' has no parent collection");
    }
    return *coll.parent;
  }
  const auto& concept_decl = store.concept_of(coll.concept_name);
  const auto* field = concept_decl.find_field(label);
  if (!field || !field->type.is_concept()) {
    throw Error(ErrorKind::UnknownDimension, "'" + std::string(label) + "' is not a dimension of '" + coll.name + "'");
  }
  return coll.bindings.at(field->name);
}

ItemSet project_simple(const Store& store, const ItemSet& source, std::string_view label) {
  ItemSet out{simple_target(store, source.collection, label), {}};
  IdSet seen;
  for (auto id : source.items) {
    const auto& it = store.item(id);
    std::optional<ItemId> target;
    if (label == "parent") {
      target = it.parent;
    } else if (auto ref = it.references.find(std::string(label)); ref != it.references.end()) {
      target = ref->second;
    }
    if (target && seen.insert(*target).second) out.items.push_back(*target);
  }
  return out;
}

}  // namespace

ItemSet ItemSet::all(const Store& store, std::string_view collection) {
  auto members = store.items(collection);
  return ItemSet{std::string(collection), std::vector<ItemId>(members.begin(), members.end())};
}

bool ItemSet::contains(ItemId id) const { return std::find(items.begin(), items.end(), id) != items.end(); }

std::optional<Aggregate> parse_aggregate(std::string_view name) {
  auto n = upper(name);
  if (n == "SUM") return Aggregate::Sum;
  if (n == "SIZE") return Aggregate::Size;
  if (n == "MIN") return Aggregate::Min;
  if (n == "MAX") return Aggregate::Max;
  if (n == "AVG") return Aggregate::Avg;
  return std::nullopt;
}

std::string_view to_string(Aggregate fn) {
  switch (fn) {
    case Aggregate::Sum: return "SUM";
    case Aggregate::Size: return "SIZE";
    case Aggregate::Min: return "MIN";
    case Aggregate::Max: return "MAX";
    case Aggregate::Avg: return "AVG";
  }
  return "";
}

std::string dimension_target(const Store& store, std::string_view collection,
                             const order::ComplexDimension& dimension) {
  if (dimension.labels.empty()) throw Error(ErrorKind::UnknownDimension, "empty dimension");
  std::string current(collection);
  for (const auto& label : dimension.labels) current = simple_target(store, current, label);
  return current;
}

ItemSet project(const Store& store, const ItemSet& source, const order::ComplexDimension& dimension) {
  dimension_target(store, source.collection, dimension);
  ItemSet current = source;
  for (const auto& label : dimension.labels) current = project_simple(store, current, label);
  return current;
}

ItemSet project(const Store& store, const ItemSet& source, const order::ComplexDimension& dimension,
                const ItemSet& target) {
  ItemSet out = project(store, source, dimension);
  if (out.collection != target.collection) {
    throw Error(ErrorKind::UnknownDimension, "dimension '" + dimension.text() + "' leads to '" + out.collection +
                                                 "', not to '" + target.collection + "'");
  }
  auto members = to_set(target);
  return restrict(out, [&](ItemId id) { return members.count(id) > 0; });
}

ItemSet deproject(const Store& store, const ItemSet& source, std::string_view label, const ItemSet& from) {
  if (simple_target(store, from.collection, label) != source.collection) {
    throw Error(ErrorKind::UnknownDimension, "'" + std::string(label) + "' of '" + from.collection +
                                                 "' does not lead to '" + source.collection + "'");
  }
  auto members = to_set(source);
  ItemSet out{from.collection, {}};
  for (auto id : from.items) {
    const auto& it = store.item(id);
    std::optional<ItemId> up;
    if (label == "parent") {
      up = it.parent;
    } else if (auto ref = it.references.find(std::string(label)); ref != it.references.end()) {
      up = ref->second;
    }
    if (up && members.count(*up)) out.items.push_back(id);
  }
  return out;
}

ItemSet deproject(const Store& store, const ItemSet& source, std::string_view label, std::string_view collection) {
  return deproject(store, source, label, ItemSet::all(store, collection));
}

ItemSet project_parent(const Store& store, const ItemSet& source) {
  if (!store.concept_of_collection(source.collection).parent) {
    throw Error(ErrorKind::NoParentConcept, "concept of '" + source.collection + "' has no parent concept");
  }
  return project_simple(store, source, "parent");
}

ItemSet deproject_children(const Store& store, const ItemSet& source, const ItemSet& children) {
  const auto& coll = store.collection(children.collection);
  if (!coll.parent || *coll.parent != source.collection) {
    throw Error(ErrorKind::NotAChildCollection,
                "'" + children.collection + "' is not a child collection of '" + source.collection + "'");
  }
  return deproject(store, source, "parent", children);
}

ItemSet deproject_children(const Store& store, const ItemSet& source, std::string_view collection) {
  return deproject_children(store, source, ItemSet::all(store, collection));
}

ItemSet restrict(const ItemSet& source, const std::function<bool(ItemId)>& predicate) {
  ItemSet out{source.collection, {}};
  for (auto id : source.items) {
    if (predicate(id)) out.items.push_back(id);
  }
  return out;
}

ProductSet product(std::span<const ItemSet> inputs, std::size_t limit) {
  ProductSet out;
  std::size_t total = 1;
  for (const auto& in : inputs) {
    out.axes.push_back(in.collection);
    if (in.items.empty()) {
      total = 0;
    } else if (total > limit / in.items.size()) {
      throw Error(ErrorKind::BudgetExceeded, "product exceeds the evaluation budget of " + std::to_string(limit));
    } else {
      total *= in.items.size();
    }
  }
  if (inputs.empty() || total == 0) return out;
  if (total > limit) {
    throw Error(ErrorKind::BudgetExceeded, "product exceeds the evaluation budget of " + std::to_string(limit));
  }
  out.cells.reserve(total);
  std::vector<std::size_t> cursor(inputs.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<ItemId> cell;
    cell.reserve(inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) cell.push_back(inputs[k].items[cursor[k]]);
    out.cells.push_back(std::move(cell));
    for (std::size_t k = inputs.size(); k-- > 0;) {
      if (++cursor[k] < inputs[k].items.size()) break;
      cursor[k] = 0;
    }
  }
  return out;
}

ItemSet unite(const ItemSet& a, const ItemSet& b) {
  if (a.collection != b.collection) {
    throw Error(ErrorKind::CollectionMismatch, "cannot unite '" + a.collection + "' with '" + b.collection + "'");
  }
  ItemSet out{a.collection, {}};
  IdSet seen;
  for (const auto* s : {&a, &b}) {
    for (auto id : s->items) {
      if (seen.insert(id).second) out.items.push_back(id);
    }
  }
  return out;
}

ItemSet intersect(const ItemSet& a, const ItemSet& b) {
  if (a.collection != b.collection) {
    throw Error(ErrorKind::CollectionMismatch, "cannot intersect '" + a.collection + "' with '" + b.collection + "'");
  }
  auto right = to_set(b);
  IdSet seen;
  return restrict(a, [&](ItemId id) { return right.count(id) && seen.insert(id).second; });
}

Value aggregate(const Store& store, const ItemSet& set, Aggregate fn, std::optional<std::string_view> field) {
  if (fn == Aggregate::Size) return static_cast<std::int64_t>(set.size());
  if (!field) throw Error(ErrorKind::UnknownField, std::string(to_string(fn)) + " needs a numeric field");
  const auto& concept_decl = store.concept_of_collection(set.collection);
  if (const auto* f = concept_decl.find_field(*field); f && !f->type.is_numeric()) {
    throw Error(ErrorKind::NonNumericField, "field '" + std::string(*field) + "' is not numeric");
  }
  std::vector<Value> values;
  values.reserve(set.size());
  for (auto id : set.items) values.push_back(store.field_path_value(id, *field));
  return aggregate_values(fn, values);
}

Value aggregate_values(Aggregate fn, std::span<const Value> values) {
  if (fn == Aggregate::Size) return static_cast<std::int64_t>(values.size());
  bool decimal = false;
  for (const auto& v : values) {
    if (!v.is_number()) {
      throw Error(ErrorKind::NonNumericField, std::string(to_string(fn)) + " over non-numeric value '" +
                                                  schema::to_text(v) + "'");
    }
    decimal = decimal || std::holds_alternative<double>(v);
  }
  if (values.empty()) {
    if (fn == Aggregate::Sum) return std::int64_t{0};
    throw Error(ErrorKind::EmptyAggregate, std::string(to_string(fn)) + " of an empty collection");
  }
  switch (fn) {
    case Aggregate::Sum: {
      if (!decimal) {
        std::int64_t total = 0;
        for (const auto& v : values) total += std::get<std::int64_t>(v);
        return total;
      }
      double total = 0;
      for (const auto& v : values) total += v.as_double();
      return total;
    }
    case Aggregate::Avg: {
      double total = 0;
      for (const auto& v : values) total += v.as_double();
      return total / static_cast<double>(values.size());
    }
    case Aggregate::Min:
    case Aggregate::Max: {
      const Value* best = &values.front();
      for (const auto& v : values) {
        bool better = fn == Aggregate::Min ? v.as_double() < best->as_double() : v.as_double() > best->as_double();
        if (better) best = &v;
      }
      if (decimal) return best->as_double();
      return *best;
    }
    case Aggregate::Size: break;
  }
  return Value{};
}

}  // namespace coql::nav
