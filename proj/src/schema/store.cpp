#include "coql/schema/store.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "coql/error.hpp"

namespace coql::schema {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> steps;
  std::size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    steps.emplace_back(path.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return steps;
}

const char* value_type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "NULL";
    case 1: return "boolean";
    case 2: return "integer";
    case 3: return "decimal";
    case 4: return "text";
    default: return "identity";
  }
}

void mix(std::uint64_t& h, std::string_view data) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= 0xff;
  h *= 1099511628211ULL;
}

}  // namespace

std::string FieldType::text() const {
  switch (kind) {
    case Kind::Char: return "CHAR(" + std::to_string(length) + ")";
    case Kind::Double: return "DOUBLE";
    case Kind::Int: return "INT";
    case Kind::Concept: return concept_name;
  }
  return {};
}

const FieldSpec* Concept::find_field(std::string_view field) const {
  for (const auto& f : identity) {
    if (f.name == field) return &f;
  }
  for (const auto& f : entity) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

Store::Store() = default;

Store::CollectionState& Store::state(std::string_view name) {
  auto it = collections_.find(name);
  if (it == collections_.end()) throw Error(ErrorKind::UnknownCollection, "unknown collection '" + std::string(name) + "'");
  return it->second;
}

const Store::CollectionState& Store::state(std::string_view name) const {
  auto it = collections_.find(name);
  if (it == collections_.end()) throw Error(ErrorKind::UnknownCollection, "unknown collection '" + std::string(name) + "'");
  return it->second;
}

bool Store::has_concept(std::string_view name) const { return concepts_.find(name) != concepts_.end(); }

bool Store::has_collection(std::string_view name) const { return collections_.find(name) != collections_.end(); }

const Concept& Store::concept_of(std::string_view name) const {
  auto it = concepts_.find(name);
  if (it == concepts_.end()) throw Error(ErrorKind::UnknownConcept, "unknown concept '" + std::string(name) + "'");
  return it->second;
}

const Concept& Store::concept_of_collection(std::string_view collection) const {
  return concept_of(state(collection).spec.concept_name);
}

const Collection& Store::collection(std::string_view name) const { return state(name).spec; }

std::span<const ItemId> Store::items(std::string_view collection) const { return state(collection).members; }

const Item& Store::item(ItemId id) const {
  if (id.value >= items_.size()) throw Error(ErrorKind::NotFound, "invalid item id " + std::to_string(id.value));
  return items_[id.value];
}

std::optional<order::NodeRef> Store::concept_node(std::string_view name) const {
  auto it = concept_nodes_.find(name);
  if (it == concept_nodes_.end()) return std::nullopt;
  return it->second;
}

std::optional<order::NodeRef> Store::collection_node(std::string_view name) const {
  auto it = collections_.find(name);
  if (it == collections_.end()) return std::nullopt;
  return it->second.node;
}

std::vector<std::string> Store::collection_chain(std::string_view collection) const {
  std::vector<std::string> chain;
  for (std::optional<std::string> cur = std::string(collection); cur; cur = state(*cur).spec.parent) {
    chain.push_back(*cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<std::string> Store::concept_chain(std::string_view concept_name) const {
  std::vector<std::string> chain;
  for (std::optional<std::string> cur = std::string(concept_name); cur; cur = concept_of(*cur).parent) {
    chain.push_back(*cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

void Store::declare_concept(Concept c) {
  if (has_concept(c.name)) throw Error(ErrorKind::DuplicateConcept, "concept '" + c.name + "' is already declared");
  if (c.parent) {
    if (*c.parent == c.name) throw Error(ErrorKind::InclusionCycle, "concept '" + c.name + "' cannot include itself");
    if (!has_concept(*c.parent)) {
      throw Error(ErrorKind::UnknownParent, "parent concept '" + *c.parent + "' is not declared");
    }
  }
  if (c.identity.empty()) throw Error(ErrorKind::MissingIdentity, "concept '" + c.name + "' has no identity field");

  std::set<std::string> names;
  auto check_fields = [&](std::vector<FieldSpec>& fields, FieldKind kind) {
    for (auto& f : fields) {
      f.kind = kind;
      if (f.name == "parent") throw Error(ErrorKind::DuplicateField, "field name 'parent' is reserved");
      if (!names.insert(f.name).second) {
        throw Error(ErrorKind::DuplicateField, "field '" + f.name + "' declared twice in '" + c.name + "'");
      }
      if (f.type.is_concept() && !has_concept(f.type.concept_name)) {
        throw Error(ErrorKind::UnknownFieldType, "field '" + f.name + "' has unknown type '" + f.type.concept_name + "'");
      }
    }
  };
  check_fields(c.identity, FieldKind::Identity);
  check_fields(c.entity, FieldKind::Entity);

  if (concepts_order_.empty()) concepts_order_.add_element(std::nullopt, "concepts");
  auto node = concepts_order_.add_element(*concepts_order_.root(), c.name);
  concept_nodes_.emplace(c.name, node);
  for (const auto* fields : {&c.identity, &c.entity}) {
    for (const auto& f : *fields) {
      if (f.type.is_concept()) concepts_order_.add_order_edge(node, f.name, concept_nodes_.at(f.type.concept_name));
    }
  }
  concept_order_names_.push_back(c.name);
  std::string name = c.name;
  concepts_.emplace(std::move(name), std::move(c));
}

void Store::create_collection(Collection c) {
  if (has_collection(c.name)) {
    throw Error(ErrorKind::DuplicateCollection, "collection '" + c.name + "' already exists");
  }
  if (!has_concept(c.concept_name)) {
    throw Error(ErrorKind::UnknownConcept, "unknown concept '" + c.concept_name + "'");
  }
  const Concept& concept_decl = concept_of(c.concept_name);

  if (concept_decl.parent) {
    if (!c.parent) {
      throw Error(ErrorKind::MissingParentCollection,
                  "concept '" + concept_decl.name + "' is included in '" + *concept_decl.parent +
                      "'; the collection needs IN <parent collection>");
    }
    if (!has_collection(*c.parent)) {
      throw Error(ErrorKind::MissingParentCollection, "parent collection '" + *c.parent + "' does not exist");
    }
    const auto& parent_concept = state(*c.parent).spec.concept_name;
    if (parent_concept != *concept_decl.parent) {
      throw Error(ErrorKind::BindingMismatch, "parent collection '" + *c.parent + "' holds '" + parent_concept +
                                                  "', expected '" + *concept_decl.parent + "'");
    }
  } else if (c.parent) {
    throw Error(ErrorKind::BindingMismatch, "concept '" + concept_decl.name + "' has no parent concept");
  }

  for (const auto& [field, target] : c.bindings) {
    const FieldSpec* f = concept_decl.find_field(field);
    if (!f) throw Error(ErrorKind::UnknownField, "concept '" + concept_decl.name + "' has no field '" + field + "'");
    if (!f->type.is_concept()) {
      throw Error(ErrorKind::BindingMismatch, "field '" + field + "' is not concept-typed and cannot be bound");
    }
    if (!has_collection(target)) throw Error(ErrorKind::UnknownCollection, "unknown collection '" + target + "'");
    const auto& target_concept = state(target).spec.concept_name;
    if (target_concept != f->type.concept_name) {
      throw Error(ErrorKind::BindingMismatch, "field '" + field + "' has type '" + f->type.concept_name +
                                                  "' but '" + target + "' holds '" + target_concept + "'");
    }
  }
  for (const auto* fields : {&concept_decl.identity, &concept_decl.entity}) {
    for (const auto& f : *fields) {
      if (f.type.is_concept() && !c.bindings.count(f.name)) {
        throw Error(ErrorKind::MissingBinding, "field '" + f.name + "' of '" + c.name + "' is not bound to a collection");
      }
    }
  }

  if (data_order_.empty()) data_order_.add_element(std::nullopt, "data");
  CollectionState st;
  st.node = data_order_.add_element(*data_order_.root(), c.name);
  for (const auto* fields : {&concept_decl.identity, &concept_decl.entity}) {
    for (const auto& f : *fields) {
      if (f.type.is_concept()) data_order_.add_order_edge(st.node, f.name, state(c.bindings.at(f.name)).node);
    }
  }
  collection_order_names_.push_back(c.name);
  st.spec = std::move(c);
  std::string name = st.spec.name;
  collections_.emplace(std::move(name), std::move(st));
}

Value Store::typed_value(const FieldSpec& field, const Collection& coll, const Value& raw, ItemId* ref) const {
  auto mismatch = [&](const std::string& expected) {
    return Error(ErrorKind::TypeMismatch, "field '" + field.name + "' expects " + expected + ", got " +
                                              value_type_name(raw) + " '" + to_text(raw) + "'");
  };
  switch (field.type.kind) {
    case FieldType::Kind::Char: {
      auto s = std::get_if<std::string>(&raw);
      if (!s) throw mismatch(field.type.text());
      auto trimmed = rtrim(*s);
      if (trimmed.size() > field.type.length) throw mismatch(field.type.text() + " (value too long)");
      return trimmed;
    }
    case FieldType::Kind::Int:
      if (!std::holds_alternative<std::int64_t>(raw)) throw mismatch("INT");
      return raw;
    case FieldType::Kind::Double:
      if (!raw.is_number()) throw mismatch("DOUBLE");
      return raw.as_double();
    case FieldType::Kind::Concept: {
      auto id = std::get_if<ComplexIdentity>(&raw);
      if (!id) throw mismatch("an identity of '" + field.type.concept_name + "'");
      const auto& bound = coll.bindings.at(field.name);
      try {
        *ref = resolve(bound, *id);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotFound && e.kind() != ErrorKind::SegmentCountMismatch) throw;
        throw Error(ErrorKind::DanglingReference,
                    "field '" + field.name + "' references <" + to_text(*id) + ">, which is not in '" + bound + "'");
      }
      return identity(*ref);
    }
  }
  return raw;
}

ComplexIdentity Store::insert_item(std::string_view collection_name, const std::optional<ComplexIdentity>& parent,
                                   const std::map<std::string, Value>& values) {
  CollectionState& st = state(collection_name);
  const Concept& concept_decl = concept_of(st.spec.concept_name);

  std::optional<ItemId> parent_item;
  if (concept_decl.parent) {
    if (!parent) throw Error(ErrorKind::MissingParent, "items of '" + st.spec.name + "' need a parent item");
    try {
      parent_item = resolve(*st.spec.parent, *parent);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotFound && e.kind() != ErrorKind::SegmentCountMismatch) throw;
      throw Error(ErrorKind::MissingParent, "parent <" + to_text(*parent) + "> is not in '" + *st.spec.parent + "'");
    }
  } else if (parent) {
    throw Error(ErrorKind::TypeMismatch, "items of '" + st.spec.name + "' have no parent");
  }

  for (const auto& [field, v] : values) {
    if (!concept_decl.find_field(field)) {
      throw Error(ErrorKind::UnknownField, "concept '" + concept_decl.name + "' has no field '" + field + "'");
    }
  }

  Item item;
  item.id = ItemId{static_cast<std::uint32_t>(items_.size())};
  item.collection = st.spec.name;
  item.parent = parent_item;
  for (const auto* fields : {&concept_decl.identity, &concept_decl.entity}) {
    for (const auto& f : *fields) {
      auto it = values.find(f.name);
      if (it == values.end()) throw Error(ErrorKind::MissingField, "field '" + f.name + "' is missing");
      ItemId ref;
      Value v = typed_value(f, st.spec, it->second, &ref);
      if (f.type.is_concept()) item.references.emplace(f.name, ref);
      if (f.kind == FieldKind::Identity) item.identity.push_back(v);
      item.values.emplace(f.name, std::move(v));
    }
  }

  std::pair<std::int64_t, std::string> key{parent_item ? std::int64_t{parent_item->value} : std::int64_t{-1},
                                         encode_key(item.identity)};
  if (st.index.count(key)) {
    throw Error(ErrorKind::DuplicateIdentity,
                "'" + st.spec.name + "' already holds <" + to_text(item.identity) + "> under this parent");
  }

  std::string node_name = parent_item ? to_text(identity(*parent_item)) + "/" + to_text(item.identity)
                                      : to_text(item.identity);
  try {
    item.node = data_order_.add_element(st.node, node_name);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidTree) throw;
    // Distinct identities with the same display text.
    item.node = data_order_.add_element(st.node, node_name + "~" + std::to_string(item.id.value));
  }
  for (const auto* fields : {&concept_decl.identity, &concept_decl.entity}) {
    for (const auto& f : *fields) {
      if (f.type.is_concept()) {
        data_order_.add_order_edge(item.node, f.name, items_[item.references.at(f.name).value].node);
      }
    }
  }

  st.index.emplace(std::move(key), item.id);
  st.members.push_back(item.id);
  items_.push_back(std::move(item));
  return identity(items_.back().id);
}

ComplexIdentity Store::identity(ItemId id) const {
  ComplexIdentity out;
  for (std::optional<ItemId> cur = id; cur; cur = item(*cur).parent) out.segments.push_back(item(*cur).identity);
  std::reverse(out.segments.begin(), out.segments.end());
  return out;
}

ItemId Store::resolve(std::string_view collection_name, const ComplexIdentity& id) const {
  auto chain = collection_chain(collection_name);
  if (id.size() != chain.size()) {
    throw Error(ErrorKind::SegmentCountMismatch, "'" + std::string(collection_name) + "' expects " +
                                                     std::to_string(chain.size()) + " identity segment(s), got " +
                                                     std::to_string(id.size()));
  }
  std::int64_t parent = -1;
  ItemId found{};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& st = state(chain[i]);
    const Concept& c = concept_of(st.spec.concept_name);
    const auto& raw = id.segments[i];
    auto not_found = [&] {
      return Error(ErrorKind::NotFound, "no item <" + to_text(id) + "> in '" + std::string(collection_name) + "'");
    };
    if (raw.size() != c.identity.size()) throw not_found();
    Segment seg;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      ItemId ref;
      try {
        seg.push_back(typed_value(c.identity[k], st.spec, raw[k], &ref));
      } catch (const Error&) {
        throw not_found();
      }
    }
    auto it = st.index.find({parent, encode_key(seg)});
    if (it == st.index.end()) throw not_found();
    found = it->second;
    parent = found.value;
  }
  return found;
}

StepResult Store::step(ItemId id, std::string_view name) const {
  const Item& it = item(id);
  if (name == "parent") {
    if (!it.parent) throw Error(ErrorKind::NullParent, "item <" + to_text(identity(id)) + "> has no parent");
    return *it.parent;
  }
  for (std::optional<ItemId> cur = id; cur; cur = item(*cur).parent) {
    const Item& owner = item(*cur);
    const Concept& c = concept_of_collection(owner.collection);
    const FieldSpec* f = c.find_field(name);
    if (f && (*cur == id || f->kind == FieldKind::Identity)) {
      if (f->type.is_concept()) return owner.references.at(f->name);
      return owner.values.at(f->name);
    }
  }
  if (iequals(name, concept_of_collection(it.collection).name)) return id;
  throw Error(ErrorKind::UnknownField,
              "'" + std::string(name) + "' is not a field of " + concept_of_collection(it.collection).name);
}

Value Store::field_path_value(ItemId id, std::string_view path) const {
  StepResult cur = id;
  for (const auto& s : split_path(path)) {
    auto item_id = std::get_if<ItemId>(&cur);
    if (!item_id) throw Error(ErrorKind::UnknownField, "cannot navigate into a value with '" + s + "'");
    cur = step(*item_id, s);
  }
  if (auto item_id = std::get_if<ItemId>(&cur)) return identity(*item_id);
  return std::get<Value>(cur);
}

void Store::set_entity_value(ItemId id, std::string_view field, Value value) {
  Item& it = items_.at(item(id).id.value);
  const Concept& c = concept_of_collection(it.collection);
  const FieldSpec* f = c.find_field(field);
  if (!f) throw Error(ErrorKind::UnknownField, "'" + std::string(field) + "' is not a field of " + c.name);
  if (f->kind == FieldKind::Identity) throw Error(ErrorKind::TypeMismatch, "identity fields cannot change");
  if (f->type.is_concept()) throw Error(ErrorKind::TypeMismatch, "references cannot change");
  ItemId unused;
  it.values[f->name] = typed_value(*f, state(it.collection).spec, value, &unused);
}

void Store::check_integrity() const {
  concepts_order_.check();
  data_order_.check();
  for (const auto& it : items_) {
    const auto& coll = state(it.collection).spec;
    for (const auto& [field, target] : it.references) {
      const auto& stored = std::get<ComplexIdentity>(it.values.at(field));
      if (resolve(coll.bindings.at(field), stored) != target) {
        throw Error(ErrorKind::DanglingReference, "reference '" + field + "' does not resolve to its recorded target");
      }
      if (data_order_.super_element(it.node, field) != item(target).node) {
        throw Error(ErrorKind::DanglingReference, "order edge '" + field + "' out of sync");
      }
    }
    if (resolve(it.collection, identity(it.id)) != it.id) {
      throw Error(ErrorKind::NotFound, "item does not resolve by its own identity");
    }
  }
}

std::uint64_t Store::fingerprint() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& name : concept_order_names_) {
    const auto& c = concepts_.at(name);
    mix(h, c.name);
    mix(h, c.parent.value_or(""));
    for (const auto* fields : {&c.identity, &c.entity}) {
      for (const auto& f : *fields) {
        mix(h, f.name);
        mix(h, f.type.text());
      }
    }
  }
  for (const auto& name : collection_order_names_) {
    const auto& st = collections_.at(name);
    mix(h, name);
    mix(h, st.spec.concept_name);
    mix(h, st.spec.parent.value_or(""));
    for (const auto& [f, t] : st.spec.bindings) {
      mix(h, f);
      mix(h, t);
    }
    mix(h, std::to_string(st.members.size()));
  }
  for (const auto& it : items_) {
    mix(h, it.collection);
    mix(h, std::to_string(it.parent ? it.parent->value : -1));
    for (const auto& [f, v] : it.values) {
      mix(h, f);
      mix(h, encode_key(Segment{v}));
    }
  }
  mix(h, std::to_string(data_order_.size()) + ":" + std::to_string(data_order_.edges().size()));
  return h;
}

}  // namespace coql::schema
