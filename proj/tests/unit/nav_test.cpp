#include <gtest/gtest.h>

#include "coql/nav/ops.hpp"
#include "fixtures.hpp"

namespace {

using coql::Error;
using coql::ErrorKind;
using namespace coql::nav;
using coql::order::ComplexDimension;
using coql::schema::ComplexIdentity;

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::NotFound;
}

class Nav : public ::testing::Test {
 protected:
  coql::eval::Session session = coql::testing::db1_session();
  const Store& store = session.store();

  ItemId item(const std::string& collection, std::vector<std::string> path) {
    ComplexIdentity id;
    for (auto& p : path) id.segments.push_back({Value(p)});
    return store.resolve(collection, id);
  }
  ItemSet set(const std::string& collection, std::vector<std::vector<std::string>> paths) {
    ItemSet out{collection, {}};
    for (auto& p : paths) out.items.push_back(item(collection, p));
    return out;
  }
  ItemId owner(const std::string& person, const std::string& bank, const std::string& acc) {
    ComplexIdentity id{{{Value(store.identity(item("Persons", {person}))),
                         Value(store.identity(item("Accounts", {bank, acc})))}}};
    return store.resolve("AccountOwners", id);
  }
};

TEST_F(Nav, ProjectDeduplicates) {
  auto persons = set("Persons", {{"alice"}, {"bob"}});
  EXPECT_EQ(project(store, persons, ComplexDimension{{"address"}}), set("Addresses", {{"Berlin", "addr1"}}));
}

TEST_F(Nav, ProjectRankTwo) {
  auto owners = ItemSet::all(store, "AccountOwners");
  EXPECT_EQ(project(store, owners, ComplexDimension{{"owner", "address"}}),
            set("Addresses", {{"Berlin", "addr1"}, {"Bonn", "addr2"}}));
}

TEST_F(Nav, ProjectEmptyAndUnknown) {
  ItemSet empty{"Persons", {}};
  EXPECT_TRUE(project(store, empty, ComplexDimension{{"address"}}).empty());
  EXPECT_EQ(kind_of([&] { project(store, ItemSet::all(store, "Persons"), ComplexDimension{{"colour"}}); }),
            ErrorKind::UnknownDimension);
  EXPECT_EQ(kind_of([&] { project(store, ItemSet::all(store, "Persons"), ComplexDimension{{"age"}}); }),
            ErrorKind::UnknownDimension);
}

TEST_F(Nav, ProjectIntoTarget) {
  auto persons = ItemSet::all(store, "Persons");
  auto berlin = set("Addresses", {{"Berlin", "addr1"}});
  EXPECT_EQ(project(store, persons, ComplexDimension{{"address"}}, berlin), berlin);
}

TEST_F(Nav, Deproject) {
  auto addr1 = set("Addresses", {{"Berlin", "addr1"}});
  EXPECT_EQ(deproject(store, addr1, "address", "Persons"), set("Persons", {{"alice"}, {"bob"}}));
  auto alice = set("Persons", {{"alice"}});
  ItemSet expected{"AccountOwners", {owner("alice", "bankA", "acc1"), owner("alice", "bankB", "acc2")}};
  EXPECT_EQ(deproject(store, alice, "owner", "AccountOwners"), expected);
  EXPECT_TRUE(deproject(store, ItemSet{"Persons", {}}, "owner", "AccountOwners").empty());
  EXPECT_EQ(kind_of([&] { deproject(store, alice, "account", "AccountOwners"); }), ErrorKind::UnknownDimension);
}

TEST_F(Nav, Hierarchical) {
  auto accounts = ItemSet::all(store, "Accounts");
  EXPECT_EQ(project_parent(store, accounts), set("Banks", {{"bankA"}, {"bankB"}}));
  EXPECT_EQ(deproject_children(store, set("Accounts", {{"bankA", "acc1"}}), "SavingsAccounts"),
            set("SavingsAccounts", {{"bankA", "acc1", "sav1"}}));
  EXPECT_EQ(kind_of([&] { project_parent(store, ItemSet::all(store, "Cities")); }), ErrorKind::NoParentConcept);
  EXPECT_EQ(kind_of([&] { deproject_children(store, accounts, "Persons"); }), ErrorKind::NotAChildCollection);
  EXPECT_EQ(project(store, accounts, ComplexDimension{{"parent", "address"}}),
            set("Addresses", {{"Bonn", "addr2"}, {"Berlin", "addr1"}}));
}

TEST_F(Nav, Restrict) {
  auto persons = ItemSet::all(store, "Persons");
  auto older = restrict(persons, [&](ItemId id) {
    return std::get<std::int64_t>(store.field_path_value(id, "age")) > 20;
  });
  EXPECT_EQ(older, set("Persons", {{"alice"}, {"carol"}}));
  EXPECT_TRUE(restrict(persons, [](ItemId) { return false; }).empty());
}

TEST_F(Nav, Product) {
  std::vector<ItemSet> inputs{ItemSet::all(store, "Cities"), ItemSet::all(store, "Banks")};
  auto p = product(inputs);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.axes, (std::vector<std::string>{"Cities", "Banks"}));
  EXPECT_EQ(p.cells.front(), (std::vector<ItemId>{item("Cities", {"Berlin"}), item("Banks", {"bankA"})}));
  std::vector<ItemSet> one{ItemSet::all(store, "Persons")};
  EXPECT_EQ(product(one).size(), 3u);
  inputs.push_back(ItemSet{"Persons", {}});
  EXPECT_EQ(product(inputs).size(), 0u);
  std::vector<ItemSet> big{ItemSet::all(store, "Persons"), ItemSet::all(store, "Persons")};
  EXPECT_EQ(kind_of([&] { product(big, 8); }), ErrorKind::BudgetExceeded);
}

TEST_F(Nav, UnionIntersect) {
  auto alice = set("Persons", {{"alice"}});
  auto ab = set("Persons", {{"alice"}, {"bob"}});
  auto bc = set("Persons", {{"bob"}, {"carol"}});
  EXPECT_EQ(unite(alice, ab), ab);
  EXPECT_EQ(unite(bc, alice), set("Persons", {{"bob"}, {"carol"}, {"alice"}}));
  EXPECT_EQ(intersect(ab, bc), set("Persons", {{"bob"}}));
  EXPECT_TRUE(intersect(ab, ItemSet{"Persons", {}}).empty());
  EXPECT_EQ(kind_of([&] { unite(ab, ItemSet::all(store, "Banks")); }), ErrorKind::CollectionMismatch);
}

TEST_F(Nav, Aggregates) {
  auto sav1 = set("SavingsAccounts", {{"bankA", "acc1", "sav1"}});
  EXPECT_EQ(aggregate(store, sav1, Aggregate::Sum, "balance"), Value(150.0));
  ItemSet acc1_owners{"AccountOwners", {owner("alice", "bankA", "acc1"), owner("carol", "bankA", "acc1")}};
  EXPECT_EQ(aggregate(store, acc1_owners, Aggregate::Size), Value(std::int64_t{2}));
  ItemSet none{"SavingsAccounts", {}};
  EXPECT_EQ(aggregate(store, none, Aggregate::Sum, "balance").as_double(), 0.0);
  EXPECT_EQ(aggregate(store, none, Aggregate::Size), Value(std::int64_t{0}));
  EXPECT_EQ(kind_of([&] { aggregate(store, none, Aggregate::Min, "balance"); }), ErrorKind::EmptyAggregate);
  EXPECT_EQ(kind_of([&] { aggregate(store, ItemSet::all(store, "Persons"), Aggregate::Sum, "name"); }),
            ErrorKind::NonNumericField);
  auto persons = ItemSet::all(store, "Persons");
  EXPECT_EQ(aggregate(store, persons, Aggregate::Max, "age"), Value(std::int64_t{40}));
  EXPECT_EQ(aggregate(store, persons, Aggregate::Min, "age"), Value(std::int64_t{19}));
  EXPECT_NEAR(aggregate(store, persons, Aggregate::Avg, "age").as_double(), 28.0, 1e-12);
}

TEST_F(Nav, AggregateValues) {
  std::vector<Value> mixed{Value(std::int64_t{1}), Value(2.5)};
  EXPECT_EQ(aggregate_values(Aggregate::Sum, mixed), Value(3.5));
  std::vector<Value> ints{Value(std::int64_t{1}), Value(std::int64_t{2})};
  EXPECT_EQ(aggregate_values(Aggregate::Sum, ints), Value(std::int64_t{3}));
  EXPECT_EQ(parse_aggregate("sum"), Aggregate::Sum);
  EXPECT_FALSE(parse_aggregate("median"));
}

TEST_F(Nav, QueriesLeaveStoreUntouched) {
  auto before = store.fingerprint();
  auto persons = ItemSet::all(store, "Persons");
  project(store, persons, ComplexDimension{{"address"}});
  deproject(store, persons, "owner", "AccountOwners");
  std::vector<ItemSet> inputs{persons, persons};
  product(inputs);
  EXPECT_EQ(store.fingerprint(), before);
}

}  // namespace
