#include <gtest/gtest.h>

#include "coql/eval/session.hpp"
#include "coql/query/parser.hpp"
#include "db1_oracle.hpp"
#include "fixtures.hpp"

namespace {

using namespace coql::eval;
using coql::Error;
using coql::ErrorKind;
using coql::schema::ComplexIdentity;

class Eval : public ::testing::Test {
 protected:
  Session session = coql::testing::db1_session();

  ResultTable run(std::string_view text) {
    auto results = session.execute_script(text);
    EXPECT_FALSE(results.empty());
    EXPECT_TRUE(results.back().has_value());
    return *results.back();
  }

  Error failure(std::string_view text) {
    try {
      session.execute_script(text);
    } catch (const Error& e) {
      return e;
    }
    ADD_FAILURE() << "no error for " << text;
    return Error(ErrorKind::NotFound, "");
  }

  std::vector<std::string> column(const ResultTable& t, std::size_t c) {
    std::vector<std::string> out;
    for (const auto& row : t.rows) out.push_back(coql::schema::to_text(row[c]));
    return out;
  }

  ItemId item(const std::string& collection, std::vector<std::string> path) {
    ComplexIdentity id;
    for (auto& p : path) id.segments.push_back({Value(p)});
    return session.store().resolve(collection, id);
  }

  bool predicate(std::string_view text, ItemId id) {
    return session.eval_predicate(coql::query::parse_expression(text), id);
  }
};

std::vector<std::string> oracle_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> out;
  for (const auto& [bank, acc] : pairs) out.push_back(bank + "/" + acc);
  return out;
}

TEST_F(Eval, Select) {
  auto t = run("SELECT balance, parent.name FROM Accounts");
  ASSERT_EQ(t.columns.size(), 2u);
  EXPECT_EQ(t.columns[0].name, "balance");
  EXPECT_EQ(t.columns[0].type, "DOUBLE");
  EXPECT_EQ(t.columns[1].name, "parent.name");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.rows[0], (std::vector<Value>{Value(500.0), Value(std::string("Rheinbank"))}));
  EXPECT_EQ(t.rows[1], (std::vector<Value>{Value(300.0), Value(std::string("Spreebank"))}));
}

TEST_F(Eval, SelectWhere) {
  auto t = run("SELECT name, age FROM Persons WHERE age > 20 AND address.city = 'Berlin'");
  EXPECT_EQ(column(t, 0), (std::vector<std::string>{"alice"}));
}

TEST_F(Eval, DuplicateConceptCarriesSpan) {
  auto e = failure("\n  CONCEPT City IDENTITY CHAR(16) city");
  EXPECT_EQ(e.kind(), ErrorKind::DuplicateConcept);
  ASSERT_TRUE(e.span());
  EXPECT_EQ(e.span()->line, 2);
  EXPECT_EQ(e.span()->column, 3);
}

TEST_F(Eval, AssignmentBindsVariable) {
  auto t = run("Collection X = (Persons | age > 20)");
  EXPECT_EQ(t.size(), 2u);
  ASSERT_TRUE(session.variables().count("X"));
  EXPECT_EQ(column(run("X -> address -> Addresses"), 0), (std::vector<std::string>{"Berlin/addr1", "Bonn/addr2"}));
  EXPECT_EQ(failure("Collection Persons = Banks").kind(), ErrorKind::TypeCheckError);
}

TEST_F(Eval, BerlinBonn) {
  auto db = coql::testing::db1_tables();
  auto expected = oracle_pairs(coql::testing::berlin_bonn(db));
  EXPECT_EQ(expected, (std::vector<std::string>{"bankA/acc1"}));
  auto t = run(coql::testing::kBerlinPlain);
  EXPECT_EQ(t.columns[0].name, "identity");
  EXPECT_EQ(column(t, 0), expected);
}

TEST_F(Eval, BerlinBonnExtended) {
  auto db = coql::testing::db1_tables();
  coql::testing::Extension at_least_two{2, false, 100.0};
  auto expected = oracle_pairs(coql::testing::berlin_bonn(db, &at_least_two));
  EXPECT_EQ(expected, (std::vector<std::string>{"bankA/acc1"}));
  EXPECT_EQ(column(run(coql::testing::kBerlinExtended), 0), expected);

  // The literal `> 2` form: acc1 has exactly two owners, so nothing qualifies.
  coql::testing::Extension more_than_two{2, true, 100.0};
  auto strict = oracle_pairs(coql::testing::berlin_bonn(db, &more_than_two));
  auto text = coql::testing::read_text(coql::testing::data_path("corpus/blocks/09_berlin_extended.coql"));
  EXPECT_EQ(column(run(text), 0), strict);
  EXPECT_TRUE(strict.empty());
}

TEST_F(Eval, Predicates) {
  auto acc1 = item("Accounts", {"bankA", "acc1"});
  EXPECT_TRUE(predicate("parent.address.city = 'Bonn'", acc1));
  EXPECT_TRUE(predicate("SIZE(this <- account <- AccountOwners) >= 2", acc1));
  EXPECT_TRUE(predicate("this <- account <- AccountOwners = 2", acc1));
  EXPECT_TRUE(predicate("SUM(this <- parent <- SavingsAccounts.balance) > 100", acc1));
  EXPECT_TRUE(predicate("1 = 1", acc1));
  EXPECT_FALSE(predicate("NOT TRUE OR balance < 10", acc1));
  EXPECT_TRUE(predicate("balance = 500", acc1));
  EXPECT_TRUE(predicate("-balance < -499.5", acc1));
  EXPECT_TRUE(predicate("parent.name != 'Spreebank  '", acc1));
}

TEST_F(Eval, EmptyHeadSkipsPredicates) {
  auto t = run("(Persons | age > 100) -> address -> (Addresses | colour = 1)");
  EXPECT_EQ(t.size(), 0u);
  EXPECT_EQ(failure("(Persons | age > 1) -> address -> (Addresses | colour = 1)").kind(), ErrorKind::TypeCheckError);
}

TEST_F(Eval, Cube) {
  auto t = run(coql::testing::kCube);
  auto oracle = coql::testing::account_cube(coql::testing::db1_tables());
  ASSERT_EQ(t.size(), oracle.size());
  ASSERT_EQ(t.size(), 4u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(coql::schema::to_text(t.rows[i][0]), oracle[i].city);
    EXPECT_EQ(coql::schema::to_text(t.rows[i][1]), oracle[i].bank);
    EXPECT_DOUBLE_EQ(t.rows[i][2].as_double(), oracle[i].measure);
  }
  EXPECT_DOUBLE_EQ(t.rows[1][2].as_double(), 300.0);  // acc2 reached twice, counted once
  EXPECT_DOUBLE_EQ(t.rows[3][2].as_double(), 0.0);
  EXPECT_EQ(t.columns[2].name, "measure");
}

TEST_F(Eval, ProductForms) {
  auto cube = run("Collection ResultCube = ( Cities, Banks )");
  EXPECT_EQ(cube.size(), 4u);
  auto listing = run("FORALL (Persons p) RETURN (p)");
  EXPECT_EQ(column(listing, 0), (std::vector<std::string>{"alice", "bob", "carol"}));
  EXPECT_EQ(run("FORALL (Persons p, Banks b) WHERE FALSE RETURN (p, b)").size(), 0u);
  auto short_form = run("( Cities city, Banks bank, measure = 1 )");
  EXPECT_EQ(short_form.columns.size(), 3u);
  EXPECT_EQ(short_form.size(), 4u);
  auto fields = run("FORALL (Persons p) WHERE p.age > 20 BODY (INT years = p.age) RETURN (p.name, years)");
  EXPECT_EQ(column(fields, 1), (std::vector<std::string>{"25", "40"}));
}

TEST_F(Eval, ForAllErrors) {
  EXPECT_EQ(failure("FORALL (Persons p, Banks p) RETURN (p)").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("FORALL (Persons p) RETURN (p <- owner <- AccountOwners)").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("FORALL (Persons p) BODY (INT n = p.name) RETURN (n)").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("FORALL (Nowhere n) RETURN (n)").kind(), ErrorKind::UnknownCollection);
}

TEST_F(Eval, AliasInRestriction) {
  EXPECT_EQ(run("(Persons p | p.age > 20)").size(), 2u);
}

TEST_F(Eval, HierarchicalSteps) {
  EXPECT_EQ(column(run("Accounts -> parent -> Banks"), 0), (std::vector<std::string>{"bankA", "bankB"}));
  EXPECT_EQ(column(run("(Accounts | balance > 400) <- parent <- SavingsAccounts"), 0),
            (std::vector<std::string>{"bankA/acc1/sav1"}));
  EXPECT_EQ(column(run("AccountOwners -> owner.address -> Addresses"), 0),
            (std::vector<std::string>{"Berlin/addr1", "Bonn/addr2"}));
  EXPECT_EQ(column(run("Addresses <- owner.address <- AccountOwners"), 0).size(), 4u);
}

TEST_F(Eval, TypeErrors) {
  EXPECT_EQ(failure("(Persons | age)").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("(Persons | age > 'x')").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("(Persons | this < this)").kind(), ErrorKind::TypeCheckError);
  EXPECT_EQ(failure("SELECT name FROM Persons -> address -> Persons").kind(), ErrorKind::UnknownDimension);
  EXPECT_EQ(failure("(Cities | parent.city = 'x')").kind(), ErrorKind::NullParent);
  EXPECT_EQ(failure("Persons -> colour -> Addresses").kind(), ErrorKind::UnknownDimension);
  EXPECT_EQ(failure("SELECT MEDIAN(age) FROM Persons").kind(), ErrorKind::TypeCheckError);
}

TEST_F(Eval, Budget) {
  session.set_budget(5);
  EXPECT_EQ(failure("FORALL (Persons a, Persons b) RETURN (a)").kind(), ErrorKind::BudgetExceeded);
  EXPECT_NO_THROW(session.execute_script("Persons"));
}

TEST_F(Eval, QueriesAreReadOnly) {
  auto before = session.store().fingerprint();
  run("SELECT balance, parent.name FROM Accounts");
  run(coql::testing::kBerlinPlain);
  run(coql::testing::kBerlinExtended);
  run(coql::testing::kCube);
  run("FORALL (Persons p, Banks b) WHERE TRUE RETURN (p, b)");
  EXPECT_EQ(session.store().fingerprint(), before);
  session.execute_script("INSERT INTO Cities (city = 'Köln')");
  EXPECT_NE(session.store().fingerprint(), before);
}

TEST_F(Eval, StatementsWithoutResult) {
  Session fresh;
  auto results = fresh.execute_script("CONCEPT C IDENTITY INT id; CREATE TABLE Cs CONCEPT C; INSERT INTO Cs (id = 1); Cs");
  ASSERT_EQ(results.size(), 4u);
  EXPECT_FALSE(results[0]);
  EXPECT_FALSE(results[2]);
  ASSERT_TRUE(results[3]);
  EXPECT_EQ(results[3]->size(), 1u);
}

TEST(ResultTable, Finalize) {
  ResultTable t;
  t.columns = {{"a", ""}, {"a", ""}, {"c", ""}, {"d", ""}};
  t.rows = {{Value(std::int64_t{1}), Value(std::string("x")), Value(std::int64_t{1}), Value()},
            {Value(2.5), Value(std::string("y")), Value(true), Value()}};
  t.finalize();
  EXPECT_EQ(t.columns[0].name, "a");
  EXPECT_EQ(t.columns[1].name, "a#2");
  EXPECT_EQ(t.columns[0].type, "DOUBLE");
  EXPECT_EQ(t.columns[1].type, "CHAR");
  EXPECT_EQ(t.columns[2].type, "ANY");
  EXPECT_EQ(t.columns[3].type, "NULL");
}

}  // namespace
