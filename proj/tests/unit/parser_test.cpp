#include <gtest/gtest.h>

#include "coql/query/parser.hpp"
#include "coql/query/printer.hpp"
#include "fixtures.hpp"

namespace {

using namespace coql::query;
using coql::Error;
using coql::ErrorKind;

Statement one(std::string_view text) {
  auto statements = parse_script(text);
  EXPECT_EQ(statements.size(), 1u);
  return statements.front();
}

Error parse_error(std::string_view text) {
  try {
    parse_script(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "parsed: " << text;
  return Error(ErrorKind::NotFound, "");
}

TEST(Parser, ConceptDeclaration) {
  auto st = one(coql::testing::read_text(coql::testing::data_path("corpus/blocks/01_concept_bank.coql")));
  const auto& c = std::get<ConceptDecl>(st.node);
  EXPECT_EQ(c.name, "Bank");
  ASSERT_EQ(c.identity.size(), 1u);
  ASSERT_EQ(c.entity.size(), 2u);
  EXPECT_EQ(c.identity[0].type, (TypeName{"CHAR", 16}));
  EXPECT_EQ(c.entity[1].type, (TypeName{"Address", std::nullopt}));
}

TEST(Parser, IncludedConcept) {
  auto c = std::get<ConceptDecl>(one("CONCEPT Account IN Bank IDENTITY CHAR(8) accNo ENTITY DOUBLE balance").node);
  EXPECT_EQ(c.parent, "Bank");
}

TEST(Parser, CreateTable) {
  auto t = std::get<CreateTable>(one("CREATE TABLE Accounts CONCEPT Account IN Banks owner = Persons").node);
  EXPECT_EQ(t.name, "Accounts");
  EXPECT_EQ(t.concept_name, "Account");
  EXPECT_EQ(t.parent, "Banks");
  EXPECT_EQ(t.bindings, (std::vector<std::pair<std::string, std::string>>{{"owner", "Persons"}}));
}

TEST(Parser, Insert) {
  auto ins = std::get<Insert>(one("INSERT INTO Accounts UNDER <'bankA'> (accNo = 'acc1', balance = -5.5)").node);
  EXPECT_EQ(ins.collection, "Accounts");
  ASSERT_TRUE(ins.under);
  EXPECT_EQ(ins.under->segments.size(), 1u);
  ASSERT_EQ(ins.values.size(), 2u);
  EXPECT_EQ(std::get<Literal>(ins.values[1].value), (Literal{-5.5}));
  auto owner = std::get<Insert>(one("INSERT INTO AccountOwners (owner = <'alice'>, account = <'bankA'/'acc1'>)").node);
  EXPECT_EQ(std::get<IdentityLiteral>(owner.values[1].value).segments.size(), 2u);
  auto multi = std::get<Insert>(one("INSERT INTO X (k = <('a', 1)/<'b'>>)").node);
  const auto& id = std::get<IdentityLiteral>(multi.values[0].value);
  EXPECT_EQ(id.segments[0].size(), 2u);
  EXPECT_TRUE(std::holds_alternative<Box<IdentityLiteral>>(id.segments[1][0].value));
}

TEST(Parser, Select) {
  auto s = std::get<Select>(one("SELECT balance, parent.name FROM Accounts").node);
  ASSERT_EQ(s.columns.size(), 2u);
  EXPECT_EQ(std::get<PathExpr>(s.columns[1].node).steps, (std::vector<std::string>{"parent", "name"}));
  EXPECT_EQ(s.source.head.name, "Accounts");
  EXPECT_EQ(parse_error("SELECT balance FROM").kind(), ErrorKind::ParseError);
}

TEST(Parser, BerlinQueryShape) {
  auto st = one(coql::testing::kBerlinPlain);
  const auto& p = std::get<PathQuery>(st.node).path;
  EXPECT_TRUE(p.head.restricted());
  ASSERT_EQ(p.steps.size(), 3u);
  EXPECT_EQ(p.steps[0].kind, StepKind::Deproject);
  EXPECT_EQ(p.steps[1].kind, StepKind::Deproject);
  EXPECT_EQ(p.steps[2].kind, StepKind::Project);
  int restrictions = p.head.restricted();
  for (const auto& s : p.steps) restrictions += s.term.restricted();
  EXPECT_EQ(restrictions, 3);
}

TEST(Parser, SizeShortcut) {
  auto e = parse_expression("this <- account <- AccountOwners > 2");
  const auto& cmp = std::get<BinaryExpr>(e.node);
  EXPECT_EQ(cmp.op, BinaryOp::Greater);
  const auto& call = std::get<CallExpr>(cmp.lhs->node);
  EXPECT_EQ(call.name, "SIZE");
  EXPECT_TRUE(std::holds_alternative<Box<AccessPath>>(call.args[0].node));
  // A field suffix turns the path into values, so no shortcut.
  auto values = parse_expression("this <- parent <- SavingsAccounts.balance = 2");
  EXPECT_TRUE(std::holds_alternative<Box<AccessPath>>(std::get<BinaryExpr>(values.node).lhs->node));
}

TEST(Parser, Precedence) {
  auto e = parse_expression("NOT a = 1 OR b < 2 AND c");
  const auto& top = std::get<BinaryExpr>(e.node);
  EXPECT_EQ(top.op, BinaryOp::Or);
  // NOT binds tighter than a comparison.
  const auto& lhs = std::get<BinaryExpr>(top.lhs->node);
  EXPECT_EQ(lhs.op, BinaryOp::Eq);
  EXPECT_EQ(std::get<UnaryExpr>(lhs.lhs->node).op, UnaryOp::Not);
  EXPECT_EQ(std::get<BinaryExpr>(top.rhs->node).op, BinaryOp::And);
  EXPECT_EQ(parse_error("SELECT a FROM X WHERE a = b = c").kind(), ErrorKind::ParseError);
}

TEST(Parser, EqualityForms) {
  EXPECT_EQ(std::get<BinaryExpr>(parse_expression("a == b").node).op, BinaryOp::Eq);
  EXPECT_EQ(std::get<BinaryExpr>(parse_expression("a = b").node).op, BinaryOp::Eq);
  EXPECT_EQ(parse_expression("a == b"), parse_expression("a = b"));
}

TEST(Parser, ForAllVerbose) {
  auto q = std::get<ForAll>(one(coql::testing::kCube).node);
  ASSERT_EQ(q.sources.size(), 2u);
  EXPECT_EQ(source_alias(q.sources[0]), "city");
  ASSERT_EQ(q.body.size(), 2u);
  EXPECT_EQ(q.body[0].type, (TypeName{"Collection", std::nullopt}));
  EXPECT_EQ(q.body[1].name, "measure");
  EXPECT_EQ(q.returns.size(), 3u);
}

TEST(Parser, ShortProductForm) {
  auto a = std::get<Assignment>(one("Collection ResultCube = ( Cities, Banks )").node);
  const auto& q = std::get<ForAll>(a.value);
  EXPECT_EQ(q.sources.size(), 2u);
  EXPECT_EQ(q.returns.size(), 2u);
  auto m = std::get<ForAll>(one("( Cities city, Banks bank, measure = 1 )").node);
  EXPECT_EQ(m.body.size(), 1u);
  EXPECT_EQ(m.returns.size(), 3u);
}

TEST(Parser, Assignment) {
  auto a = std::get<Assignment>(one("Collection X = (Persons | age > 20)").node);
  EXPECT_EQ(a.name, "X");
  EXPECT_TRUE(std::get<AccessPath>(a.value).head.restricted());
  EXPECT_EQ(parse_error("Table X = Persons").kind(), ErrorKind::ParseError);
}

TEST(Parser, StatementSeparators) {
  EXPECT_EQ(parse_script("Persons; Banks\nCities;").size(), 3u);
  EXPECT_TRUE(parse_script("").empty());
  EXPECT_TRUE(parse_script("// only a comment\n;;").empty());
}

TEST(Parser, TrailingGarbage) {
  EXPECT_EQ(parse_error("SELECT a FROM X )").kind(), ErrorKind::ParseError);
  EXPECT_EQ(parse_error("Persons -> ").kind(), ErrorKind::ParseError);
}

TEST(Parser, ErrorPositions) {
  auto e = parse_error("SELECT balance\nFROM ;");
  ASSERT_TRUE(e.span());
  EXPECT_EQ(e.span()->line, 2);
  EXPECT_EQ(e.span()->column, 6);
  EXPECT_NE(std::string(e.what()).find("found ';'"), std::string::npos);

  // At end of input the error points just past the last token.
  std::string text = "CONCEPT";
  auto end = parse_error(text);
  ASSERT_TRUE(end.span());
  EXPECT_LE(end.span()->offset, text.size());
  EXPECT_NE(std::string(end.what()).find("end of input"), std::string::npos);
}

TEST(Parser, ErrorPositionsStayInsideInput) {
  const std::vector<std::string> broken{"CONCEPT",        "CONCEPT X IDENTITY",  "SELECT FROM X",  "(X | )",
                                        "X -> -> Y",      "FORALL (X) RETURN",   "INSERT INTO",    "Collection = X",
                                        "X <- a <- (Y |", "CREATE TABLE T",      "SUM(",           "FORALL ( ) RETURN (a)"};
  for (const auto& text : broken) {
    auto e = parse_error(text);
    EXPECT_TRUE(coql::is_syntax_error(e.kind())) << text;
    ASSERT_TRUE(e.span()) << text;
    EXPECT_LE(e.span()->offset, text.size()) << text;
  }
}

}  // namespace
