#include <doctest.h>

#include "svlib/sexpr.hpp"

using namespace svlib;

TEST_SUITE("sexpr") {

TEST_CASE("empty input reads as nothing") { CHECK(read_all("").empty()); }

TEST_CASE("comments are skipped") {
  auto v = read_all("(set-logic LIA) ; note");
  REQUIRE(v.size() == 1);
  REQUIRE(v[0].size() == 2);
  CHECK(v[0][0].is_symbol("set-logic"));
  CHECK(v[0][1].is_symbol("LIA"));
}

TEST_CASE("unbalanced open parenthesis") {
  try {
    read_all("((");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.span().start_offset == 2);
  }
}

TEST_CASE("unbalanced close parenthesis") { CHECK_THROWS_AS(read_all(")"), LexError); }

TEST_CASE("atom classification") {
  auto v = read_all("(assign (x 0)) :tag 1.5 #x1F #b01 \"a\"\"b\" |odd sym|");
  REQUIRE(v.size() == 7);
  CHECK(v[0][0].is_symbol("assign"));
  CHECK(v[0][1][0].is_symbol("x"));
  CHECK(v[0][1][1].is_numeral());
  CHECK(v[0][1][1].text() == "0");
  CHECK(v[1].is_keyword(":tag"));
  CHECK(v[2].atom_kind() == AtomKind::Decimal);
  CHECK(v[3].atom_kind() == AtomKind::Hexadecimal);
  CHECK(v[4].atom_kind() == AtomKind::Binary);
  CHECK(v[5].atom_kind() == AtomKind::String);
  CHECK(v[5].string_value() == "a\"b");
  CHECK(v[6].is_symbol("odd sym"));
  CHECK(v[6].is_quoted_symbol());
}

TEST_CASE("malformed tokens") {
  CHECK_THROWS_AS(read_all("007"), LexError);
  CHECK_THROWS_AS(read_all("\"open"), LexError);
  CHECK_THROWS_AS(read_all("|a\\b|"), LexError);
  CHECK_THROWS_AS(read_all(":"), LexError);
}

TEST_CASE("spans record line and column") {
  auto v = read_all("\n  (a\n b)");
  CHECK(v[0].span().line == 2);
  CHECK(v[0].span().column == 3);
  CHECK(v[0][1].span().line == 3);
  CHECK(v[0][1].span().column == 2);
}

TEST_CASE("write") {
  CHECK(write(SExpr::symbol("x")) == "x");
  CHECK(write(SExpr::list({})) == "()");
  CHECK(write(SExpr::list({SExpr::symbol("assume"), SExpr::symbol("true")})) == "(assume true)");
  CHECK(write(SExpr::symbol("a b")) == "|a b|");
  CHECK(write(SExpr::string_literal("say \"hi\"")) == "\"say \"\"hi\"\"\"");
}

TEST_CASE("write then read is the identity") {
  const char* texts[] = {"(a (b c) () d)", "(! (assume true) :tag t1)", "(#x0a #b1 \"s\" 12 1.25 |q r|)"};
  for (const char* t : texts) {
    auto v = read_all(t);
    REQUIRE(v.size() == 1);
    CHECK(write(v[0]) == t);
    CHECK(read_all(write(v[0]))[0] == v[0]);
  }
}

TEST_CASE("depth limit") {
  ReadOptions o;
  o.max_depth = 3;
  CHECK_NOTHROW(read_all("(((a)))", o));
  CHECK_THROWS_AS(read_all("((((a))))", o), LexError);
}

}
