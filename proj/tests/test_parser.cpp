#include <doctest.h>

#include "support.hpp"
#include "svlib/parser.hpp"
#include "svlib/printer.hpp"

using namespace svlib;

TEST_SUITE("parser") {

TEST_CASE("declare-var") {
  auto s = support::parse_ok("(declare-var g Int)");
  REQUIRE(s.commands.size() == 1);
  CHECK(s.commands[0].kind == CmdKind::DeclareVar);
  CHECK(s.commands[0].name.name == "g");
  CHECK(s.commands[0].sort.is("Int"));
}

TEST_CASE("verify-call") {
  auto s = support::parse_ok("(verify-call add (x1 y1))");
  const Command& c = s.commands.at(0);
  CHECK(c.kind == CmdKind::VerifyCall);
  CHECK(c.name.name == "add");
  REQUIRE(c.args.size() == 2);
  CHECK(c.args[0].is_var("x1"));
  CHECK(c.args[1].is_var("y1"));
}

TEST_CASE("SMT-LIB commands outside the whitelist are rejected") {
  auto r = parse_script_text("(check-sat)");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].rule_id == "S-SYNTAX");
}

TEST_CASE("a malformed command does not stop the rest") {
  auto r = parse_script_text("(declare-var a Int) (check-sat) (declare-var b Int)");
  CHECK(r.errors.size() == 1);
  CHECK(r.script.commands.size() == 2);
}

TEST_CASE("statements") {
  Statement s = parse_statement_text("(sequence)");
  CHECK(s.kind == StmtKind::Sequence);
  CHECK(s.children.empty());

  CHECK_THROWS_AS(parse_statement_text("(assign (x 1) (x 2))"), ParseException);
  CHECK_THROWS_AS(parse_statement_text("(havoc x x)"), ParseException);
  CHECK_THROWS_AS(parse_statement_text("(break)"), ParseException);
  CHECK_NOTHROW(parse_statement_text("(while true (break))"));

  Statement a = parse_statement_text("(! (assume true) :tag t1)");
  CHECK(a.kind == StmtKind::Annotated);
  CHECK(a.inner().kind == StmtKind::Assume);
  CHECK(a.inner().cond.is_true());
  REQUIRE(a.attrs.size() == 1);
  CHECK(a.attrs[0].kind == AttrKind::Tag);
  CHECK(a.attrs[0].symbol.name == "t1");

  Statement g = parse_statement_text("(if (> x 0) (goto l))");
  CHECK(g.kind == StmtKind::CondGoto);
  CHECK(g.name.name == "l");

  Statement c = parse_statement_text("(call f (1 x) (a b))");
  CHECK(c.kind == StmtKind::Call);
  CHECK(c.args.size() == 2);
  CHECK(c.vars.size() == 2);
}

TEST_CASE("attributes") {
  Statement s = parse_statement_text(
      "(! (while true (assume true)) :tag l :invariant (> x 0) :decreases x :decreases-lex (x y) :not-recurring)");
  REQUIRE(s.attrs.size() == 5);
  CHECK(s.attrs[1].kind == AttrKind::Invariant);
  CHECK(s.attrs[2].kind == AttrKind::Decreases);
  CHECK(s.attrs[3].kind == AttrKind::DecreasesLex);
  CHECK(s.attrs[3].terms.size() == 2);
  CHECK(s.attrs[4].kind == AttrKind::NotRecurring);
}

TEST_CASE("at terms only inside annotations") {
  CHECK_NOTHROW(parse_statement_text("(! (assume true) :tag t :check-true (= x (at x t)))"));
  CHECK_THROWS_AS(parse_statement_text("(assume (= x (at x t)))"), ParseException);
}

TEST_CASE("witnesses") {
  Witness c = parse_witness_text("((set-info :producer \"t\") (annotate-tag L :invariant true))");
  CHECK_FALSE(c.is_violation);
  CHECK(c.metadata.size() == 1);
  REQUIRE(c.annotations.size() == 1);
  CHECK(c.annotations[0].tag.name == "L");

  Witness v = parse_witness_text(
      "((select-trace (model) (init-global-vars) (entry-proc add) (steps) (incorrect-annotation T :ensures true)))");
  CHECK(v.is_violation);
  REQUIRE(v.traces.size() == 1);
  CHECK(v.traces[0].entry_proc.name == "add");
  CHECK(v.traces[0].violated.annotation.tag.name == "T");

  Witness e = parse_witness_text("()");
  CHECK_FALSE(e.is_violation);
  CHECK(e.annotations.empty());

  CHECK_THROWS_AS(parse_witness_text("((verify-call add ()))"), ParseException);
  CHECK_THROWS_AS(
      parse_witness_text("((annotate-tag L :invariant true) (select-trace (model) (init-global-vars) (entry-proc add) "
                         "(steps) (incorrect-annotation T :ensures true)))"),
      ParseException);
}

TEST_CASE("trace steps") {
  Witness v = parse_witness_text(
      "((select-trace (model (define-fun x1 () Int 2)) (init-global-vars (g 1)) (entry-proc add)"
      " (steps (init-proc-vars add (y 0)) (havoc (x 3)) (choice 1) (leap while-loop (x 3) (y (- 1))))"
      " (incorrect-annotation proc-add :ensures (= x (+ x0 y0)))"
      " (using-annotation while-loop :invariant (= y 0))))");
  const Trace& t = v.traces.at(0);
  CHECK(t.model.size() == 1);
  CHECK(t.init_globals.size() == 1);
  REQUIRE(t.steps.size() == 4);
  CHECK(t.steps[0].kind == StepKind::InitProcVars);
  CHECK(t.steps[1].kind == StepKind::Havoc);
  CHECK(t.steps[2].kind == StepKind::Choice);
  CHECK(t.steps[2].choice == 1);
  CHECK(t.steps[3].kind == StepKind::Leap);
  CHECK(t.steps[3].name.name == "while-loop");
  CHECK(t.using_annotations.size() == 1);
}

}

TEST_SUITE("printer") {

TEST_CASE("flattening nested annotations") {
  Statement s = parse_statement_text("(! (! (assume true) :tag a) :tag b)");
  Statement f = flatten_annotations(s);
  CHECK(f == parse_statement_text("(! (assume true) :tag a :tag b)"));
  Statement p = parse_statement_text("(assume true)");
  CHECK(flatten_annotations(p) == p);
  Statement deep = parse_statement_text("(! (! (! (assume true) :tag p) :tag q) :tag r)");
  CHECK(flatten_annotations(deep) == parse_statement_text("(! (assume true) :tag p :tag q :tag r)"));
}

TEST_CASE("scripts print one command per form") {
  CHECK(print_script(Script{}) == "");
  CHECK(print_script(support::parse_ok("(declare-var x Int)")) == "(declare-var x Int)\n");
}

TEST_CASE("corpus scripts round-trip") {
  for (const auto& id : corpus::list()) {
    CAPTURE(id);
    auto e = corpus::load(id);
    Script s = support::parse_ok(e.task);
    std::string once = print_script(s);
    Script again = support::parse_ok(once);
    CHECK(again == s);
    CHECK(print_script(again) == once);
    if (e.witness) {
      Witness w = parse_witness_text(*e.witness);
      CHECK(parse_witness_text(print_witness(w)) == w);
    }
  }
}

TEST_CASE("quoted symbols survive printing") {
  Script s = support::parse_ok("(declare-var |odd name| Int)");
  CHECK(print_script(s) == "(declare-var |odd name| Int)\n");
}

}
