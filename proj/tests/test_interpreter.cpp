#include <doctest.h>

#include <chrono>

#include "support.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/symbols.hpp"

using namespace svlib;

namespace {

Value eval(const std::string& text, const Env& locals = {}, const std::map<std::string, Env>* snaps = nullptr) {
  SymbolTable table;
  std::set<std::string> names;
  for (const auto& [k, v] : locals) names.insert(k);
  EvalContext ctx;
  ctx.table = &table;
  ctx.locals = &locals;
  ctx.local_names = &names;
  ctx.snapshots = snaps;
  return eval_term(parse_term_text(text), ctx);
}

Script add_script() { return support::parse_ok(std::string("(set-logic LIA)") + support::kAddProc); }

TraceVerdict replay(const std::string& id, const RunOptions& ro = {}) {
  auto e = corpus::load(id);
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(*e.witness);
  return run_trace(task, support::last_verify(task), w.traces.at(0), ro);
}

}  // namespace

TEST_SUITE("interpreter") {

TEST_CASE("term evaluation") {
  CHECK(eval("(+ 2 3)") == Value::integer(5));
  CHECK(eval("(ite (> y 0) y 0)", {{"y", Value::integer(-1)}}) == Value::integer(0));
  CHECK(eval("(div (- 7) 2)") == Value::integer(-4));
  CHECK(eval("(mod (- 7) 2)") == Value::integer(1));
  CHECK(eval("(and true (not false) (=> false false))") == Value::boolean(true));
  CHECK(eval("(let ((z 4)) (* z z))") == Value::integer(16));
  CHECK(eval("(distinct 1 2 1)") == Value::boolean(false));
  CHECK(eval("(select (store ((as const (Array Int Int)) 0) 1 9) 1)") == Value::integer(9));
}

TEST_CASE("at reads the snapshot taken at the tag") {
  std::map<std::string, Env> snaps{{"loop", {{"y", Value::integer(4)}}}};
  Term t = parse_term(read_all("(at y loop)")[0]);
  SymbolTable table;
  Env locals{{"y", Value::integer(1)}};
  std::set<std::string> names{"y"};
  EvalContext ctx;
  ctx.table = &table;
  ctx.locals = &locals;
  ctx.local_names = &names;
  ctx.snapshots = &snaps;
  CHECK(eval_term(t, ctx) == Value::integer(4));
}

TEST_CASE("undefined variables and division by zero") {
  CHECK_THROWS_AS(eval("(+ q 1)"), EvalError);
  CHECK_THROWS_AS(eval("(div 1 0)"), EvalError);
}

TEST_CASE("add computes the sum") {
  Script s = add_script();
  auto run = [&](long a, long b) {
    ConcreteResult r = run_concrete(s, "add", {Value::integer(a), Value::integer(b)});
    REQUIRE(r.status == ConcreteStatus::Returned);
    return r.locals.at("x");
  };
  CHECK(run(2, 3) == Value::integer(5));
  CHECK(run(7, 0) == Value::integer(7));
  CHECK(run(0, 0) == Value::integer(0));
}

TEST_CASE("concrete runs stop at nondeterminism and failed assumptions") {
  Script s = support::parse_ok(
      "(define-proc f ((a Int)) ((r Int)) () (sequence (assume (> a 0)) (havoc r)))"
      "(define-proc g () ((r Int)) () (while true (assign (r 1))))");
  CHECK(run_concrete(s, "f", {Value::integer(0)}).status == ConcreteStatus::AssumeFailed);
  CHECK(run_concrete(s, "f", {Value::integer(1)}).status == ConcreteStatus::NondetReached);
  RunOptions ro;
  ro.fuel = 1000;
  CHECK(run_concrete(s, "g", {}, ro).status == ConcreteStatus::FuelExhausted);
}

TEST_CASE("an extra iteration violates the postcondition") {
  RunOptions ro;
  ro.fuel = 1'000'000;
  auto t0 = std::chrono::steady_clock::now();
  TraceVerdict v = replay("loop-add-incorrect-ensures", ro);
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(v.kind == VerdictKind::ViolationConfirmed);
  CHECK(v.tag == "proc-add");
  REQUIRE(v.attrs.size() == 1);
  CHECK(v.attrs[0].kind == AttrKind::Ensures);
  CHECK(v.locals.at("x") == Value::integer(1));
  CHECK(ms < 100.0);
}

TEST_CASE("a leap within the invariant reaches the violation") {
  TraceVerdict v = replay("loop-add-incorrect-invariant");
  CHECK(v.kind == VerdictKind::ViolationConfirmed);
  CHECK(v.tag == "proc-add");
  CHECK(v.locals.at("x") == Value::integer(3));
  CHECK(v.locals.at("y") == Value::integer(-1));
}

TEST_CASE("a leap outside the invariant is an invalid step") {
  auto e = corpus::load("loop-add-incorrect-invariant");
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(*e.witness);
  Trace t = w.traces.at(0);
  t.steps.at(0).values.at(0).value = Term::numeral("5");
  TraceVerdict v = run_trace(task, support::last_verify(task), t);
  CHECK(v.kind == VerdictKind::StepInvalid);
  CHECK(v.step_index == 0);
}

TEST_CASE("the non-terminating loop yields a lasso stem") {
  TraceVerdict v = replay("loop-add-incorrect-liveness");
  CHECK(v.kind == VerdictKind::ViolationConfirmed);
  CHECK(v.lasso);
  CHECK(v.tag == "while-loop");
}

TEST_CASE("out-of-range choice") {
  Script s = support::parse_ok(
      "(set-logic LIA)(define-proc pick ((a Int)) ((r Int)) ()"
      " (! (choice (assign (r a)) (assign (r (+ a 1)))) :tag pick-body))"
      "(annotate-tag pick-body :ensures (= r a))(verify-call pick (0))");
  auto trace = [&](const char* steps) {
    Witness w = parse_witness_text(std::string("((select-trace (model) (init-global-vars) (entry-proc pick) (steps ") +
                                   steps + ") (incorrect-annotation pick-body :ensures (= r a))))");
    return run_trace(s, support::last_verify(s), w.traces.at(0));
  };
  TraceVerdict bad = trace("(choice 2)");
  CHECK(bad.kind == VerdictKind::StepInvalid);
  REQUIRE(bad.step);
  CHECK(bad.step->choice == 2);
  CHECK(trace("(choice 1)").kind == VerdictKind::ViolationConfirmed);
  CHECK(trace("(choice 0)").kind == VerdictKind::ViolationNotReached);
}

TEST_CASE("a model that contradicts an assertion is rejected") {
  auto e = corpus::load("loop-add-incorrect-ensures");
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(
      "((select-trace (model (define-fun x1 () Int 0) (define-fun y1 () Int (- 3))) (init-global-vars)"
      " (entry-proc add) (steps) (incorrect-annotation proc-add :ensures (= x (+ x0 y0)))))");
  TraceVerdict v = run_trace(task, support::last_verify(task), w.traces.at(0));
  CHECK(v.kind != VerdictKind::ViolationConfirmed);
}

}
