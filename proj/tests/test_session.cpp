#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "svlib/dialogue.hpp"
#include "svlib/linter.hpp"
#include "svlib/printer.hpp"
#include "svlib/session.hpp"
#include "svlib/witness.hpp"

using namespace svlib;

namespace {

using K = Response::Kind;

std::vector<K> kinds(const std::vector<Response>& rs) {
  std::vector<K> out;
  for (const auto& r : rs) out.push_back(r.kind);
  return out;
}

SessionOptions witnesses_on() {
  SessionOptions o;
  o.produce_witnesses = true;
  return o;
}

}  // namespace

TEST_SUITE("session") {

TEST_CASE("print-success") {
  Session s;
  auto rs = s.execute_text("(set-option :print-success true) (declare-var g Int)");
  CHECK(kinds(rs) == std::vector<K>{K::Success, K::Success});
  CHECK(rs[1].render() == "success");
  rs = s.execute_text("(set-option :print-success false) (declare-var h Int)");
  CHECK(kinds(rs) == std::vector<K>{K::Silent, K::Silent});
  CHECK(rs[1].render().empty());
}

TEST_CASE("get-witness needs a verdict") {
  Session s(witnesses_on());
  CHECK(s.execute_text("(get-witness)").at(0).kind == K::Error);
}

TEST_CASE("annotations of unknown tags are recorded without effect") {
  Session s;
  auto rs = s.execute_text("(set-logic LIA) (annotate-tag ghost-tag :invariant true)");
  CHECK(kinds(rs) == std::vector<K>{K::Success, K::Success});
  CHECK(s.script().commands.size() == 2);
}

TEST_CASE("errors leave the state unchanged") {
  Session s;
  s.execute_text("(set-logic LIA) (declare-var g Int)");
  std::string before = print_script(s.script());
  auto rs = s.execute_text("(declare-var g Int) (assume true) (verify-call nothing ())");
  for (const auto& r : rs) CHECK(r.kind == K::Error);
  CHECK(print_script(s.script()) == before);
}

TEST_CASE("verify-call arity") {
  Session s;
  s.execute_text(std::string("(set-logic LIA)") + support::kAddProc);
  CHECK(s.execute_text("(verify-call add (1))").at(0).kind == K::Error);
  CHECK(s.execute_text("(verify-call sub (1 2))").at(0).kind == K::Error);
}

TEST_CASE("corpus verdicts") {
  for (const auto& id : corpus::list()) {
    CAPTURE(id);
    auto e = corpus::load(id);
    Session s;
    std::vector<std::string> got;
    for (const auto& c : support::validation_task(e).commands) {
      Response r = s.execute(c);
      CHECK(r.kind != K::Error);
      if (c.kind == CmdKind::VerifyCall) got.push_back(r.render());
    }
    CHECK(got == e.expected_verdicts);
  }
}

TEST_CASE("correctness witness restates the supplied annotations") {
  auto e = corpus::load("loop-add");
  Session s(witnesses_on());
  for (const auto& c : support::validation_task(e).commands) s.execute(c);
  REQUIRE(s.last_verdict());
  Response w = s.execute_text("(get-witness)").at(0);
  REQUIRE(w.kind == K::Witness);
  Witness got = parse_witness_text(w.text);
  Witness want = parse_witness_text(*e.witness);
  CHECK_FALSE(got.is_violation);
  CHECK(got.annotations == want.annotations);
  CHECK(got.metadata.at(0).keyword == ":producer");
  CHECK_FALSE(uses_reserved_symbols(w.text));
}

TEST_CASE("get-witness after an intervening command") {
  Session s(witnesses_on());
  for (const auto& c : support::parse_ok(corpus::load("loop-add-annotated").task).commands) s.execute(c);
  CHECK(s.execute_text("(get-info :name)").at(0).kind != K::Error);
  CHECK(s.execute_text("(get-witness)").at(0).kind == K::Error);
}

TEST_CASE("witness production can be disabled and the command line wins") {
  Session off;
  for (const auto& c : support::parse_ok(corpus::load("loop-add-annotated").task).commands) off.execute(c);
  CHECK(off.execute_text("(get-witness)").at(0).kind == K::Error);

  Session forced(witnesses_on());
  forced.execute_text("(set-option :produce-witnesses false)");
  CHECK(forced.produce_witnesses());
  for (const auto& c : support::parse_ok(corpus::load("loop-add-annotated").task).commands) forced.execute(c);
  CHECK(forced.execute_text("(get-witness)").at(0).kind == K::Witness);
}

TEST_CASE("violation witness echoes the trace") {
  auto e = corpus::load("loop-add-incorrect-ensures");
  Session s(witnesses_on());
  for (const auto& c : support::validation_task(e).commands) s.execute(c);
  Response w = s.execute_text("(get-witness)").at(0);
  REQUIRE(w.kind == K::Witness);
  Witness got = parse_witness_text(w.text);
  CHECK(got.is_violation);
  CHECK(got.traces == parse_witness_text(*e.witness).traces);
}

TEST_CASE("an invalid step is reported as such") {
  auto e = corpus::load("loop-add-incorrect-invariant");
  Witness w = parse_witness_text(*e.witness);
  w.traces[0].steps[0].values[0].value = Term::numeral("7");
  Script task = combine(support::parse_ok(e.task), w);
  Session s(witnesses_on());
  Response last;
  for (const auto& c : task.commands) last = s.execute(c);
  CHECK(last.kind == K::Incorrect);
  Witness got = parse_witness_text(s.execute_text("(get-witness)").at(0).text);
  REQUIRE(got.traces.size() == 1);
  CHECK(got.traces[0].violated.invalid_step);
  CHECK(got.traces[0].violated.step == w.traces[0].steps[0]);
}

TEST_CASE("a counterexample from the solver is exported as a trace") {
  Session s(witnesses_on());
  for (const auto& c : support::parse_ok(corpus::load("loop-add-incorrect-invariant").task).commands) s.execute(c);
  REQUIRE(s.last_verdict());
  CHECK(s.last_verdict()->verdict == K::Incorrect);
  Response w = s.execute_text("(get-witness)").at(0);
  REQUIRE(w.kind == K::Witness);
  Witness got = parse_witness_text(w.text);
  REQUIRE(got.traces.size() == 1);
  Script again = combine(support::parse_ok(corpus::load("loop-add-incorrect-invariant").task), got);
  Session check;
  Response last;
  for (const auto& c : again.commands) last = check.execute(c);
  CHECK(last.kind == K::Incorrect);
}

TEST_CASE("trace mode ignores everything but verify-call") {
  auto e = corpus::load("loop-add-incorrect-ensures");
  Script task = support::validation_task(e);
  Session s;
  std::size_t vc = support::last_verify(task);
  for (std::size_t i = 0; i < vc; ++i) s.execute(task.commands[i]);
  CHECK(s.trace_mode());
  std::string before = print_script(s.script());
  auto rs = s.execute_text("(declare-const z Int) (define-proc q () () () (sequence)) (annotate-tag proc-add :ensures false)");
  for (const auto& r : rs) CHECK(r.kind == K::Success);
  CHECK(print_script(s.script()) == before);
  CHECK(s.execute(task.commands[vc]).kind == K::Incorrect);
  CHECK(s.execute(task.commands[vc]).kind == K::Unknown);
}

TEST_CASE("traces for other procedures are dropped") {
  auto e = corpus::load("loop-add-incorrect-ensures");
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(*e.witness);
  w.traces[0].entry_proc = Symbol("other");
  Script combined = combine(task, w);
  Session s;
  Response last;
  for (const auto& c : combined.commands) last = s.execute(c);
  CHECK(last.kind == K::Unknown);
  CHECK_FALSE(last.diagnostics.empty());
}

}

TEST_SUITE("combine") {

TEST_CASE("witness commands go right before the verify-call") {
  auto e = corpus::load("loop-add");
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(*e.witness);
  Script c = combine(task, w);
  CHECK(c == support::parse_ok(corpus::load("loop-add-validation").task));
  CHECK(c.commands.size() == task.commands.size() + witness_commands(w).size());
  CHECK(c.commands.back().kind == CmdKind::VerifyCall);
}

TEST_CASE("an empty witness inserts only metadata") {
  Script task = support::parse_ok(corpus::load("loop-add").task);
  Witness w = parse_witness_text("((set-info :producer \"p\"))");
  Script c = combine(task, w);
  CHECK(c.commands.size() == task.commands.size() + 1);
  CHECK(c.commands[c.commands.size() - 2].kind == CmdKind::Smt);
}

TEST_CASE("choosing the verify-call") {
  Script task = support::parse_ok(corpus::load("loop-add-incremental").task);
  Witness w = parse_witness_text("((set-info :producer \"p\"))");
  Script first = combine(task, w, 0);
  std::size_t i = 0;
  while (first.commands[i].kind != CmdKind::VerifyCall) ++i;
  CHECK(first.commands[i - 1].kind == CmdKind::Smt);
  CHECK_THROWS_AS(combine(task, w, 2), std::invalid_argument);
  CHECK_THROWS_AS(combine(support::parse_ok("(set-logic LIA)"), w), std::invalid_argument);
}

TEST_CASE("combining keeps scripts well-formed") {
  for (const auto& id : corpus::list()) {
    auto e = corpus::load(id);
    if (!e.witness) continue;
    CAPTURE(id);
    Script c = support::validation_task(e);
    CHECK_FALSE(has_errors(check_full(c)));
  }
}

}

TEST_SUITE("dialogue") {

TEST_CASE("splitter") {
  CommandSplitter s;
  auto a = s.feed("(a (b\n");
  CHECK(a.empty());
  auto b = s.feed(" c)) (d \"x)\" |y)|) ; (e\n");
  REQUIRE(b.size() == 2);
  CHECK(b[0] == "(a (b\n c))");
  CHECK(b[1] == "(d \"x)\" |y)|)");
  CHECK_FALSE(s.finish());
  s.feed("(open");
  CHECK(s.finish() == std::optional<std::string>("(open"));
}

TEST_CASE("golden transcript") {
  std::istringstream in(support::slurp(support::fixtures() / "dialogue" / "session.in"));
  std::ostringstream out;
  Session s;
  DialogueChannels ch;
  ch.out = &out;
  bool errors = run_dialogue(s, in, ch);
  CHECK(errors);
  CHECK(out.str() == support::slurp(support::fixtures() / "dialogue" / "session.expected"));
}

TEST_CASE("witnesses go to their own channel") {
  std::istringstream in(corpus::load("loop-add-annotated").task + "(get-witness)");
  std::ostringstream out, wit;
  SessionOptions o;
  o.produce_witnesses = true;
  Session s(o);
  DialogueChannels ch;
  ch.out = &out;
  ch.witness = &wit;
  CHECK_FALSE(run_dialogue(s, in, ch));
  CHECK(out.str().find("correct\n") != std::string::npos);
  CHECK(out.str().find("set-info") == std::string::npos);
  CHECK(wit.str().find("(set-info :producer \"svlib\")") != std::string::npos);
}

}
