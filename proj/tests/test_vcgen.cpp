#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/smt_client.hpp"
#include "svlib/vcgen.hpp"
#include "svlib/witness.hpp"

using namespace svlib;

namespace {

SolverConfig solver() { return SolverConfig::from_environment(); }

VcResult vcs(const Script& s) { return generate_obligations(s, support::last_verify(s)); }

std::vector<SolverVerdict> verdicts(const std::vector<Obligation>& obs) {
  std::vector<SolverVerdict> out;
  for (const auto& r : discharge_all(obs, solver(), 4)) out.push_back(r.verdict);
  return out;
}

bool has_kind(const VcResult& r, ObligationKind k) {
  return std::any_of(r.obligations.begin(), r.obligations.end(), [&](const Obligation& o) { return o.kind == k; });
}

}  // namespace

TEST_SUITE("vcgen") {

TEST_CASE("the correct loop-add discharges completely") {
  Script s = support::validation_task(corpus::load("loop-add"));
  VcResult r = vcs(s);
  REQUIRE(r.status == VcStatus::Ok);
  CHECK(r.obligations.size() >= 4);
  CHECK(has_kind(r, ObligationKind::InvariantInit));
  CHECK(has_kind(r, ObligationKind::InvariantInductive));
  CHECK(has_kind(r, ObligationKind::Ensures));
  CHECK(has_kind(r, ObligationKind::Decreases));
  CHECK(has_kind(r, ObligationKind::RequiresEntry));
  for (auto v : verdicts(r.obligations)) CHECK(v == SolverVerdict::Unsat);
}

TEST_CASE("emitted obligations are self-contained SMT-LIB") {
  Script s = support::validation_task(corpus::load("loop-add"));
  VcResult r = vcs(s);
  REQUIRE_FALSE(r.obligations.empty());
  for (const auto& ob : r.obligations) {
    std::string text = emit_smt(ob);
    CHECK(text.find("(set-logic") != std::string::npos);
    CHECK(text.rfind("(check-sat)") != std::string::npos);
    CHECK_NOTHROW(read_all(text));
  }
  std::vector<std::string> names;
  for (const auto& ob : r.obligations) names.push_back(ob.name);
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
}

TEST_CASE("the ranking obligation fails for a non-decreasing measure") {
  std::string text = corpus::load("loop-add-annotated").task;
  auto pos = text.find(":decreases y");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, ":decreases x");
  Script s = support::parse_ok(text);
  VcResult r = vcs(s);
  REQUIRE(r.status == VcStatus::Ok);
  auto vs = verdicts(r.obligations);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    CAPTURE(r.obligations[i].name);
    if (r.obligations[i].kind == ObligationKind::Decreases) CHECK(vs[i] == SolverVerdict::Sat);
    else CHECK(vs[i] == SolverVerdict::Unsat);
  }
}

TEST_CASE("an insufficient invariant leaves the postcondition open") {
  auto e = corpus::load("loop-add-incorrect-invariant");
  Script s = support::parse_ok(e.task);
  VcResult r = vcs(s);
  REQUIRE(r.status == VcStatus::Ok);
  auto results = discharge_all(r.obligations, solver(), 4);
  int sat = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Obligation& ob = r.obligations[i];
    CAPTURE(ob.name);
    if (ob.kind != ObligationKind::Ensures) {
      CHECK(results[i].verdict == SolverVerdict::Unsat);
      continue;
    }
    REQUIRE(results[i].verdict == SolverVerdict::Sat);
    ++sat;
    std::string why;
    auto trace = trace_from_model(ob, model_commands(results[i]), &why);
    REQUIRE_MESSAGE(trace, why);
    REQUIRE(trace->steps.size() == 1);
    const Step& leap = trace->steps[0];
    CHECK(leap.kind == StepKind::Leap);
    CHECK(leap.name.name == "while-loop");
    Model m = Model::from(trace->model);
    SymbolTable table(s);
    Env frame;
    for (const auto& vv : leap.values) frame[vv.var.name] = eval_term(vv.value, {&table, &m});
    frame["x0"] = eval_term(Term::var("x1"), {&table, &m});
    frame["y0"] = eval_term(Term::var("y1"), {&table, &m});
    std::set<std::string> names{"x", "y", "x0", "y0"};
    EvalContext ctx{&table, &m, &frame, &names};
    CHECK(eval_term(parse_term_text("(= (+ x y) (+ x0 y0))"), ctx) == Value::boolean(true));
    CHECK(eval_term(parse_term_text("(= x (+ x0 y0))"), ctx) == Value::boolean(false));
    CHECK(run_trace(s, support::last_verify(s), *trace).kind == VerdictKind::ViolationConfirmed);
  }
  CHECK(sat >= 1);
}

TEST_CASE("assume false proves anything") {
  Script s = support::parse_ok(
      "(set-logic LIA)(define-proc f ((a Int)) ((r Int)) () (! (assume false) :tag f-body))"
      "(annotate-tag f-body :ensures false)(verify-call f (0))");
  VcResult r = vcs(s);
  REQUIRE(r.status == VcStatus::Ok);
  CHECK_FALSE(r.obligations.empty());
  for (auto v : verdicts(r.obligations)) CHECK(v == SolverVerdict::Unsat);
}

TEST_CASE("missing invariants and unsupported properties") {
  Script plain = support::parse_ok(corpus::load("loop-add-unannotated").task);
  CHECK(vcs(plain).status == VcStatus::MissingAnnotation);
  std::string text = corpus::load("loop-add-annotated").task;
  text.replace(text.find(":not-recurring"), 14, ":recurring");
  CHECK(vcs(support::parse_ok(text)).status == VcStatus::Unsupported);
}

TEST_CASE("calls use the callee contract") {
  Script s = support::parse_ok(corpus::load("loop-add-incremental").task);
  VcResult r = vcs(s);
  REQUIRE(r.status == VcStatus::Ok);
  CHECK(has_kind(r, ObligationKind::RequiresCall));
  for (auto v : verdicts(r.obligations)) CHECK(v == SolverVerdict::Unsat);
}

TEST_CASE("lasso obligations") {
  auto e = corpus::load("loop-add-incorrect-liveness");
  Script s = support::parse_ok(e.task);
  Trace t = parse_witness_text(*e.witness).traces.at(0);
  VcResult r = generate_lasso_obligations(s, support::last_verify(s), t);
  REQUIRE(r.status == VcStatus::Ok);
  CHECK(has_kind(r, ObligationKind::LassoInductive));
  CHECK(has_kind(r, ObligationKind::LassoNonExit));
  for (auto v : verdicts(r.obligations)) CHECK(v == SolverVerdict::Unsat);

  SUBCASE("a trivial head fact does not keep a terminating loop alive") {
    Script ok = support::parse_ok(corpus::load("loop-add").task);
    Trace weak = t;
    weak.using_annotations = {{Symbol("while-loop"), {Attribute::with_term(AttrKind::Invariant, Term::boolean(true))}}};
    VcResult w = generate_lasso_obligations(ok, support::last_verify(ok), weak);
    REQUIRE(w.status == VcStatus::Ok);
    auto vs = verdicts(w.obligations);
    bool rejected = false;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (w.obligations[i].kind == ObligationKind::LassoNonExit && vs[i] == SolverVerdict::Sat) rejected = true;
    CHECK(rejected);

    Trace none = t;
    none.using_annotations.clear();
    VcResult n = generate_lasso_obligations(ok, support::last_verify(ok), none);
    REQUIRE(n.status == VcStatus::Ok);
    auto ns = verdicts(n.obligations);
    REQUIRE(ns.size() == vs.size());
    CHECK(ns == vs);
  }
}

}
