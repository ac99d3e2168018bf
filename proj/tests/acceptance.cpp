// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

#include "properties.hpp"
#include "support.hpp"
#include "svlib/dialogue.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/linter.hpp"
#include "svlib/printer.hpp"
#include "svlib/smt_client.hpp"
#include "svlib/vcgen.hpp"
#include "svlib/witness.hpp"

using namespace svlib;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

SolverConfig solver() {
  SolverConfig c = SolverConfig::from_environment();
  c.timeout = 30;
  return c;
}

std::vector<std::string> run_session(const Script& s, Session& session) {
  std::vector<std::string> verdicts;
  for (const auto& c : s.commands) {
    Response r = session.execute(c);
    if (r.kind == Response::Kind::Error) verdicts.push_back("error: " + r.text);
    else if (c.kind == CmdKind::VerifyCall) verdicts.push_back(r.render());
  }
  return verdicts;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

Result verdicts() {
  Result r;
  auto t0 = Clock::now();
  const char* ids[] = {"loop-add", "loop-add-incremental", "loop-add-incorrect-ensures", "loop-add-incorrect-liveness",
                       "loop-add-incorrect-invariant", "loop-add-validation"};
  for (const char* id : ids) {
    auto e = corpus::load(id);
    SessionOptions o;
    o.solver = solver();
    Session s(o);
    auto got = run_session(support::validation_task(e), s);
    if (got != e.expected_verdicts)
      r.fail(std::string(id) + " gave " + join(got) + ", expected " + join(e.expected_verdicts));
  }
  double t = seconds_since(t0);
  if (t >= 60) r.fail("took " + std::to_string(t) + " s");
  if (r.ok) r.detail = "6 entries in " + std::to_string(t) + " s";
  return r;
}

Result discharge() {
  Result r;
  Script fig3 = support::validation_task(corpus::load("loop-add"));
  VcResult vc = generate_obligations(fig3, support::last_verify(fig3));
  if (vc.status != VcStatus::Ok) {
    r.fail("loop-add obligations not generated: " + vc.reason);
    return r;
  }
  if (vc.obligations.size() < 4) r.fail("only " + std::to_string(vc.obligations.size()) + " obligations");
  std::set<ObligationKind> kinds;
  auto res = discharge_all(vc.obligations, solver(), 4);
  for (std::size_t i = 0; i < res.size(); ++i) {
    kinds.insert(vc.obligations[i].kind);
    if (res[i].verdict != SolverVerdict::Unsat)
      r.fail(vc.obligations[i].name + " is " + solver_verdict_name(res[i].verdict));
  }
  for (auto k : {ObligationKind::InvariantInit, ObligationKind::InvariantInductive, ObligationKind::Ensures,
                 ObligationKind::Decreases, ObligationKind::RequiresEntry})
    if (!kinds.count(k)) r.fail(std::string("no ") + obligation_kind_name(k) + " obligation");
  std::size_t fig3_count = vc.obligations.size();

  Script fig12 = support::parse_ok(corpus::load("loop-add-incorrect-invariant").task);
  VcResult bad = generate_obligations(fig12, support::last_verify(fig12));
  if (bad.status != VcStatus::Ok) {
    r.fail("insufficient-invariant obligations not generated: " + bad.reason);
    return r;
  }
  auto bres = discharge_all(bad.obligations, solver(), 4);
  int confirmed = 0;
  for (std::size_t i = 0; i < bres.size(); ++i) {
    const Obligation& ob = bad.obligations[i];
    if (bres[i].verdict != SolverVerdict::Sat) continue;
    if (ob.kind != ObligationKind::Ensures) {
      r.fail(ob.name + " is unexpectedly sat");
      continue;
    }
    auto trace = trace_from_model(ob, model_commands(bres[i]));
    if (!trace || trace->steps.size() != 1 || trace->steps[0].kind != StepKind::Leap) {
      r.fail("model of " + ob.name + " does not describe a leap over the loop");
      continue;
    }
    SymbolTable table(fig12);
    Model m = Model::from(trace->model);
    Env env;
    for (const auto& vv : trace->steps[0].values) env[vv.var.name] = eval_term(vv.value, {&table, &m});
    env["x0"] = eval_term(Term::var("x1"), {&table, &m});
    env["y0"] = eval_term(Term::var("y1"), {&table, &m});
    std::set<std::string> names{"x", "y", "x0", "y0"};
    EvalContext ctx{&table, &m, &env, &names};
    bool inv = eval_term(parse_term_text("(= (+ x y) (+ x0 y0))"), ctx) == Value::boolean(true);
    bool ens = eval_term(parse_term_text("(= x (+ x0 y0))"), ctx) == Value::boolean(true);
    if (inv && !ens) ++confirmed;
    else r.fail("model of " + ob.name + " does not satisfy the invariant while violating :ensures");
  }
  if (confirmed == 0) r.fail("no satisfiable :ensures obligation");
  if (r.ok) r.detail = std::to_string(fig3_count) + " unsat obligations; " + std::to_string(confirmed) + " sat :ensures";
  return r;
}

Result replay() {
  Result r;
  auto e = corpus::load("loop-add-incorrect-ensures");
  Script task = support::parse_ok(e.task);
  Trace t = parse_witness_text(*e.witness).traces.at(0);
  RunOptions ro;
  ro.fuel = 1'000'000;
  auto t0 = Clock::now();
  TraceVerdict v = run_trace(task, support::last_verify(task), t, ro);
  double ms = seconds_since(t0) * 1000;
  if (v.kind != VerdictKind::ViolationConfirmed || v.tag != "proc-add" || v.attrs.size() != 1 ||
      v.attrs[0].kind != AttrKind::Ensures)
    r.fail(std::string("replay gave ") + verdict_name(v.kind) + " " + v.reason);
  if (ms >= 100) r.fail("replay took " + std::to_string(ms) + " ms");

  Trace mutated = t;
  Step bad;
  bad.kind = StepKind::Choice;
  bad.choice = 5;
  mutated.steps.push_back(bad);
  TraceVerdict mv = run_trace(task, support::last_verify(task), mutated, ro);
  if (mv.kind != VerdictKind::StepInvalid) r.fail(std::string("mutated trace gave ") + verdict_name(mv.kind));

  Witness w;
  w.traces.push_back(mutated);
  SessionOptions o;
  o.produce_witnesses = true;
  o.solver = solver();
  Session s(o);
  auto got = run_session(combine(task, w), s);
  if (got != std::vector<std::string>{"incorrect"}) r.fail("session answered " + join(got) + " for the mutated trace");
  Response wr = s.execute_text("(get-witness)").at(0);
  if (wr.kind != Response::Kind::Witness) {
    r.fail("no witness for the mutated trace: " + wr.render());
  } else {
    Witness back = parse_witness_text(wr.text);
    if (back.traces.size() != 1 || !back.traces[0].violated.invalid_step || back.traces[0].violated.step != bad)
      r.fail("witness does not name the invalid step");
  }
  if (r.ok) r.detail = "replay in " + std::to_string(ms) + " ms";
  return r;
}

Result round_trip() {
  Result r;
  int checked = 0;
  for (const auto& id : corpus::list()) {
    auto e = corpus::load(id);
    bool all_correct = !e.expected_verdicts.empty();
    for (const auto& v : e.expected_verdicts) all_correct = all_correct && v == "correct";
    if (!all_correct) continue;
    Script task = support::validation_task(e);
    SessionOptions o;
    o.produce_witnesses = true;
    o.solver = solver();
    Session s(o);
    std::size_t which = 0;
    for (const auto& c : task.commands) {
      Response resp = s.execute(c);
      if (c.kind != CmdKind::VerifyCall) continue;
      Response wr = s.execute_text("(get-witness)").at(0);
      if (resp.kind != Response::Kind::Correct || wr.kind != Response::Kind::Witness) {
        r.fail(id + ": no correct verdict with witness");
        break;
      }
      Script again = combine(task, parse_witness_text(wr.text), which++);
      if (has_errors(check_full(again))) r.fail(id + ": combined script is ill-formed");
      Session fresh(SessionOptions{std::nullopt, solver()});
      auto got = run_session(again, fresh);
      for (const auto& g : got)
        if (g != "correct") r.fail(id + ": re-validation gave " + join(got));
      ++checked;
    }
  }
  auto e = corpus::load("loop-add");
  Script task = support::parse_ok(e.task);
  Witness w = parse_witness_text(*e.witness);
  Script c = combine(task, w);
  std::size_t n = task.commands.size() - 1;
  auto wc = witness_commands(w);
  bool ordered = c.commands.size() == task.commands.size() + wc.size();
  for (std::size_t i = 0; ordered && i < n; ++i) ordered = c.commands[i] == task.commands[i];
  for (std::size_t i = 0; ordered && i < wc.size(); ++i) ordered = c.commands[n + i] == wc[i];
  ordered = ordered && c.commands.back() == task.commands.back() && c.commands.back().kind == CmdKind::VerifyCall;
  if (!ordered) r.fail("combined loop-add does not place the witness right before the verify-call");
  if (c != support::parse_ok(corpus::load("loop-add-validation").task))
    r.fail("combined loop-add differs from the validation task");
  if (r.ok) r.detail = std::to_string(checked) + " verify-calls re-validated";
  return r;
}

Result properties() {
  Result r;
  auto t0 = Clock::now();
  int cases = 0;
  for (const auto& o : props::all(250)) {
    cases += o.cases;
    if (!o.ok()) r.fail(o.name + ": " + std::to_string(o.failures) + " failures, first " + o.first_failure);
    bool brute = o.name.find("add(") == 0;
    if (o.cases < (brute ? 81 : 200)) r.fail(o.name + ": only " + std::to_string(o.cases) + " cases");
  }
  double t = seconds_since(t0);
  if (t >= 10) r.fail("took " + std::to_string(t) + " s");
  if (r.ok) r.detail = std::to_string(cases) + " cases in " + std::to_string(t) + " s";
  return r;
}

Result catalog() {
  Result r;
  int n = 0;
  for (const auto& rule : rule_catalog()) {
    if (rule.item == 0) continue;
    auto path = support::fixtures() / "lint" / (std::string(rule.id) + ".svlib");
    if (!std::filesystem::exists(path)) {
      r.fail(std::string("no fixture for ") + rule.id);
      continue;
    }
    ParseResult p = parse_script_text(support::slurp(path));
    std::vector<Diagnostic> ds = rule.level == 'F' ? check_full(p.script) : lint(p);
    std::set<std::string> errors, warnings;
    for (const auto& d : ds) (d.severity == Severity::Error ? errors : warnings).insert(d.rule_id);
    bool ok = rule.severity == Severity::Error ? errors == std::set<std::string>{rule.id}
                                               : errors.empty() && warnings == std::set<std::string>{rule.id};
    if (!ok) r.fail(std::string(rule.id) + " fixture triggers other diagnostics");
    ++n;
  }
  if (n != 26) r.fail("expected 26 catalog rules, found " + std::to_string(n));
  if (r.ok) r.detail = std::to_string(n) + " fixtures";
  return r;
}

Result dialogue() {
  Result r;
  std::istringstream in(support::slurp(support::fixtures() / "dialogue" / "session.in"));
  std::ostringstream out;
  SessionOptions o;
  o.solver = solver();
  Session s(o);
  DialogueChannels ch;
  ch.out = &out;
  run_dialogue(s, in, ch);
  std::string want = support::slurp(support::fixtures() / "dialogue" / "session.expected");
  if (out.str() != want) r.fail("transcript differs from the golden file");
  if (r.ok) r.detail = "transcript matches";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Result (*run)();
  };
  const Criterion criteria[] = {
      {"end-to-end verdicts", verdicts}, {"obligation discharge", discharge}, {"trace replay", replay},
      {"combine round trip", round_trip}, {"property suites", properties},  {"well-formedness catalog", catalog},
      {"dialogue conformance", dialogue},
  };
  int failed = 0;
  int k = 1;
  for (const auto& c : criteria) {
    Result res;
    try {
      res = c.run();
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << k++ << " (" << c.name << "): " << (res.ok ? "PASS" : "FAIL") << " - " << res.detail
              << std::endl;
    if (!res.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
