#include "svlib/session.hpp"

#include <stdexcept>

#include "svlib/interpreter.hpp"
#include "svlib/linter.hpp"
#include "svlib/parser.hpp"
#include "svlib/printer.hpp"
#include "svlib/vcgen.hpp"

namespace svlib {

std::string Response::render() const {
  switch (kind) {
    case Kind::Success: return "success";
    case Kind::Silent: return "";
    case Kind::Correct: return "correct";
    case Kind::Incorrect: return "incorrect";
    case Kind::Unknown: return "unknown";
    case Kind::Unsupported: return "unsupported";
    case Kind::Error: return "(error " + write(SExpr::string_literal(text)) + ")";
    case Kind::Witness: return text;
  }
  return "";
}

Response Response::error(std::string msg) {
  Response r;
  r.kind = Kind::Error;
  r.text = std::move(msg);
  return r;
}

Session::Session(SessionOptions options) : opt_(std::move(options)) {}

std::optional<SExpr> Session::option(const std::string& keyword) const {
  auto it = options_.find(keyword);
  if (it == options_.end()) return std::nullopt;
  return it->second;
}

bool Session::produce_witnesses() const {
  if (opt_.produce_witnesses) return *opt_.produce_witnesses;
  auto v = option(":produce-witnesses");
  return v && v->is_symbol("true");
}

Response Session::success() const {
  Response r;
  auto v = option(":print-success");
  if (v && v->is_symbol("false")) r.kind = Response::Kind::Silent;
  return r;
}

WitnessMeta Session::meta() const {
  WitnessMeta m;
  m.input_files = opt_.input_files;
  return m;
}

std::vector<Response> Session::execute_text(std::string_view text) {
  std::vector<Response> out;
  std::vector<SExpr> exprs;
  try {
    exprs = read_all(text);
  } catch (const LexError& e) {
    out.push_back(Response::error(e.what()));
    return out;
  }
  for (const auto& e : exprs) {
    try {
      out.push_back(execute(parse_command(e)));
    } catch (const ParseException& ex) {
      last_.reset();
      out.push_back(Response::error(ex.error().message));
    }
  }
  return out;
}

Response Session::execute(const Command& cmd) {
  if (cmd.kind == CmdKind::GetWitness) return get_witness();
  last_.reset();
  if (trace_mode_ && cmd.kind != CmdKind::VerifyCall && cmd.kind != CmdKind::SelectTrace) {
    Response r = success();
    r.diagnostics.push_back("command ignored after select-trace");
    return r;
  }
  switch (cmd.kind) {
    case CmdKind::ToolSpecific: {
      Response r;
      r.kind = Response::Kind::Unsupported;
      return r;
    }
    case CmdKind::VerifyCall:
      return verify(cmd);
    case CmdKind::SelectTrace: {
      Response r = append(cmd);
      if (r.kind == Response::Kind::Error) return r;
      pending_.push_back(*cmd.trace);
      trace_mode_ = true;
      return r;
    }
    case CmdKind::Smt:
      return smt(cmd);
    default:
      return append(cmd);
  }
}

Response Session::append(const Command& cmd) {
  Script candidate = script_;
  candidate.commands.push_back(cmd);
  auto ds = check_structural(candidate);
  if (!has_errors(ds)) {
    auto full = check_full(candidate);
    ds.insert(ds.end(), full.begin(), full.end());
  }
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return Response::error(d.rule_id + ": " + d.message);
  script_ = std::move(candidate);
  return success();
}

Response Session::smt(const Command& cmd) {
  const SmtCommand& c = cmd.smt;
  switch (c.kind) {
    case SmtKind::SetOption: {
      Response r = append(cmd);
      if (r.kind == Response::Kind::Error) return r;
      if (c.value) options_[c.keyword] = *c.value;
      return success();
    }
    case SmtKind::GetOption: {
      auto v = option(c.keyword);
      Response r;
      r.kind = Response::Kind::Witness;
      if (c.keyword == ":produce-witnesses") r.text = produce_witnesses() ? "true" : "false";
      else if (c.keyword == ":print-success") r.text = success().kind == Response::Kind::Silent ? "false" : "true";
      else if (v) r.text = write(*v);
      else r.kind = Response::Kind::Unsupported;
      return r;
    }
    case SmtKind::GetInfo: {
      Response r;
      r.kind = Response::Kind::Witness;
      if (c.keyword == ":name") r.text = "(:name \"svlib\")";
      else if (c.keyword == ":version") r.text = "(:version \"1.0\")";
      else r.kind = Response::Kind::Unsupported;
      return r;
    }
    case SmtKind::GetAssertions: {
      Response r;
      r.kind = Response::Kind::Witness;
      std::string out = "(";
      for (const auto& x : script_.commands)
        if (x.kind == CmdKind::Smt && x.smt.kind == SmtKind::Assert) out += (out.size() > 1 ? " " : "") + term_text(x.smt.term);
      r.text = out + ")";
      return r;
    }
    default:
      return append(cmd);
  }
}

Response Session::verify(const Command& cmd) {
  const Procedure* proc = nullptr;
  for (const auto& c : script_.commands)
    if (c.kind == CmdKind::DefineProc || c.kind == CmdKind::DefineProcsRec)
      for (const auto& p : c.procs)
        if (p.name.name == cmd.name.name) proc = &p;
  if (!proc) return Response::error("verify-call of undefined procedure " + cmd.name.name);
  if (proc->inputs.size() != cmd.args.size())
    return Response::error("verify-call of " + cmd.name.name + " expects " + std::to_string(proc->inputs.size()) +
                           " arguments");
  Response r = append(cmd);
  if (r.kind == Response::Kind::Error) return r;
  std::size_t index = script_.commands.size() - 1;

  std::vector<std::string> diags;
  std::optional<Trace> trace;
  std::vector<Trace> keep;
  for (auto& t : pending_) {
    if (!trace && t.entry_proc.name == cmd.name.name) trace = std::move(t);
    else keep.push_back(std::move(t));
  }
  for (const auto& t : keep)
    diags.push_back("trace for procedure " + t.entry_proc.name + " does not apply to this verify-call");
  pending_.clear();
  Response out = trace ? replay(index, *trace) : prove(index);
  out.diagnostics.insert(out.diagnostics.begin(), diags.begin(), diags.end());
  return out;
}

Response Session::conclude(VerdictRecord rec, std::vector<std::string> diagnostics) {
  Response r;
  r.kind = rec.verdict;
  r.diagnostics = std::move(diagnostics);
  last_ = std::move(rec);
  return r;
}

Response Session::replay(std::size_t index, const Trace& trace) {
  RunOptions ro;
  ro.fuel = opt_.fuel;
  TraceVerdict v = run_trace(script_, index, trace, ro);
  std::vector<std::string> diags = v.warnings;
  VerdictRecord rec;
  switch (v.kind) {
    case VerdictKind::ViolationConfirmed:
      if (v.lasso) {
        VcResult vc = generate_lasso_obligations(script_, index, trace);
        if (vc.status != VcStatus::Ok) {
          diags.push_back("lasso not checked: " + vc.reason);
          rec.verdict = vc.status == VcStatus::Unsupported ? Response::Kind::Unsupported : Response::Kind::Unknown;
          return conclude(rec, diags);
        }
        auto results = discharge_all(vc.obligations, opt_.solver, opt_.parallelism);
        for (std::size_t i = 0; i < results.size(); ++i) {
          if (results[i].verdict == SolverVerdict::Unsat) continue;
          diags.push_back("lasso obligation " + vc.obligations[i].name + ": " +
                          solver_verdict_name(results[i].verdict) +
                          (results[i].error.empty() ? "" : " (" + results[i].error + ")"));
          rec.verdict = Response::Kind::Unknown;
          return conclude(rec, diags);
        }
      }
      rec.verdict = Response::Kind::Incorrect;
      rec.witness = violation_witness(trace, meta());
      return conclude(rec, diags);
    case VerdictKind::StepInvalid:
      diags.push_back("invalid step: " + v.reason);
      rec.verdict = Response::Kind::Incorrect;
      if (v.step) rec.witness = invalid_step_witness(trace, *v.step, meta());
      else rec.export_error = "cannot export witness: " + v.reason;
      return conclude(rec, diags);
    case VerdictKind::FuelExhausted:
      diags.push_back(v.reason);
      rec.verdict = Response::Kind::Unknown;
      return conclude(rec, diags);
    case VerdictKind::ViolationNotReached:
      diags.push_back("violation not reached: " + v.reason);
      rec.verdict = Response::Kind::Unknown;
      return conclude(rec, diags);
    case VerdictKind::Unsupported:
      diags.push_back(v.reason);
      rec.verdict = Response::Kind::Unsupported;
      return conclude(rec, diags);
  }
  return conclude(rec, diags);
}

Response Session::prove(std::size_t index) {
  std::vector<std::string> diags;
  VerdictRecord rec;
  VcResult vc = generate_obligations(script_, index);
  if (vc.status == VcStatus::MissingAnnotation) {
    diags.push_back("not enough annotations: " + vc.reason);
    rec.verdict = Response::Kind::Unknown;
    return conclude(rec, diags);
  }
  if (vc.status == VcStatus::Unsupported) {
    diags.push_back(vc.reason);
    rec.verdict = Response::Kind::Unsupported;
    return conclude(rec, diags);
  }
  auto results = discharge_all(vc.obligations, opt_.solver, opt_.parallelism);
  std::optional<std::size_t> failed;
  bool inconclusive = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    if (res.verdict == SolverVerdict::Sat) {
      if (!failed) failed = i;
    } else if (res.verdict != SolverVerdict::Unsat) {
      inconclusive = true;
      diags.push_back("obligation " + vc.obligations[i].name + ": " + solver_verdict_name(res.verdict) +
                      (res.error.empty() ? "" : " (" + res.error + ")"));
    }
  }
  if (failed) {
    const Obligation& ob = vc.obligations[*failed];
    diags.push_back("obligation " + ob.name + " does not hold");
    rec.verdict = Response::Kind::Incorrect;
    std::string why;
    auto trace = trace_from_model(ob, model_commands(results[*failed]), &why);
    if (trace) {
      RunOptions ro;
      ro.fuel = opt_.fuel;
      TraceVerdict check = run_trace(script_, index, *trace, ro);
      if (check.kind == VerdictKind::ViolationConfirmed) rec.witness = violation_witness(*trace, meta());
      else why = "the reconstructed trace does not replay (" + check.reason + ")";
    }
    if (!rec.witness) rec.export_error = "cannot export witness: " + why;
    return conclude(rec, diags);
  }
  if (inconclusive) {
    rec.verdict = Response::Kind::Unknown;
    return conclude(rec, diags);
  }
  rec.verdict = Response::Kind::Correct;
  rec.witness = correctness_witness(script_, index, meta());
  return conclude(rec, diags);
}

Response Session::get_witness() {
  std::optional<VerdictRecord> rec = std::move(last_);
  last_.reset();
  if (!produce_witnesses()) return Response::error("witness production is disabled");
  if (!rec) return Response::error("no verdict to witness");
  if (!rec->witness) {
    if (!rec->export_error.empty()) return Response::error(rec->export_error);
    return Response::error("no witness for verdict " + Response{rec->verdict, {}, {}}.render());
  }
  Response r;
  r.kind = Response::Kind::Witness;
  r.text = print_witness(*rec->witness);
  return r;
}

std::vector<Command> witness_commands(const Witness& w) {
  std::vector<Command> out;
  auto smt = [&](const SmtCommand& s) {
    Command c;
    c.kind = CmdKind::Smt;
    c.smt = s;
    out.push_back(std::move(c));
  };
  for (const auto& m : w.metadata) smt(m);
  for (const auto& m : w.smt_commands) smt(m);
  for (const auto& a : w.annotations) {
    Command c;
    c.kind = CmdKind::AnnotateTag;
    c.name = a.tag;
    c.attrs = a.attrs;
    out.push_back(std::move(c));
  }
  for (const auto& t : w.traces) {
    Command c;
    c.kind = CmdKind::SelectTrace;
    c.trace = t;
    out.push_back(std::move(c));
  }
  return out;
}

Script combine(const Script& task, const Witness& witness, std::optional<std::size_t> which) {
  std::vector<std::size_t> calls;
  for (std::size_t i = 0; i < task.commands.size(); ++i)
    if (task.commands[i].kind == CmdKind::VerifyCall) calls.push_back(i);
  if (calls.empty()) throw std::invalid_argument("the task has no verify-call");
  std::size_t k = which.value_or(calls.size() - 1);
  if (k >= calls.size()) throw std::invalid_argument("the task has only " + std::to_string(calls.size()) + " verify-calls");
  Script out;
  out.commands.assign(task.commands.begin(), task.commands.begin() + static_cast<std::ptrdiff_t>(calls[k]));
  for (auto& c : witness_commands(witness)) out.commands.push_back(std::move(c));
  out.commands.insert(out.commands.end(), task.commands.begin() + static_cast<std::ptrdiff_t>(calls[k]),
                      task.commands.end());
  return out;
}

}  // namespace svlib
