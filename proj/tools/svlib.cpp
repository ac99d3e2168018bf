#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "svlib/dialogue.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/linter.hpp"
#include "svlib/parser.hpp"
#include "svlib/printer.hpp"
#include "svlib/session.hpp"
#include "svlib/vcgen.hpp"

using namespace svlib;

namespace {

std::atomic<bool> g_stop{false};

void on_term(int) { g_stop = true; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string concat(const std::vector<std::string>& files) {
  std::string text;
  for (const auto& f : files) {
    text += slurp(f);
    text += '\n';
  }
  return text;
}

struct Common {
  std::vector<std::string> files;
  bool produce_witnesses = false;
  std::string witness_channel = "stdout";
  std::string solver;
  double solver_timeout = 30.0;
  std::uint64_t fuel = 1'000'000;
  std::string format = "text";
};

void print_diagnostics(const std::vector<Diagnostic>& ds, const Common& c, std::ostream& o) {
  for (const auto& d : ds) o << (c.format == "sexpr" ? format_sexpr(d) : format_text(d)) << '\n';
}

Script parse_or_report(const std::string& text, const Common& c) {
  ParseResult r = parse_script_text(text);
  if (!r.ok()) {
    std::vector<Diagnostic> ds;
    for (const auto& e : r.errors) ds.push_back(to_diagnostic(e));
    print_diagnostics(ds, c, std::cerr);
    throw CLI::RuntimeError(1);
  }
  return std::move(r.script);
}

std::size_t nth_verify_call(const Script& s, std::optional<std::size_t> which) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.commands.size(); ++i)
    if (s.commands[i].kind == CmdKind::VerifyCall) idx.push_back(i);
  if (idx.empty()) throw std::runtime_error("the script has no verify-call");
  if (!which) return idx.back();
  if (*which >= idx.size()) throw std::runtime_error("there is no verify-call number " + std::to_string(*which));
  return idx[*which];
}

int dialogue(const Common& c, std::istream& in) {
  SessionOptions so;
  if (c.produce_witnesses) so.produce_witnesses = true;
  if (!c.solver.empty()) so.solver = SolverConfig::from_command(c.solver, c.solver_timeout);
  else so.solver.timeout = c.solver_timeout;
  so.fuel = c.fuel;
  so.input_files = c.files;
  Session session(so);

  std::ofstream witness_file;
  DialogueChannels ch;
  ch.out = &std::cout;
  ch.diag = &std::cerr;
  ch.format = c.format == "sexpr" ? DiagnosticFormat::Sexpr : DiagnosticFormat::Text;
  if (c.witness_channel == "stdout") {
    ch.witness = &std::cout;
  } else if (c.witness_channel == "stderr") {
    ch.witness = &std::cerr;
  } else {
    witness_file.open(c.witness_channel);
    if (!witness_file) throw std::runtime_error("cannot open " + c.witness_channel);
    ch.witness = &witness_file;
  }
  return run_dialogue(session, in, ch, &g_stop) ? 1 : 0;
}

void add_session_flags(CLI::App* app, Common& c) {
  app->add_flag("--produce-witnesses", c.produce_witnesses, "Enable witness production");
  app->add_option("--witness-output-channel", c.witness_channel, "stdout, stderr or a file path");
  app->add_option("--solver", c.solver, "Solver command line, e.g. \"z3 -in\"");
  app->add_option("--solver-timeout", c.solver_timeout, "Seconds per solver query");
  app->add_option("--fuel", c.fuel, "Step budget for trace replay");
}

}  // namespace

int main(int argc, char** argv) {
  struct sigaction sa {};
  sa.sa_handler = on_term;
  sigaction(SIGTERM, &sa, nullptr);

  CLI::App app{"SV-LIB front end, linter and witness validator"};
  app.require_subcommand(0, 1);
  Common c;
  app.add_option("--format", c.format, "Diagnostic format")->check(CLI::IsMember({"text", "sexpr"}));
  add_session_flags(&app, c);
  app.add_option("files", c.files, "Scripts run as one dialogue; standard input when absent");

  auto* parse = app.add_subcommand("parse", "Parse and echo the S-expressions of a script");
  parse->add_option("files", c.files)->required();
  auto* lint_cmd = app.add_subcommand("lint", "Check well-formedness");
  lint_cmd->add_option("files", c.files)->required();
  bool warnings = true;
  lint_cmd->add_flag("!--no-warnings", warnings, "Suppress warnings");
  auto* fmt = app.add_subcommand("fmt", "Pretty-print a script");
  fmt->add_option("files", c.files)->required();

  auto* run = app.add_subcommand("run-trace", "Replay a violation witness against a task");
  std::string task_file, witness_file;
  run->add_option("task", task_file)->required();
  run->add_option("witness", witness_file)->required();
  run->add_option("--fuel", c.fuel);

  auto* vc = app.add_subcommand("vcgen", "Write the proof obligations of a verify-call as SMT-LIB files");
  std::string outdir = "obligations";
  std::optional<std::size_t> which;
  vc->add_option("files", c.files)->required();
  vc->add_option("-o,--output", outdir, "Output directory");
  vc->add_option("--index", which, "Verify-call number, counting from 0 (default: the last)");

  auto* verify = app.add_subcommand("verify", "Run scripts as a dialogue and print the responses");
  verify->add_option("files", c.files)->required();
  add_session_flags(verify, c);

  auto* comb = app.add_subcommand("combine", "Insert a witness before a verify-call of its task");
  comb->add_option("task", task_file)->required();
  comb->add_option("witness", witness_file)->required();
  comb->add_option("--index", which, "Verify-call number, counting from 0 (default: the last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*parse) {
      int rc = 0;
      try {
        for (const auto& e : read_all(concat(c.files))) std::cout << write(e) << '\n';
      } catch (const LexError& e) {
        std::cerr << e.what() << '\n';
        rc = 1;
      }
      ParseResult r = parse_script_text(concat(c.files));
      std::vector<Diagnostic> ds;
      for (const auto& e : r.errors) ds.push_back(to_diagnostic(e));
      print_diagnostics(ds, c, std::cerr);
      return r.ok() ? rc : 1;
    }
    if (*lint_cmd) {
      ParseResult r = parse_script_text(concat(c.files));
      std::vector<Diagnostic> ds = lint(r);
      if (!warnings) std::erase_if(ds, [](const Diagnostic& d) { return d.severity == Severity::Warning; });
      print_diagnostics(ds, c, std::cout);
      return has_errors(ds) ? 1 : 0;
    }
    if (*fmt) {
      std::cout << print_script(parse_or_report(concat(c.files), c));
      return 0;
    }
    if (*run) {
      Script task = parse_or_report(slurp(task_file), c);
      Witness w = parse_witness_text(slurp(witness_file));
      if (w.traces.empty()) throw std::runtime_error("the witness has no select-trace");
      RunOptions ro;
      ro.fuel = c.fuel;
      int rc = 0;
      for (const auto& t : w.traces) {
        std::size_t index = nth_verify_call(task, std::nullopt);
        for (std::size_t i = 0; i < task.commands.size(); ++i)
          if (task.commands[i].kind == CmdKind::VerifyCall && task.commands[i].name.name == t.entry_proc.name)
            index = i;
        TraceVerdict v = run_trace(task, index, t, ro);
        std::cout << verdict_name(v.kind);
        if (v.kind == VerdictKind::ViolationConfirmed) std::cout << ' ' << v.tag << ' ' << attrs_text(v.attrs);
        if (v.kind == VerdictKind::StepInvalid) std::cout << " step " << v.step_index;
        std::cout << '\n';
        if (!v.reason.empty()) std::cerr << v.reason << '\n';
        for (const auto& wmsg : v.warnings) std::cerr << "warning: " << wmsg << '\n';
        if (v.kind != VerdictKind::ViolationConfirmed) rc = 1;
      }
      return rc;
    }
    if (*vc) {
      Script s = parse_or_report(concat(c.files), c);
      VcResult r = generate_obligations(s, nth_verify_call(s, which));
      if (r.status != VcStatus::Ok) {
        std::cerr << (r.status == VcStatus::Unsupported ? "unsupported: " : "missing annotation: ") << r.reason << '\n';
        return 1;
      }
      std::filesystem::create_directories(outdir);
      std::ofstream index(std::filesystem::path(outdir) / "index.txt");
      for (std::size_t i = 0; i < r.obligations.size(); ++i) {
        const Obligation& ob = r.obligations[i];
        char name[32];
        std::snprintf(name, sizeof name, "%03zu.smt2", i);
        std::ofstream(std::filesystem::path(outdir) / name) << emit_smt(ob);
        index << name << '\t' << ob.name << '\t' << obligation_kind_name(ob.kind) << '\n';
        std::cout << name << ' ' << ob.name << '\n';
      }
      return 0;
    }
    if (*comb) {
      Script task = parse_or_report(slurp(task_file), c);
      Witness w = parse_witness_text(slurp(witness_file));
      std::cout << print_script(combine(task, w, which));
      return 0;
    }
    if (*verify || !c.files.empty()) {
      std::istringstream in(concat(c.files));
      return dialogue(c, in);
    }
    return dialogue(c, std::cin);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const ParseException& e) {
    std::cerr << e.error().message << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
