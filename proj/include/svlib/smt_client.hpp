#pragma once

#include <string>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/sexpr.hpp"
#include "svlib/vcgen.hpp"

namespace svlib {

struct SolverConfig {
  std::vector<std::string> command{"z3", "-in"};
  double timeout = 30.0;  // seconds per query
  std::string name = "z3";

  /// Splits a command line such as "cvc5 --lang smt2" on whitespace.
  static SolverConfig from_command(const std::string& line, double timeout = 30.0);
  /// `SVLIB_SOLVER` from the environment, or z3.
  static SolverConfig from_environment();
};

enum class SolverVerdict { Sat, Unsat, Unknown, SolverError, Skipped };
const char* solver_verdict_name(SolverVerdict v);

struct SolverResult {
  SolverVerdict verdict = SolverVerdict::SolverError;
  std::vector<SExpr> model;  // define-fun entries, when sat
  double elapsed = 0;        // seconds
  std::string transcript;
  std::string error;
};

/// Runs one script through a fresh solver process. On sat and with
/// `want_model`, the model is requested after the verdict.
SolverResult run_solver(const std::string& script, const SolverConfig& config, bool want_model = true);

SolverResult discharge(const Obligation& ob, const SolverConfig& config);

/// Results are in input order. With `early_exit`, no query is started after
/// one returns anything other than unsat; those are reported as skipped.
std::vector<SolverResult> discharge_all(const std::vector<Obligation>& obs, const SolverConfig& config,
                                        int parallelism = 1, bool early_exit = false);

/// Model entries parsed as define-fun commands; malformed entries are dropped.
std::vector<SmtCommand> model_commands(const SolverResult& r);

}  // namespace svlib
