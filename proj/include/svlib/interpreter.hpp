#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/symbols.hpp"
#include "svlib/value.hpp"

namespace svlib {

class EvalError : public std::runtime_error {
public:
  enum class Kind { Unsupported, Underspecified, Undefined };
  EvalError(Kind k, const std::string& msg, std::string symbol = {})
      : std::runtime_error(msg), kind(k), symbol(std::move(symbol)) {}
  Kind kind;
  std::string symbol;  // the undefined variable, for Undefined
};

using Env = std::map<std::string, Value>;

/// Function interpretations from a witness model (`define-fun` entries).
struct Model {
  std::map<std::string, const FunDef*> funs;
  static Model from(const std::vector<SmtCommand>& commands);
  bool defines(const std::string& name) const { return funs.count(name) > 0; }
};

struct EvalContext {
  const SymbolTable* table = nullptr;
  const Model* model = nullptr;
  const Env* locals = nullptr;
  /// Names declared by the current procedure; reads of these never fall through to globals.
  const std::set<std::string>* local_names = nullptr;
  const Env* globals = nullptr;
  /// Per-tag state snapshots for `(at x tag)`.
  const std::map<std::string, Env>* snapshots = nullptr;
};

/// Evaluates a term natively. Throws EvalError.
Value eval_term(const Term& t, const EvalContext& ctx);

enum class VerdictKind { ViolationConfirmed, StepInvalid, ViolationNotReached, FuelExhausted, Unsupported };
const char* verdict_name(VerdictKind k);

struct TraceVerdict {
  VerdictKind kind = VerdictKind::ViolationNotReached;
  std::string tag;                 // ViolationConfirmed
  std::vector<Attribute> attrs;    // ViolationConfirmed
  std::size_t step_index = 0;      // StepInvalid: index of the offending step
  std::optional<Step> step;        // StepInvalid: the step that could not be executed
  std::string reason;
  bool lasso = false;              // a liveness stem was confirmed
  Env locals;                      // innermost frame when the run stopped
  Env globals;
  std::vector<std::string> warnings;
};

struct RunOptions {
  std::uint64_t fuel = 1'000'000;
  /// Called on every arrival at an annotated statement, after snapshots are taken.
  std::function<void(const std::string& proc, const std::vector<std::string>& tags, const Env& locals,
                     const Env& globals)>
      on_visit;
};

/// Replays `trace` against the verify-call at command index `verify_index`.
TraceVerdict run_trace(const Script& script, std::size_t verify_index, const Trace& trace,
                       const RunOptions& options = {});

enum class ConcreteStatus { Returned, AssumeFailed, NondetReached, FuelExhausted, Error };

struct ConcreteResult {
  ConcreteStatus status = ConcreteStatus::Error;
  Env locals;  // final environment of the called procedure
  Env globals;
  std::string reason;
};

/// Deterministic execution of `proc` on concrete inputs without a trace.
ConcreteResult run_concrete(const Script& script, const std::string& proc, const std::vector<Value>& inputs,
                            const RunOptions& options = {}, const Env& globals = {});

}  // namespace svlib
