#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/sexpr.hpp"

namespace svlib {

enum class ObligationKind {
  InvariantInit,
  InvariantInductive,
  Ensures,
  RequiresEntry,
  RequiresCall,
  Requires,
  CheckTrue,
  Decreases,
  LassoStem,
  LassoInductive,
  LassoNonExit
};
const char* obligation_kind_name(ObligationKind k);

/// A program variable paired with the SMT constant holding its value.
struct Binding {
  std::string var;
  std::string symbol;
  Sort sort;
};

/// Node of the passified program, kept so that a satisfying model can be
/// turned back into a sequence of trace steps.
struct PathNode {
  enum class Event { None, Havoc, Choice, Leap, Summary };
  std::string reach;  // Bool constant, true iff the node is reached
  std::vector<int> succ;
  Event event = Event::None;
  std::string tag;          // Leap
  std::size_t choice = 0;   // Choice
  std::vector<Binding> values;  // Havoc and Leap
};

struct ModelFun {
  std::string name;
  std::vector<Sort> args;
  Sort result;
};

struct PathGraph {
  std::vector<PathNode> nodes;
  int entry = 0;
  std::string proc;
  bool from_entry = false;       // starts at the verify-call rather than at an arbitrary call
  std::vector<Binding> globals;  // initial values
  /// Uninterpreted constants and functions of the background, to be read from the model.
  std::vector<ModelFun> model_funs;
};

struct Obligation {
  std::string name;
  ObligationKind kind = ObligationKind::Ensures;
  std::string proc;
  std::string tag;                // origin
  std::optional<Attribute> attr;  // origin
  std::vector<SExpr> script;      // ends with (check-sat)
  std::shared_ptr<const PathGraph> paths;
  int target = -1;                // node of `paths` where the assertion sits
};

enum class VcStatus { Ok, MissingAnnotation, Unsupported };

struct VcResult {
  VcStatus status = VcStatus::Ok;
  std::string reason;
  std::vector<Obligation> obligations;
};

struct VcOptions {
  int inline_depth = 8;
};

/// Obligations certifying the verify-call at command index `verify_index`.
VcResult generate_obligations(const Script& script, std::size_t verify_index, const VcOptions& options = {});

/// Obligations certifying that `trace` (a stem ending at a loop head whose
/// using-annotations hold) is a lasso.
VcResult generate_lasso_obligations(const Script& script, std::size_t verify_index, const Trace& trace,
                                    const VcOptions& options = {});

std::string emit_smt(const Obligation& ob);

}  // namespace svlib
