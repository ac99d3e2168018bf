#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "svlib/sexpr.hpp"

namespace svlib {

/// Source location carried by AST nodes. It never takes part in equality.
struct Loc {
  SourceSpan span;
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

struct Symbol {
  std::string name;
  Loc loc;

  Symbol() = default;
  Symbol(std::string n, SourceSpan s = {}) : name(std::move(n)), loc{s} {}
  friend bool operator==(const Symbol& a, const Symbol& b) { return a.name == b.name; }
};

struct Sort {
  std::string name;
  std::vector<SExpr> indices;  // `(_ BitVec 32)`
  std::vector<Sort> params;    // `(Array Int Int)`
  Loc loc;

  static Sort named(std::string name) {
    Sort s;
    s.name = std::move(name);
    return s;
  }
  bool is(std::string_view n) const { return name == n && params.empty() && indices.empty(); }
  friend bool operator==(const Sort&, const Sort&) = default;
};

enum class TermKind { Const, Ident, App, Let, Forall, Exists, Match, Annotated, At };

struct Term {
  TermKind kind = TermKind::Ident;
  SExpr literal;               // Const
  std::string name;            // Ident and App head; At variable
  std::vector<SExpr> indices;  // indexed head `(_ name i*)`
  std::optional<Sort> as_sort; // qualified head `(as name sort)`
  std::vector<Term> args;      // App arguments; Let values then body; binder/Annotated body; Match scrutinee then arm bodies
  std::vector<std::string> bound;
  std::vector<Sort> bound_sorts;
  std::vector<SExpr> patterns;  // Match arm patterns
  std::vector<SExpr> term_attrs;  // Annotated `(! t ...)` attribute tokens
  std::string tag;              // At
  Loc loc;

  static Term constant(SExpr lit);
  static Term numeral(std::string_view digits);
  static Term boolean(bool b);
  static Term var(std::string name);
  static Term app(std::string head, std::vector<Term> args);
  static Term at(std::string var, std::string tag);

  const Term& body() const { return args.back(); }
  bool is_var(std::string_view n) const { return kind == TermKind::Ident && name == n; }
  bool is_true() const { return kind == TermKind::Ident && name == "true" && !as_sort; }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class AttrKind {
  Tag,
  CheckTrue,
  Recurring,
  NotRecurring,
  Requires,
  Ensures,
  Invariant,
  Decreases,
  DecreasesLex,
  Named,
  Other
};

struct Attribute {
  AttrKind kind = AttrKind::Other;
  Symbol symbol;            // Tag and Named
  std::vector<Term> terms;  // one for term-valued properties, several for DecreasesLex
  std::string keyword;      // Other
  std::optional<SExpr> value;
  Loc loc;

  static Attribute tag(std::string name);
  static Attribute with_term(AttrKind kind, Term t);
  static Attribute flag(AttrKind kind);
  /// Keyword spelling including the leading colon.
  std::string key() const;
  const Term& term() const { return terms.at(0); }
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// 'G' for safety properties, 'F' for liveness properties, 0 otherwise.
char property_class(AttrKind kind);
bool is_property(AttrKind kind);

enum class StmtKind {
  Assume,
  Assign,
  Sequence,
  Annotated,
  Call,
  Return,
  Label,
  Goto,
  CondGoto,
  If,
  While,
  Break,
  Continue,
  Havoc,
  Choice
};

struct Statement {
  StmtKind kind = StmtKind::Sequence;
  Term cond;                                    // Assume, CondGoto, If, While
  std::vector<std::pair<Symbol, Term>> assigns;  // Assign
  std::vector<Statement> children;  // Sequence items, Annotated inner, If branches, While body, Choice branches
  std::vector<Attribute> attrs;     // Annotated
  Symbol name;                      // Call callee, Label, Goto and CondGoto target
  std::vector<Term> args;           // Call
  std::vector<Symbol> vars;         // Call outputs, Havoc targets
  Loc loc;

  const Statement& inner() const { return children.at(0); }
  const Statement& body() const { return children.at(0); }
  bool has_else() const { return kind == StmtKind::If && children.size() > 1; }
  /// Fragment letter: B, P, U, S or N.
  char fragment() const;
  friend bool operator==(const Statement&, const Statement&) = default;

  static Statement skip();
  static Statement sequence(std::vector<Statement> items);
  static Statement annotated(Statement inner, std::vector<Attribute> attrs);
};

bool is_leaf(const Statement& s);

struct SortedVar {
  Symbol name;
  Sort sort;
  friend bool operator==(const SortedVar&, const SortedVar&) = default;
};

struct Procedure {
  Symbol name;
  std::vector<SortedVar> inputs;
  std::vector<SortedVar> outputs;
  std::vector<SortedVar> locals;
  Statement body;
  Loc loc;
  friend bool operator==(const Procedure&, const Procedure&) = default;
};

enum class SmtKind {
  Assert,
  DeclareConst,
  DeclareDatatype,
  DeclareDatatypes,
  DeclareFun,
  DeclareSort,
  DefineConst,
  DefineFun,
  DefineFunRec,
  DefineFunsRec,
  DefineSort,
  GetAssertions,
  GetInfo,
  GetOption,
  SetInfo,
  SetLogic,
  SetOption
};

const char* smt_command_name(SmtKind kind);

struct FunDef {
  Symbol name;
  std::vector<SortedVar> params;
  Sort result;
  Term body;
  friend bool operator==(const FunDef&, const FunDef&) = default;
};

struct ConstructorDec {
  Symbol name;
  std::vector<SortedVar> selectors;
  friend bool operator==(const ConstructorDec&, const ConstructorDec&) = default;
};

struct DatatypeDec {
  std::vector<std::string> params;  // `(par (X*) ...)`
  std::vector<ConstructorDec> constructors;
  friend bool operator==(const DatatypeDec&, const DatatypeDec&) = default;
};

struct SmtCommand {
  SmtKind kind = SmtKind::Assert;
  Symbol name;                          // declared or defined symbol; logic for set-logic
  Sort sort;                            // declare-const, define-const, declare-fun result, define-sort body
  std::vector<Sort> arg_sorts;          // declare-fun
  Term term;                            // assert, define-const
  std::vector<FunDef> defs;             // define-fun, define-fun-rec, define-funs-rec
  std::vector<std::pair<Symbol, std::size_t>> sort_decs;  // declare-datatype(s)
  std::vector<DatatypeDec> datatypes;
  std::vector<std::string> sort_params;  // define-sort
  std::size_t arity = 0;                 // declare-sort
  std::string keyword;                   // set-info, set-option, get-info, get-option
  std::optional<SExpr> value;
  Loc loc;
  friend bool operator==(const SmtCommand&, const SmtCommand&) = default;
};

struct VarValue {
  Symbol var;
  Term value;
  friend bool operator==(const VarValue&, const VarValue&) = default;
};

enum class StepKind { InitProcVars, Havoc, Choice, Leap };

struct Step {
  StepKind kind = StepKind::Havoc;
  Symbol name;  // procedure for InitProcVars, tag for Leap
  std::vector<VarValue> values;
  std::size_t choice = 0;
  Loc loc;
  friend bool operator==(const Step&, const Step&) = default;
};

struct TagAttrs {
  Symbol tag;
  std::vector<Attribute> attrs;
  friend bool operator==(const TagAttrs&, const TagAttrs&) = default;
};

struct ViolatedProperty {
  bool invalid_step = false;
  TagAttrs annotation;          // incorrect-annotation
  std::optional<Step> step;     // invalid-step
  friend bool operator==(const ViolatedProperty&, const ViolatedProperty&) = default;
};

struct Trace {
  std::vector<SmtCommand> model;
  std::vector<VarValue> init_globals;
  Symbol entry_proc;
  std::vector<Step> steps;
  ViolatedProperty violated;
  std::vector<TagAttrs> using_annotations;
  Loc loc;
  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class CmdKind {
  DeclareVar,
  DefineProc,
  DefineProcsRec,
  AnnotateTag,
  SelectTrace,
  VerifyCall,
  GetWitness,
  ToolSpecific,
  Smt
};

struct Command {
  CmdKind kind = CmdKind::Smt;
  Symbol name;  // declare-var variable, annotate-tag tag, verify-call and tool call procedure
  Sort sort;
  std::vector<Procedure> procs;
  std::vector<Attribute> attrs;
  std::optional<Trace> trace;
  std::vector<Term> args;
  std::string verb;  // tool-specific head, e.g. `simulate-call`
  SmtCommand smt;
  Loc loc;
  friend bool operator==(const Command&, const Command&) = default;
};

struct Script {
  std::vector<Command> commands;

  /// Value of the last `(set-info :format-version "...")`, if any.
  std::optional<std::string> format_version() const;
  Script operator+(const Script& other) const;
  friend bool operator==(const Script&, const Script&) = default;
};

struct Witness {
  bool is_violation = false;
  std::vector<SmtCommand> metadata;
  std::vector<SmtCommand> smt_commands;
  std::vector<TagAttrs> annotations;
  std::vector<Trace> traces;
  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Collapses nested annotations, `(! (! s a) b)` becomes `(! s a b)`, everywhere in `s`.
Statement flatten_annotations(const Statement& s);

/// Strips annotation wrappers and returns the innermost statement together
/// with all collected attributes (inner ones first).
const Statement& strip_annotations(const Statement& s, std::vector<const Attribute*>* attrs = nullptr);

/// The `:tag` symbols of an annotated statement (empty for unannotated ones).
std::vector<std::string> tags_of(const Statement& s);

}  // namespace svlib
