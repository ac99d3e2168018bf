#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svlib/ast.hpp"

namespace svlib {

enum class VarClass { Global, Input, Output, Local };

struct VarInfo {
  Sort sort;
  VarClass cls = VarClass::Global;
};

using Scope = std::map<std::string, VarInfo>;

struct FunInfo {
  enum class Kind { Declared, Defined, Constructor, Selector, Tester };
  Kind kind = Kind::Declared;
  std::vector<Sort> args;
  Sort result;
  std::size_t decl_index = 0;
  const FunDef* def = nullptr;       // define-fun family
  const SmtCommand* command = nullptr;
  std::string datatype;              // constructors, selectors, testers
  std::string constructor;           // selectors and testers
  std::size_t field = 0;             // selectors
  bool parametric = false;
};

struct SortInfo {
  std::size_t arity = 0;
  std::size_t decl_index = 0;
  const SmtCommand* definition = nullptr;  // define-sort
  const DatatypeDec* datatype = nullptr;
};

struct ProcInfo {
  const Procedure* proc = nullptr;
  std::size_t decl_index = 0;
  int group = 0;  // procedures of one define-procs-rec share a group
};

/// A statement carrying a `:tag`.
struct TagSite {
  const Statement* stmt = nullptr;   // outermost annotation wrapper
  const Statement* inner = nullptr;  // innermost non-annotation statement
  const Procedure* proc = nullptr;
  std::size_t decl_index = 0;
  bool is_top = false;
};

struct TagAnnotation {
  const Attribute* attr = nullptr;
  std::size_t decl_index = 0;
  bool inline_attr = false;
};

/// Declarations of a script, resolved in command order. Pointers refer into
/// the script, which must outlive the table and stay unmodified.
class SymbolTable {
public:
  SymbolTable() = default;
  explicit SymbolTable(const Script& script, std::size_t limit = SIZE_MAX);

  void add(const Command& c, std::size_t index);

  std::map<std::string, VarInfo> globals;
  std::map<std::string, std::size_t> global_index;
  std::map<std::string, FunInfo> functions;
  std::map<std::string, SortInfo> sorts;
  std::map<std::string, ProcInfo> procs;
  std::map<std::string, std::vector<TagSite>> tags;
  std::map<std::string, std::vector<TagAnnotation>> annotations;  // inline and annotate-tag, in order
  std::vector<const Term*> asserts;
  std::vector<const SmtCommand*> smt_commands;  // declarations and definitions in order
  std::optional<std::string> logic;

  const ProcInfo* proc(const std::string& name) const;
  const FunInfo* function(const std::string& name) const;
  /// Variables visible in the body of `p`: earlier globals overlaid by parameters.
  Scope scope_of(const Procedure& p) const;
  /// All attributes of a tag, inline ones and those from annotate-tag commands.
  std::vector<const Attribute*> attributes_of(const std::string& tag) const;
  /// Attributes governing one annotated statement: its inline attributes plus
  /// annotate-tag attributes of each of its tags.
  std::vector<const Attribute*> properties_at(const Statement& wrapper) const;
  /// Sites of tag `tag` inside procedure `proc`.
  std::vector<const TagSite*> sites_in(const std::string& tag, const Procedure& proc) const;

  /// Expands define-sort aliases.
  Sort expand(const Sort& s) const;

private:
  int next_group_ = 0;
  void add_proc(const Procedure& p, std::size_t index, int group);
  void collect_tags(const Statement& s, const Procedure& p, std::size_t index, bool top);
};

/// Every statement of a procedure body, pre-order.
void for_each_statement(const Statement& s, const std::function<void(const Statement&)>& f);

/// Variables written by `s` (assign targets, havoc targets, call outputs)
/// plus globals written transitively by called procedures.
std::set<std::string> modified_vars(const Statement& s, const SymbolTable& table);

// ---- type inference ----

enum class IssueKind { UnknownVar, UnknownFun, LateFun, UnknownSort, Type, AtTag, AtVar };

struct TypeIssue {
  IssueKind kind;
  SourceSpan span;
  std::string message;
};

struct TypeEnv {
  const SymbolTable* table = nullptr;
  const Scope* vars = nullptr;
  std::size_t fun_limit = SIZE_MAX;  // functions declared at or after this command index are invisible
  /// Resolves the sort of `(at x tag)`; null means `at` is not allowed.
  std::function<std::optional<Sort>(const Term&, std::vector<TypeIssue>&)> at;
};

/// Infers the sort of `t`. Returns nullopt when the sort cannot be determined
/// (opaque theory symbols, or after reporting an issue).
std::optional<Sort> infer_sort(const Term& t, const TypeEnv& env, std::vector<TypeIssue>& issues);

bool is_builtin_function(const std::string& name);
/// Name of the first undeclared sort occurring in `s` (declarations at or after `limit` are invisible).
std::optional<std::string> unknown_sort(const Sort& s, const SymbolTable& table, std::size_t limit = SIZE_MAX);
bool same_sort(const Sort& a, const Sort& b);

/// Free program-variable names of a term (bound variables excluded; `at` variables included).
std::set<std::string> free_vars(const Term& t);
/// Function symbols applied or referenced in a term that are not builtins.
std::set<std::string> function_symbols(const Term& t, const Scope& vars);

}  // namespace svlib
