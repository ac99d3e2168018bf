#pragma once

#include <string>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/parser.hpp"
#include "svlib/symbols.hpp"

namespace svlib {

enum class Severity { Error, Warning };

struct Diagnostic {
  std::string rule_id;
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
};

struct RuleInfo {
  const char* id;
  Severity severity;
  /// Checklist the rule belongs to: 'S' structural, 'F' full, 'W' warning.
  char level;
  /// Item letter within its checklist, 0 for rules outside the lists.
  char item;
  const char* summary;
};

/// Every rule id the linter can emit.
const std::vector<RuleInfo>& rule_catalog();
const RuleInfo* find_rule(const std::string& id);

std::vector<Diagnostic> check_structural(const Script& s);
std::vector<Diagnostic> check_full(const Script& s);
std::vector<Diagnostic> check_warnings(const Script& s);

/// Parse errors followed by structural, full and warning diagnostics.
std::vector<Diagnostic> lint(const ParseResult& r);
Diagnostic to_diagnostic(const ParseError& e);

bool has_errors(const std::vector<Diagnostic>& ds);

/// `severity:rule_id:line:col: message`
std::string format_text(const Diagnostic& d);
/// `(severity rule_id line col "message")`
std::string format_sexpr(const Diagnostic& d);

}  // namespace svlib
