#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "svlib/ast.hpp"

namespace svlib {

struct ParseError {
  std::string rule_id = "S-SYNTAX";
  SourceSpan span;
  std::string message;
};

class ParseException : public std::runtime_error {
public:
  explicit ParseException(ParseError e) : std::runtime_error(e.message), error_(std::move(e)) {}
  const ParseError& error() const { return error_; }

private:
  ParseError error_;
};

struct ParseResult {
  Script script;
  std::vector<ParseError> errors;
  bool ok() const { return errors.empty(); }
};

/// Parses each top-level expression into one command. Malformed commands are
/// reported and skipped; parsing continues with the next expression.
ParseResult parse_script(const std::vector<SExpr>& exprs);
/// Reads and parses; lexical errors are reported as a single syntax error.
ParseResult parse_script_text(std::string_view text);

/// Single-item parsers; they throw ParseException.
Command parse_command(const SExpr& e);
Statement parse_statement(const SExpr& e);
Term parse_term(const SExpr& e);
Sort parse_sort(const SExpr& e);
std::vector<Attribute> parse_attributes(const std::vector<SExpr>& items, std::size_t from);
Trace parse_trace(const std::vector<SExpr>& items, std::size_t from, SourceSpan span);
Witness parse_witness(const SExpr& e);
Witness parse_witness_text(std::string_view text);

/// Parses a single term from text; convenience for tests and tools.
Term parse_term_text(std::string_view text);
Statement parse_statement_text(std::string_view text);

}  // namespace svlib
