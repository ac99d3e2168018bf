#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svlib {

/// Byte range of a node in its source text. Line and column are 1-based and
/// refer to `start_offset`.
struct SourceSpan {
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class AtomKind { Symbol, Keyword, Numeral, Decimal, String, Hexadecimal, Binary };

/// Raised by the reader on malformed input. The span points at the offending
/// character (or at the end of input for unterminated constructs).
class LexError : public std::runtime_error {
public:
  LexError(const std::string& msg, SourceSpan span) : std::runtime_error(msg), span_(span) {}
  const SourceSpan& span() const { return span_; }

private:
  SourceSpan span_;
};

/// An S-expression with SMT-LIB lexical conventions. Atoms keep their exact
/// source lexeme (quoted symbols keep their bars, strings keep their quotes).
class SExpr {
public:
  SExpr() = default;

  static SExpr atom(AtomKind kind, std::string text, SourceSpan span = {});
  static SExpr list(std::vector<SExpr> items, SourceSpan span = {});
  /// Symbol atom for `name`, quoted with bars when it is not a simple symbol.
  static SExpr symbol(std::string_view name, SourceSpan span = {});
  static SExpr keyword(std::string_view name);
  static SExpr numeral(std::string_view digits);
  static SExpr string_literal(std::string_view contents);

  bool is_atom() const { return is_atom_; }
  bool is_list() const { return !is_atom_; }
  AtomKind atom_kind() const { return kind_; }
  const std::string& text() const { return text_; }
  const std::vector<SExpr>& items() const { return items_; }
  const SourceSpan& span() const { return span_; }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const SExpr& operator[](std::size_t i) const { return items_.at(i); }

  bool is_symbol() const { return is_atom_ && kind_ == AtomKind::Symbol; }
  /// True for a symbol whose unquoted spelling equals `name`.
  bool is_symbol(std::string_view name) const;
  bool is_keyword() const { return is_atom_ && kind_ == AtomKind::Keyword; }
  bool is_keyword(std::string_view name) const { return is_keyword() && text_ == name; }
  bool is_numeral() const { return is_atom_ && kind_ == AtomKind::Numeral; }
  /// Unquoted symbol spelling; the raw text for other atoms.
  std::string symbol_name() const;
  /// Whether the source spelled this symbol with `|...|`.
  bool is_quoted_symbol() const;
  /// Contents of a string literal with `""` escapes resolved.
  std::string string_value() const;

  /// Structural equality ignoring spans; symbols compare by unquoted spelling.
  friend bool operator==(const SExpr& a, const SExpr& b);

private:
  bool is_atom_ = false;
  AtomKind kind_ = AtomKind::Symbol;
  std::string text_;
  std::vector<SExpr> items_;
  SourceSpan span_;
};

struct ReadOptions {
  std::size_t max_depth = 10000;
};

/// Reads every top-level S-expression. Comments run from `;` to end of line.
std::vector<SExpr> read_all(std::string_view input, const ReadOptions& options = {});

/// Single-line rendering with one space between siblings.
std::string write(const SExpr& expr);

bool is_simple_symbol(std::string_view text);
/// Renders a symbol name, adding bars when it is not a simple symbol.
std::string quote_symbol_if_needed(std::string_view name);

}  // namespace svlib
