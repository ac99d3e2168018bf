#include "svlib/sexpr.hpp"

#include <cctype>

namespace svlib {

namespace {

bool is_symbol_char(unsigned char c) {
  if (std::isalnum(c)) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&': case '*':
    case '_': case '-': case '+': case '=': case '<': case '>': case '.': case '?':
    case '/':
      return true;
    default:
      return false;
  }
}

bool is_token_end(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' ||
         c == '"';
}

class Reader {
public:
  Reader(std::string_view input, const ReadOptions& options) : in_(input), options_(options) {}

  std::vector<SExpr> run() {
    struct Open {
      std::vector<SExpr> items;
      SourceSpan span;
    };
    std::vector<Open> stack;
    std::vector<SExpr> top;

    auto emit = [&](SExpr e) {
      if (stack.empty())
        top.push_back(std::move(e));
      else
        stack.back().items.push_back(std::move(e));
    };

    while (true) {
      skip_blanks();
      if (pos_ >= in_.size()) break;
      char c = in_[pos_];
      if (c == '(') {
        if (stack.size() >= options_.max_depth)
          throw LexError("maximum nesting depth exceeded", here());
        stack.push_back({{}, here()});
        advance();
      } else if (c == ')') {
        if (stack.empty()) throw LexError("unbalanced ')'", here());
        advance();
        Open open = std::move(stack.back());
        stack.pop_back();
        open.span.end_offset = pos_;
        emit(SExpr::list(std::move(open.items), open.span));
      } else {
        emit(read_atom());
      }
    }
    if (!stack.empty()) {
      SourceSpan end = here();
      throw LexError("unbalanced '(' opened at line " + std::to_string(stack.back().span.line) +
                         ", column " + std::to_string(stack.back().span.column),
                     end);
    }
    return top;
  }

private:
  SourceSpan here() const { return {pos_, pos_, line_, column_}; }

  void advance() {
    if (in_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == ';') {
        while (pos_ < in_.size() && in_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_atom() {
    SourceSpan start = here();
    char c = in_[pos_];
    if (c == '"') return read_string(start);
    if (c == '|') return read_quoted(start);

    std::size_t begin = pos_;
    while (pos_ < in_.size() && !is_token_end(in_[pos_])) {
      if (static_cast<unsigned char>(in_[pos_]) >= 0x80)
        throw LexError("non-ASCII character outside string literal", here());
      advance();
    }
    std::string text(in_.substr(begin, pos_ - begin));
    SourceSpan span{start.start_offset, pos_, start.line, start.column};
    AtomKind kind = classify(text, start);
    return SExpr::atom(kind, std::move(text), span);
  }

  AtomKind classify(const std::string& text, SourceSpan start) const {
    auto fail = [&](std::size_t at, const std::string& what) -> AtomKind {
      SourceSpan s{start.start_offset + at, start.start_offset + at, start.line,
                   start.column + at};
      throw LexError(what + " in token '" + text + "'", s);
    };
    unsigned char first = static_cast<unsigned char>(text[0]);
    if (std::isdigit(first)) {
      std::size_t i = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (text[0] == '0' && i > 1) return fail(1, "leading zero in numeral");
      if (i == text.size()) return AtomKind::Numeral;
      if (text[i] != '.') return fail(i, "invalid character");
      std::size_t j = i + 1;
      if (j == text.size()) return fail(j - 1, "incomplete decimal");
      for (; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) return fail(j, "invalid decimal");
      return AtomKind::Decimal;
    }
    if (text[0] == '#') {
      auto all = [&](auto pred) {
        for (std::size_t j = 2; j < text.size(); ++j)
          if (!pred(static_cast<unsigned char>(text[j]))) return false;
        return true;
      };
      if (text.size() > 2 && text[1] == 'x' && all([](unsigned char c) { return std::isxdigit(c) != 0; }))
        return AtomKind::Hexadecimal;
      if (text.size() > 2 && text[1] == 'b' && all([](unsigned char c) { return c == '0' || c == '1'; }))
        return AtomKind::Binary;
      // Reserved-prefix symbols are lexed so the parser can reject them by name.
      if (text.size() == 1) return fail(0, "invalid token");
      for (std::size_t j = 1; j < text.size(); ++j)
        if (!is_symbol_char(static_cast<unsigned char>(text[j]))) return fail(j, "invalid character");
      return AtomKind::Symbol;
    }
    if (text[0] == ':') {
      if (text.size() == 1) return fail(0, "empty keyword");
      for (std::size_t j = 1; j < text.size(); ++j)
        if (!is_symbol_char(static_cast<unsigned char>(text[j])))
          return fail(j, "invalid character");
      return AtomKind::Keyword;
    }
    for (std::size_t j = 0; j < text.size(); ++j)
      if (!is_symbol_char(static_cast<unsigned char>(text[j]))) return fail(j, "invalid character");
    return AtomKind::Symbol;
  }

  SExpr read_string(SourceSpan start) {
    std::size_t begin = pos_;
    advance();
    while (true) {
      if (pos_ >= in_.size()) throw LexError("unterminated string literal", here());
      if (in_[pos_] == '"') {
        advance();
        if (pos_ < in_.size() && in_[pos_] == '"') {
          advance();
          continue;
        }
        break;
      }
      advance();
    }
    SourceSpan span{start.start_offset, pos_, start.line, start.column};
    return SExpr::atom(AtomKind::String, std::string(in_.substr(begin, pos_ - begin)), span);
  }

  SExpr read_quoted(SourceSpan start) {
    std::size_t begin = pos_;
    advance();
    while (true) {
      if (pos_ >= in_.size()) throw LexError("unterminated quoted symbol", here());
      char c = in_[pos_];
      if (c == '|') {
        advance();
        break;
      }
      if (c == '\\') throw LexError("backslash in quoted symbol", here());
      if (static_cast<unsigned char>(c) >= 0x80)
        throw LexError("non-ASCII character outside string literal", here());
      advance();
    }
    SourceSpan span{start.start_offset, pos_, start.line, start.column};
    return SExpr::atom(AtomKind::Symbol, std::string(in_.substr(begin, pos_ - begin)), span);
  }

  std::string_view in_;
  const ReadOptions& options_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void write_into(const SExpr& e, std::string& out) {
  if (e.is_atom()) {
    out += e.text();
    return;
  }
  out += '(';
  bool first = true;
  for (const auto& item : e.items()) {
    if (!first) out += ' ';
    first = false;
    write_into(item, out);
  }
  out += ')';
}

}  // namespace

SExpr SExpr::atom(AtomKind kind, std::string text, SourceSpan span) {
  SExpr e;
  e.is_atom_ = true;
  e.kind_ = kind;
  e.text_ = std::move(text);
  e.span_ = span;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items, SourceSpan span) {
  SExpr e;
  e.is_atom_ = false;
  e.items_ = std::move(items);
  e.span_ = span;
  return e;
}

SExpr SExpr::symbol(std::string_view name, SourceSpan span) {
  return atom(AtomKind::Symbol, quote_symbol_if_needed(name), span);
}

SExpr SExpr::keyword(std::string_view name) {
  std::string text(name);
  if (text.empty() || text[0] != ':') text.insert(text.begin(), ':');
  return atom(AtomKind::Keyword, std::move(text));
}

SExpr SExpr::numeral(std::string_view digits) { return atom(AtomKind::Numeral, std::string(digits)); }

SExpr SExpr::string_literal(std::string_view contents) {
  std::string text = "\"";
  for (char c : contents) {
    if (c == '"') text += '"';
    text += c;
  }
  text += '"';
  return atom(AtomKind::String, std::move(text));
}

bool SExpr::is_symbol(std::string_view name) const { return is_symbol() && symbol_name() == name; }

bool SExpr::is_quoted_symbol() const {
  return is_symbol() && text_.size() >= 2 && text_.front() == '|' && text_.back() == '|';
}

std::string SExpr::symbol_name() const {
  if (is_quoted_symbol()) return text_.substr(1, text_.size() - 2);
  return text_;
}

std::string SExpr::string_value() const {
  if (!is_atom_ || kind_ != AtomKind::String || text_.size() < 2) return text_;
  std::string out;
  for (std::size_t i = 1; i + 1 < text_.size(); ++i) {
    out += text_[i];
    if (text_[i] == '"') ++i;
  }
  return out;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_atom_ != b.is_atom_) return false;
  if (a.is_atom_) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == AtomKind::Symbol) return a.symbol_name() == b.symbol_name();
    return a.text_ == b.text_;
  }
  return a.items_ == b.items_;
}

std::vector<SExpr> read_all(std::string_view input, const ReadOptions& options) {
  return Reader(input, options).run();
}

std::string write(const SExpr& expr) {
  std::string out;
  write_into(expr, out);
  return out;
}

bool is_simple_symbol(std::string_view text) {
  if (text.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(text[0]))) return false;
  for (char c : text)
    if (!is_symbol_char(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string quote_symbol_if_needed(std::string_view name) {
  if (is_simple_symbol(name)) return std::string(name);
  return "|" + std::string(name) + "|";
}

}  // namespace svlib
