#include "svlib/ast.hpp"

namespace svlib {

Term Term::constant(SExpr lit) {
  Term t;
  t.kind = TermKind::Const;
  t.literal = std::move(lit);
  return t;
}

Term Term::numeral(std::string_view digits) { return constant(SExpr::numeral(digits)); }

Term Term::boolean(bool b) { return var(b ? "true" : "false"); }

Term Term::var(std::string name) {
  Term t;
  t.kind = TermKind::Ident;
  t.name = std::move(name);
  return t;
}

Term Term::app(std::string head, std::vector<Term> args) {
  if (args.empty()) return var(std::move(head));
  Term t;
  t.kind = TermKind::App;
  t.name = std::move(head);
  t.args = std::move(args);
  return t;
}

Term Term::at(std::string var, std::string tag) {
  Term t;
  t.kind = TermKind::At;
  t.name = std::move(var);
  t.tag = std::move(tag);
  return t;
}

Attribute Attribute::tag(std::string name) {
  Attribute a;
  a.kind = AttrKind::Tag;
  a.symbol = Symbol(std::move(name));
  return a;
}

Attribute Attribute::with_term(AttrKind kind, Term t) {
  Attribute a;
  a.kind = kind;
  a.terms.push_back(std::move(t));
  return a;
}

Attribute Attribute::flag(AttrKind kind) {
  Attribute a;
  a.kind = kind;
  return a;
}

std::string Attribute::key() const {
  switch (kind) {
    case AttrKind::Tag: return ":tag";
    case AttrKind::CheckTrue: return ":check-true";
    case AttrKind::Recurring: return ":recurring";
    case AttrKind::NotRecurring: return ":not-recurring";
    case AttrKind::Requires: return ":requires";
    case AttrKind::Ensures: return ":ensures";
    case AttrKind::Invariant: return ":invariant";
    case AttrKind::Decreases: return ":decreases";
    case AttrKind::DecreasesLex: return ":decreases-lex";
    case AttrKind::Named: return ":named";
    case AttrKind::Other: return keyword;
  }
  return keyword;
}

char property_class(AttrKind kind) {
  switch (kind) {
    case AttrKind::CheckTrue:
    case AttrKind::Requires:
    case AttrKind::Ensures:
    case AttrKind::Invariant:
      return 'G';
    case AttrKind::Recurring:
    case AttrKind::NotRecurring:
    case AttrKind::Decreases:
    case AttrKind::DecreasesLex:
      return 'F';
    default:
      return 0;
  }
}

bool is_property(AttrKind kind) { return property_class(kind) != 0; }

char Statement::fragment() const {
  switch (kind) {
    case StmtKind::Assume:
    case StmtKind::Assign:
    case StmtKind::Sequence:
    case StmtKind::Annotated:
      return 'B';
    case StmtKind::Call:
    case StmtKind::Return:
      return 'P';
    case StmtKind::Label:
    case StmtKind::Goto:
    case StmtKind::CondGoto:
      return 'U';
    case StmtKind::If:
    case StmtKind::While:
    case StmtKind::Break:
    case StmtKind::Continue:
      return 'S';
    case StmtKind::Havoc:
    case StmtKind::Choice:
      return 'N';
  }
  return 'B';
}

Statement Statement::skip() { return sequence({}); }

Statement Statement::sequence(std::vector<Statement> items) {
  Statement s;
  s.kind = StmtKind::Sequence;
  s.children = std::move(items);
  return s;
}

Statement Statement::annotated(Statement inner, std::vector<Attribute> attrs) {
  Statement s;
  s.kind = StmtKind::Annotated;
  s.children.push_back(std::move(inner));
  s.attrs = std::move(attrs);
  return s;
}

bool is_leaf(const Statement& s) {
  switch (s.kind) {
    case StmtKind::Sequence:
      return s.children.empty();
    case StmtKind::Annotated:
      return is_leaf(s.inner());
    case StmtKind::If:
    case StmtKind::While:
    case StmtKind::Choice:
      return false;
    default:
      return true;
  }
}

const char* smt_command_name(SmtKind kind) {
  switch (kind) {
    case SmtKind::Assert: return "assert";
    case SmtKind::DeclareConst: return "declare-const";
    case SmtKind::DeclareDatatype: return "declare-datatype";
    case SmtKind::DeclareDatatypes: return "declare-datatypes";
    case SmtKind::DeclareFun: return "declare-fun";
    case SmtKind::DeclareSort: return "declare-sort";
    case SmtKind::DefineConst: return "define-const";
    case SmtKind::DefineFun: return "define-fun";
    case SmtKind::DefineFunRec: return "define-fun-rec";
    case SmtKind::DefineFunsRec: return "define-funs-rec";
    case SmtKind::DefineSort: return "define-sort";
    case SmtKind::GetAssertions: return "get-assertions";
    case SmtKind::GetInfo: return "get-info";
    case SmtKind::GetOption: return "get-option";
    case SmtKind::SetInfo: return "set-info";
    case SmtKind::SetLogic: return "set-logic";
    case SmtKind::SetOption: return "set-option";
  }
  return "";
}

std::optional<std::string> Script::format_version() const {
  std::optional<std::string> v;
  for (const auto& c : commands)
    if (c.kind == CmdKind::Smt && c.smt.kind == SmtKind::SetInfo &&
        c.smt.keyword == ":format-version" && c.smt.value)
      v = c.smt.value->atom_kind() == AtomKind::String ? c.smt.value->string_value()
                                                       : c.smt.value->text();
  return v;
}

Script Script::operator+(const Script& other) const {
  Script s = *this;
  s.commands.insert(s.commands.end(), other.commands.begin(), other.commands.end());
  return s;
}

Statement flatten_annotations(const Statement& s) {
  Statement out = s;
  for (auto& c : out.children) c = flatten_annotations(c);
  if (out.kind == StmtKind::Annotated && out.inner().kind == StmtKind::Annotated) {
    Statement inner = out.children[0];
    std::vector<Attribute> attrs = inner.attrs;
    attrs.insert(attrs.end(), out.attrs.begin(), out.attrs.end());
    inner.attrs = std::move(attrs);
    inner.loc = out.loc;
    return inner;
  }
  return out;
}

const Statement& strip_annotations(const Statement& s, std::vector<const Attribute*>* attrs) {
  if (s.kind != StmtKind::Annotated) return s;
  const Statement& inner = strip_annotations(s.inner(), attrs);
  if (attrs)
    for (const auto& a : s.attrs) attrs->push_back(&a);
  return inner;
}

std::vector<std::string> tags_of(const Statement& s) {
  std::vector<const Attribute*> attrs;
  strip_annotations(s, &attrs);
  std::vector<std::string> out;
  for (const auto* a : attrs)
    if (a->kind == AttrKind::Tag) out.push_back(a->symbol.name);
  return out;
}

}  // namespace svlib
