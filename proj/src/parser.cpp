#include "svlib/parser.hpp"

#include <set>

namespace svlib {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& msg, const std::string& rule = "S-SYNTAX") {
  throw ParseException(ParseError{rule, at.span(), msg});
}

void check_reserved(const std::string& name, const SExpr& at) {
  if (!name.empty() && name[0] == '#')
    fail(at, "symbol '" + name + "' uses the reserved prefix '#'", "S-HASH-PREFIX");
}

Symbol sym(const SExpr& e, const char* what) {
  if (!e.is_symbol()) fail(e, std::string("expected ") + what + ", got '" + write(e) + "'");
  std::string name = e.symbol_name();
  check_reserved(name, e);
  return Symbol(std::move(name), e.span());
}

const SExpr& list_at(const SExpr& e, std::size_t i, const char* what) {
  if (i >= e.size() || !e[i].is_list()) fail(i < e.size() ? e[i] : e, std::string("expected ") + what);
  return e[i];
}

void expect_size(const SExpr& e, std::size_t n, const char* form) {
  if (e.size() != n)
    fail(e, std::string("malformed ") + form + ": expected " + std::to_string(n - 1) + " argument(s)");
}

std::size_t numeral_value(const SExpr& e, const char* what) {
  if (!e.is_numeral()) fail(e, std::string("expected numeral for ") + what);
  try {
    return static_cast<std::size_t>(std::stoull(e.text()));
  } catch (...) {
    fail(e, "numeral out of range");
  }
}

Term parse_term_impl(const SExpr& e, bool allow_at);

Sort parse_sort_impl(const SExpr& e) {
  Sort s;
  s.loc.span = e.span();
  if (e.is_atom()) {
    s.name = sym(e, "sort").name;
    return s;
  }
  if (e.empty()) fail(e, "empty sort");
  if (e[0].is_symbol("_")) {
    if (e.size() < 3) fail(e, "indexed sort needs an index");
    s.name = sym(e[1], "sort name").name;
    for (std::size_t i = 2; i < e.size(); ++i) {
      if (!e[i].is_atom() || (e[i].atom_kind() != AtomKind::Numeral && !e[i].is_symbol()))
        fail(e[i], "invalid sort index");
      s.indices.push_back(e[i]);
    }
    return s;
  }
  if (e.size() < 2) fail(e, "parametric sort needs arguments");
  Sort head = parse_sort_impl(e[0]);
  if (!head.params.empty()) fail(e[0], "invalid sort head");
  s.name = head.name;
  s.indices = head.indices;
  for (std::size_t i = 1; i < e.size(); ++i) s.params.push_back(parse_sort_impl(e[i]));
  return s;
}

// Parses an identifier in head position: a symbol, `(_ f i+)` or `(as f S)`.
bool parse_qual_ident(const SExpr& e, Term& t) {
  if (e.is_symbol()) {
    t.name = sym(e, "identifier").name;
    return true;
  }
  if (!e.is_list() || e.empty()) return false;
  if (e[0].is_symbol("_")) {
    if (e.size() < 3) fail(e, "indexed identifier needs an index");
    t.name = sym(e[1], "identifier").name;
    for (std::size_t i = 2; i < e.size(); ++i) {
      if (!e[i].is_atom()) fail(e[i], "invalid index");
      t.indices.push_back(e[i]);
    }
    return true;
  }
  if (e[0].is_symbol("as")) {
    expect_size(e, 3, "as");
    Term inner;
    if (!parse_qual_ident(e[1], inner) || inner.as_sort) fail(e[1], "invalid qualified identifier");
    t.name = inner.name;
    t.indices = inner.indices;
    t.as_sort = parse_sort_impl(e[2]);
    return true;
  }
  return false;
}

std::vector<SortedVar> parse_sorted_vars(const SExpr& e, const char* what) {
  if (!e.is_list()) fail(e, std::string("expected list of ") + what);
  std::vector<SortedVar> out;
  for (const auto& item : e.items()) {
    if (!item.is_list() || item.size() != 2) fail(item, "expected (symbol sort)");
    out.push_back({sym(item[0], "variable name"), parse_sort_impl(item[1])});
  }
  return out;
}

Term parse_term_impl(const SExpr& e, bool allow_at) {
  Term t;
  t.loc.span = e.span();
  if (e.is_atom()) {
    switch (e.atom_kind()) {
      case AtomKind::Symbol:
        t.kind = TermKind::Ident;
        t.name = sym(e, "term").name;
        return t;
      case AtomKind::Keyword:
        fail(e, "keyword is not a term");
      default:
        t.kind = TermKind::Const;
        t.literal = e;
        return t;
    }
  }
  if (e.empty()) fail(e, "empty term");
  const SExpr& head = e[0];
  if (head.is_symbol("_") || head.is_symbol("as")) {
    parse_qual_ident(e, t);
    t.kind = TermKind::Ident;
    return t;
  }
  if (head.is_symbol("let")) {
    expect_size(e, 3, "let");
    const SExpr& binds = list_at(e, 1, "let bindings");
    if (binds.empty()) fail(binds, "let needs at least one binding");
    t.kind = TermKind::Let;
    for (const auto& b : binds.items()) {
      if (!b.is_list() || b.size() != 2) fail(b, "expected (symbol term) binding");
      t.bound.push_back(sym(b[0], "bound variable").name);
      t.args.push_back(parse_term_impl(b[1], allow_at));
    }
    t.args.push_back(parse_term_impl(e[2], allow_at));
    return t;
  }
  if (head.is_symbol("forall") || head.is_symbol("exists")) {
    expect_size(e, 3, "quantifier");
    t.kind = head.is_symbol("forall") ? TermKind::Forall : TermKind::Exists;
    auto vars = parse_sorted_vars(e[1], "bound variables");
    if (vars.empty()) fail(e[1], "quantifier needs at least one variable");
    for (auto& v : vars) {
      t.bound.push_back(v.name.name);
      t.bound_sorts.push_back(v.sort);
    }
    t.args.push_back(parse_term_impl(e[2], allow_at));
    return t;
  }
  if (head.is_symbol("match")) {
    expect_size(e, 3, "match");
    t.kind = TermKind::Match;
    t.args.push_back(parse_term_impl(e[1], allow_at));
    const SExpr& arms = list_at(e, 2, "match cases");
    if (arms.empty()) fail(arms, "match needs at least one case");
    for (const auto& arm : arms.items()) {
      if (!arm.is_list() || arm.size() != 2) fail(arm, "expected (pattern term)");
      const SExpr& p = arm[0];
      if (p.is_atom()) {
        sym(p, "pattern");
      } else {
        if (p.size() < 2) fail(p, "invalid pattern");
        for (const auto& x : p.items()) sym(x, "pattern symbol");
      }
      t.patterns.push_back(p);
      t.args.push_back(parse_term_impl(arm[1], allow_at));
    }
    return t;
  }
  if (head.is_symbol("!")) {
    if (e.size() < 3) fail(e, "annotated term needs attributes");
    t.kind = TermKind::Annotated;
    t.args.push_back(parse_term_impl(e[1], allow_at));
    for (std::size_t i = 2; i < e.size(); ++i) t.term_attrs.push_back(e[i]);
    if (!e[2].is_keyword()) fail(e[2], "expected attribute keyword");
    return t;
  }
  if (head.is_symbol("at") && e.size() == 3 && e[1].is_atom() && e[2].is_atom()) {
    if (!allow_at) fail(e, "'at' is only allowed in annotations");
    t.kind = TermKind::At;
    t.name = sym(e[1], "variable").name;
    t.tag = sym(e[2], "tag").name;
    return t;
  }
  if (head.is_symbol("at") && allow_at) fail(e, "'at' applies to a variable symbol and a tag only");
  if (!parse_qual_ident(head, t)) fail(head, "expected function symbol");
  if (e.size() < 2) fail(e, "application needs arguments");
  t.kind = TermKind::App;
  for (std::size_t i = 1; i < e.size(); ++i) t.args.push_back(parse_term_impl(e[i], allow_at));
  return t;
}

Attribute parse_property(AttrKind kind, const SExpr& value) {
  Attribute a;
  a.kind = kind;
  a.terms.push_back(parse_term_impl(value, true));
  return a;
}

Statement parse_stmt(const SExpr& e, int loop_depth) {
  if (!e.is_list() || e.empty() || !e[0].is_symbol()) fail(e, "expected statement");
  Statement s;
  s.loc.span = e.span();
  std::string head = e[0].symbol_name();
  if (head == "assume") {
    expect_size(e, 2, "assume");
    s.kind = StmtKind::Assume;
    s.cond = parse_term_impl(e[1], false);
  } else if (head == "assign") {
    if (e.size() < 2) fail(e, "assign needs at least one (variable term) pair");
    s.kind = StmtKind::Assign;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < e.size(); ++i) {
      const SExpr& p = e[i];
      if (!p.is_list() || p.size() != 2) fail(p, "expected (variable term)");
      Symbol x = sym(p[0], "variable");
      if (!seen.insert(x.name).second) fail(p[0], "duplicate assign target '" + x.name + "'");
      s.assigns.emplace_back(std::move(x), parse_term_impl(p[1], false));
    }
  } else if (head == "sequence") {
    s.kind = StmtKind::Sequence;
    for (std::size_t i = 1; i < e.size(); ++i) s.children.push_back(parse_stmt(e[i], loop_depth));
  } else if (head == "!") {
    if (e.size() < 3) fail(e, "annotation needs a statement and at least one attribute");
    s.kind = StmtKind::Annotated;
    s.children.push_back(parse_stmt(e[1], loop_depth));
    s.attrs = parse_attributes(e.items(), 2);
  } else if (head == "call") {
    expect_size(e, 4, "call");
    s.kind = StmtKind::Call;
    s.name = sym(e[1], "procedure name");
    for (const auto& a : list_at(e, 2, "argument list").items()) s.args.push_back(parse_term_impl(a, false));
    std::set<std::string> seen;
    for (const auto& o : list_at(e, 3, "output list").items()) {
      Symbol y = sym(o, "output variable");
      if (!seen.insert(y.name).second) fail(o, "duplicate call output '" + y.name + "'");
      s.vars.push_back(std::move(y));
    }
  } else if (head == "return") {
    expect_size(e, 1, "return");
    s.kind = StmtKind::Return;
  } else if (head == "label" || head == "goto") {
    expect_size(e, 2, head.c_str());
    s.kind = head == "label" ? StmtKind::Label : StmtKind::Goto;
    s.name = sym(e[1], "label");
  } else if (head == "if") {
    if (e.size() != 3 && e.size() != 4) fail(e, "if needs a condition and one or two statements");
    s.cond = parse_term_impl(e[1], false);
    if (e.size() == 3 && e[2].is_list() && e[2].size() == 2 && e[2][0].is_symbol("goto")) {
      s.kind = StmtKind::CondGoto;
      s.name = sym(e[2][1], "label");
    } else {
      s.kind = StmtKind::If;
      for (std::size_t i = 2; i < e.size(); ++i) s.children.push_back(parse_stmt(e[i], loop_depth));
    }
  } else if (head == "while") {
    expect_size(e, 3, "while");
    s.kind = StmtKind::While;
    s.cond = parse_term_impl(e[1], false);
    s.children.push_back(parse_stmt(e[2], loop_depth + 1));
  } else if (head == "break" || head == "continue") {
    expect_size(e, 1, head.c_str());
    if (loop_depth == 0) fail(e, "'" + head + "' outside of a loop");
    s.kind = head == "break" ? StmtKind::Break : StmtKind::Continue;
  } else if (head == "havoc") {
    if (e.size() < 2) fail(e, "havoc needs at least one variable");
    s.kind = StmtKind::Havoc;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < e.size(); ++i) {
      Symbol x = sym(e[i], "variable");
      if (!seen.insert(x.name).second) fail(e[i], "duplicate havoc target '" + x.name + "'");
      s.vars.push_back(std::move(x));
    }
  } else if (head == "choice") {
    if (e.size() < 2) fail(e, "choice needs at least one branch");
    s.kind = StmtKind::Choice;
    for (std::size_t i = 1; i < e.size(); ++i) s.children.push_back(parse_stmt(e[i], loop_depth));
  } else {
    fail(e[0], "unknown statement '" + head + "'");
  }
  return s;
}

Procedure parse_signature(const SExpr& name, const SExpr& in, const SExpr& out, const SExpr& local) {
  Procedure p;
  p.name = sym(name, "procedure name");
  p.inputs = parse_sorted_vars(in, "input parameters");
  p.outputs = parse_sorted_vars(out, "output parameters");
  p.locals = parse_sorted_vars(local, "local variables");
  std::set<std::string> seen;
  for (const auto* group : {&p.inputs, &p.outputs, &p.locals})
    for (const auto& v : *group)
      if (!seen.insert(v.name.name).second)
        throw ParseException(
            {"S-SYNTAX", v.name.loc.span, "duplicate parameter '" + v.name.name + "' in '" + p.name.name + "'"});
  return p;
}

DatatypeDec parse_datatype_dec(const SExpr& e) {
  if (!e.is_list() || e.empty()) fail(e, "expected datatype declaration");
  DatatypeDec d;
  const SExpr* ctors = &e;
  if (e[0].is_symbol("par")) {
    expect_size(e, 3, "par");
    for (const auto& p : list_at(e, 1, "sort parameters").items()) d.params.push_back(sym(p, "sort parameter").name);
    ctors = &list_at(e, 2, "constructors");
  }
  if (ctors->empty()) fail(*ctors, "datatype needs a constructor");
  for (const auto& c : ctors->items()) {
    ConstructorDec cd;
    if (c.is_atom()) {
      cd.name = sym(c, "constructor");
    } else {
      if (c.empty()) fail(c, "empty constructor");
      cd.name = sym(c[0], "constructor");
      for (std::size_t i = 1; i < c.size(); ++i) {
        if (!c[i].is_list() || c[i].size() != 2) fail(c[i], "expected (selector sort)");
        cd.selectors.push_back({sym(c[i][0], "selector"), parse_sort_impl(c[i][1])});
      }
    }
    d.constructors.push_back(std::move(cd));
  }
  return d;
}

FunDef parse_fun_dec(const SExpr& name, const SExpr& params, const SExpr& result) {
  FunDef f;
  f.name = sym(name, "function name");
  f.params = parse_sorted_vars(params, "parameters");
  f.result = parse_sort_impl(result);
  return f;
}

SmtCommand parse_smt(const SExpr& e, const std::string& head) {
  SmtCommand c;
  c.loc.span = e.span();
  auto keyword_at = [&](std::size_t i) {
    if (i >= e.size() || !e[i].is_keyword()) fail(i < e.size() ? e[i] : e, "expected keyword");
    return e[i].text();
  };
  if (head == "assert") {
    expect_size(e, 2, "assert");
    c.kind = SmtKind::Assert;
    c.term = parse_term_impl(e[1], false);
  } else if (head == "declare-const") {
    expect_size(e, 3, "declare-const");
    c.kind = SmtKind::DeclareConst;
    c.name = sym(e[1], "constant name");
    c.sort = parse_sort_impl(e[2]);
  } else if (head == "declare-datatype") {
    expect_size(e, 3, "declare-datatype");
    c.kind = SmtKind::DeclareDatatype;
    c.name = sym(e[1], "datatype name");
    c.datatypes.push_back(parse_datatype_dec(e[2]));
    c.sort_decs.emplace_back(c.name, c.datatypes[0].params.size());
  } else if (head == "declare-datatypes") {
    expect_size(e, 3, "declare-datatypes");
    c.kind = SmtKind::DeclareDatatypes;
    for (const auto& d : list_at(e, 1, "sort declarations").items()) {
      if (!d.is_list() || d.size() != 2) fail(d, "expected (name arity)");
      c.sort_decs.emplace_back(sym(d[0], "datatype name"), numeral_value(d[1], "arity"));
    }
    const SExpr& decs = list_at(e, 2, "datatype declarations");
    if (c.sort_decs.empty() || decs.size() != c.sort_decs.size())
      fail(e, "declare-datatypes needs matching non-empty lists");
    for (const auto& d : decs.items()) c.datatypes.push_back(parse_datatype_dec(d));
  } else if (head == "declare-fun") {
    if (e.size() != 3 && e.size() != 4) fail(e, "malformed declare-fun");
    c.kind = SmtKind::DeclareFun;
    c.name = sym(e[1], "function name");
    for (const auto& s : list_at(e, 2, "argument sorts").items()) c.arg_sorts.push_back(parse_sort_impl(s));
    if (e.size() == 4) {
      c.sort = parse_sort_impl(e[3]);
    } else {
      // Short form `(declare-fun f (S1 ... Sn))`: the last sort is the result.
      if (c.arg_sorts.empty()) fail(e, "declare-fun needs a result sort");
      c.sort = c.arg_sorts.back();
      c.arg_sorts.pop_back();
    }
  } else if (head == "declare-sort") {
    if (e.size() != 2 && e.size() != 3) fail(e, "malformed declare-sort");
    c.kind = SmtKind::DeclareSort;
    c.name = sym(e[1], "sort name");
    c.arity = e.size() == 3 ? numeral_value(e[2], "arity") : 0;
  } else if (head == "define-const") {
    expect_size(e, 4, "define-const");
    c.kind = SmtKind::DefineConst;
    c.name = sym(e[1], "constant name");
    c.sort = parse_sort_impl(e[2]);
    c.term = parse_term_impl(e[3], false);
  } else if (head == "define-fun" || head == "define-fun-rec") {
    expect_size(e, 5, head.c_str());
    c.kind = head == "define-fun" ? SmtKind::DefineFun : SmtKind::DefineFunRec;
    FunDef f = parse_fun_dec(e[1], e[2], e[3]);
    f.body = parse_term_impl(e[4], false);
    c.name = f.name;
    c.defs.push_back(std::move(f));
  } else if (head == "define-funs-rec") {
    expect_size(e, 3, "define-funs-rec");
    c.kind = SmtKind::DefineFunsRec;
    const SExpr& decs = list_at(e, 1, "function declarations");
    const SExpr& bodies = list_at(e, 2, "function bodies");
    if (decs.empty() || decs.size() != bodies.size()) fail(e, "define-funs-rec needs matching non-empty lists");
    for (std::size_t i = 0; i < decs.size(); ++i) {
      const SExpr& d = decs[i];
      if (!d.is_list() || d.size() != 3) fail(d, "expected (name (params) sort)");
      FunDef f = parse_fun_dec(d[0], d[1], d[2]);
      f.body = parse_term_impl(bodies[i], false);
      c.defs.push_back(std::move(f));
    }
  } else if (head == "define-sort") {
    expect_size(e, 4, "define-sort");
    c.kind = SmtKind::DefineSort;
    c.name = sym(e[1], "sort name");
    for (const auto& p : list_at(e, 2, "sort parameters").items()) c.sort_params.push_back(sym(p, "sort parameter").name);
    c.sort = parse_sort_impl(e[3]);
  } else if (head == "get-assertions") {
    expect_size(e, 1, "get-assertions");
    c.kind = SmtKind::GetAssertions;
  } else if (head == "get-info" || head == "get-option") {
    expect_size(e, 2, head.c_str());
    c.kind = head == "get-info" ? SmtKind::GetInfo : SmtKind::GetOption;
    c.keyword = keyword_at(1);
  } else if (head == "set-info" || head == "set-option") {
    if (e.size() != 2 && e.size() != 3) fail(e, "malformed " + head);
    c.kind = head == "set-info" ? SmtKind::SetInfo : SmtKind::SetOption;
    c.keyword = keyword_at(1);
    if (e.size() == 3) c.value = e[2];
    if (c.kind == SmtKind::SetOption && !c.value) fail(e, "set-option needs a value");
  } else if (head == "set-logic") {
    expect_size(e, 2, "set-logic");
    c.kind = SmtKind::SetLogic;
    c.name = sym(e[1], "logic");
  } else {
    fail(e[0], "command '" + head + "' is not allowed in SV-LIB scripts");
  }
  return c;
}

bool is_smt_head(const std::string& h) {
  static const std::set<std::string> heads = {
      "assert",      "declare-const", "declare-datatype", "declare-datatypes", "declare-fun",
      "declare-sort", "define-const", "define-fun",       "define-fun-rec",    "define-funs-rec",
      "define-sort", "get-assertions", "get-info",        "get-option",        "set-info",
      "set-logic",   "set-option"};
  return heads.count(h) > 0;
}

std::vector<VarValue> parse_var_values(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<VarValue> out;
  for (std::size_t i = from; i < items.size(); ++i) {
    const SExpr& p = items[i];
    if (!p.is_list() || p.size() != 2) fail(p, "expected (variable value)");
    out.push_back({sym(p[0], "variable"), parse_term_impl(p[1], false)});
  }
  return out;
}

Step parse_step(const SExpr& e) {
  if (!e.is_list() || e.empty() || !e[0].is_symbol()) fail(e, "expected trace step");
  Step s;
  s.loc.span = e.span();
  std::string head = e[0].symbol_name();
  if (head == "init-proc-vars") {
    if (e.size() < 2) fail(e, "init-proc-vars needs a procedure name");
    s.kind = StepKind::InitProcVars;
    s.name = sym(e[1], "procedure name");
    s.values = parse_var_values(e.items(), 2);
  } else if (head == "havoc") {
    s.kind = StepKind::Havoc;
    s.values = parse_var_values(e.items(), 1);
  } else if (head == "choice") {
    expect_size(e, 2, "choice step");
    s.kind = StepKind::Choice;
    s.choice = numeral_value(e[1], "choice index");
  } else if (head == "leap") {
    if (e.size() < 2) fail(e, "leap needs a tag");
    s.kind = StepKind::Leap;
    s.name = sym(e[1], "tag");
    s.values = parse_var_values(e.items(), 2);
  } else {
    fail(e[0], "unknown trace step '" + head + "'");
  }
  return s;
}

TagAttrs parse_tag_attrs(const SExpr& e) {
  if (e.size() < 3) fail(e, "expected tag and at least one attribute");
  return {sym(e[1], "tag"), parse_attributes(e.items(), 2)};
}

}  // namespace

Sort parse_sort(const SExpr& e) { return parse_sort_impl(e); }

Term parse_term(const SExpr& e) { return parse_term_impl(e, true); }

std::vector<Attribute> parse_attributes(const std::vector<SExpr>& items, std::size_t from) {
  std::vector<Attribute> out;
  std::size_t i = from;
  while (i < items.size()) {
    const SExpr& k = items[i];
    if (!k.is_keyword()) fail(k, "expected attribute keyword, got '" + write(k) + "'");
    const std::string& kw = k.text();
    bool has_value = i + 1 < items.size() && !items[i + 1].is_keyword();
    auto need_value = [&]() -> const SExpr& {
      if (!has_value) fail(k, "attribute " + kw + " needs a value");
      return items[i + 1];
    };
    Attribute a;
    std::size_t used = 1;
    if (kw == ":tag" || kw == ":named") {
      a.kind = kw == ":tag" ? AttrKind::Tag : AttrKind::Named;
      a.symbol = sym(need_value(), "tag symbol");
      used = 2;
    } else if (kw == ":check-true" || kw == ":requires" || kw == ":ensures" || kw == ":invariant" ||
               kw == ":decreases") {
      AttrKind kind = kw == ":check-true" ? AttrKind::CheckTrue
                      : kw == ":requires" ? AttrKind::Requires
                      : kw == ":ensures"  ? AttrKind::Ensures
                      : kw == ":invariant" ? AttrKind::Invariant
                                           : AttrKind::Decreases;
      a = parse_property(kind, need_value());
      used = 2;
    } else if (kw == ":decreases-lex") {
      const SExpr& v = need_value();
      if (!v.is_list() || v.empty()) fail(v, ":decreases-lex needs a non-empty list of terms");
      a.kind = AttrKind::DecreasesLex;
      for (const auto& t : v.items()) a.terms.push_back(parse_term_impl(t, true));
      used = 2;
    } else if (kw == ":recurring" || kw == ":not-recurring") {
      if (has_value) fail(items[i + 1], "attribute " + kw + " takes no value");
      a.kind = kw == ":recurring" ? AttrKind::Recurring : AttrKind::NotRecurring;
    } else {
      a.kind = AttrKind::Other;
      a.keyword = kw;
      if (has_value) {
        a.value = items[i + 1];
        used = 2;
      }
    }
    a.loc.span = k.span();
    out.push_back(std::move(a));
    i += used;
  }
  return out;
}

Statement parse_statement(const SExpr& e) { return parse_stmt(e, 0); }

Trace parse_trace(const std::vector<SExpr>& items, std::size_t from, SourceSpan span) {
  Trace t;
  t.loc.span = span;
  std::size_t i = from;
  auto section = [&](const char* name) -> const SExpr& {
    if (i >= items.size() || !items[i].is_list() || items[i].empty() || !items[i][0].is_symbol(name)) {
      SExpr where = i < items.size() ? items[i] : SExpr::list({}, span);
      fail(where, std::string("expected (") + name + " ...) in trace");
    }
    return items[i++];
  };
  const SExpr& model = section("model");
  for (std::size_t k = 1; k < model.size(); ++k) {
    const SExpr& d = model[k];
    if (!d.is_list() || d.empty() || !d[0].is_symbol()) fail(d, "expected model definition");
    std::string h = d[0].symbol_name();
    if (h != "define-fun" && h != "define-fun-rec" && h != "define-funs-rec")
      fail(d, "model entries must be function definitions");
    t.model.push_back(parse_smt(d, h));
  }
  t.init_globals = parse_var_values(section("init-global-vars").items(), 1);
  const SExpr& entry = section("entry-proc");
  expect_size(entry, 2, "entry-proc");
  t.entry_proc = sym(entry[1], "procedure name");
  const SExpr& steps = section("steps");
  for (std::size_t k = 1; k < steps.size(); ++k) t.steps.push_back(parse_step(steps[k]));
  if (i >= items.size()) fail(SExpr::list({}, span), "trace needs a violated property");
  const SExpr& v = items[i++];
  if (v.is_list() && !v.empty() && v[0].is_symbol("incorrect-annotation")) {
    t.violated.annotation = parse_tag_attrs(v);
  } else if (v.is_list() && !v.empty() && v[0].is_symbol("invalid-step")) {
    expect_size(v, 2, "invalid-step");
    t.violated.invalid_step = true;
    t.violated.step = parse_step(v[1]);
  } else {
    fail(v, "expected incorrect-annotation or invalid-step");
  }
  for (; i < items.size(); ++i) {
    const SExpr& u = items[i];
    if (!u.is_list() || u.empty() || !u[0].is_symbol("using-annotation")) fail(u, "expected using-annotation");
    t.using_annotations.push_back(parse_tag_attrs(u));
  }
  return t;
}

Command parse_command(const SExpr& e) {
  if (!e.is_list() || e.empty() || !e[0].is_symbol()) fail(e, "expected command");
  Command c;
  c.loc.span = e.span();
  std::string head = e[0].symbol_name();
  if (head == "declare-var") {
    expect_size(e, 3, "declare-var");
    c.kind = CmdKind::DeclareVar;
    c.name = sym(e[1], "variable name");
    c.sort = parse_sort_impl(e[2]);
  } else if (head == "define-proc") {
    expect_size(e, 6, "define-proc");
    c.kind = CmdKind::DefineProc;
    Procedure p = parse_signature(e[1], e[2], e[3], e[4]);
    p.body = parse_stmt(e[5], 0);
    p.loc.span = e.span();
    c.procs.push_back(std::move(p));
  } else if (head == "define-procs-rec") {
    expect_size(e, 3, "define-procs-rec");
    c.kind = CmdKind::DefineProcsRec;
    const SExpr& sigs = list_at(e, 1, "procedure signatures");
    const SExpr& bodies = list_at(e, 2, "procedure bodies");
    if (sigs.empty() || sigs.size() != bodies.size())
      fail(e, "define-procs-rec needs matching non-empty signature and body lists");
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      const SExpr& s = sigs[i];
      if (!s.is_list() || s.size() != 4) fail(s, "expected (name (in) (out) (local))");
      Procedure p = parse_signature(s[0], s[1], s[2], s[3]);
      p.body = parse_stmt(bodies[i], 0);
      p.loc.span = s.span();
      c.procs.push_back(std::move(p));
    }
  } else if (head == "annotate-tag") {
    if (e.size() < 3) fail(e, "annotate-tag needs a tag and at least one attribute");
    c.kind = CmdKind::AnnotateTag;
    c.name = sym(e[1], "tag");
    c.attrs = parse_attributes(e.items(), 2);
  } else if (head == "select-trace") {
    c.kind = CmdKind::SelectTrace;
    c.trace = parse_trace(e.items(), 1, e.span());
  } else if (head == "verify-call") {
    expect_size(e, 3, "verify-call");
    c.kind = CmdKind::VerifyCall;
    c.name = sym(e[1], "procedure name");
    for (const auto& a : list_at(e, 2, "argument list").items()) c.args.push_back(parse_term_impl(a, false));
  } else if (head == "get-witness") {
    expect_size(e, 1, "get-witness");
    c.kind = CmdKind::GetWitness;
  } else if (is_smt_head(head)) {
    c.kind = CmdKind::Smt;
    c.smt = parse_smt(e, head);
  } else if (head.size() > 5 && head.ends_with("-call")) {
    expect_size(e, 3, head.c_str());
    c.kind = CmdKind::ToolSpecific;
    c.verb = head;
    c.name = sym(e[1], "procedure name");
    for (const auto& a : list_at(e, 2, "argument list").items()) c.args.push_back(parse_term_impl(a, false));
  } else {
    fail(e[0], "unknown or disallowed command '" + head + "'");
  }
  return c;
}

ParseResult parse_script(const std::vector<SExpr>& exprs) {
  ParseResult r;
  for (const auto& e : exprs) {
    try {
      r.script.commands.push_back(parse_command(e));
    } catch (const ParseException& ex) {
      r.errors.push_back(ex.error());
    }
  }
  return r;
}

ParseResult parse_script_text(std::string_view text) {
  try {
    return parse_script(read_all(text));
  } catch (const LexError& ex) {
    ParseResult r;
    r.errors.push_back({"S-SYNTAX", ex.span(), ex.what()});
    return r;
  }
}

Witness parse_witness(const SExpr& e) {
  if (!e.is_list()) fail(e, "a witness is a parenthesized list of commands");
  Witness w;
  bool payload_started = false;
  bool has_correctness = false;
  for (const auto& item : e.items()) {
    if (!item.is_list() || item.empty() || !item[0].is_symbol()) fail(item, "expected witness command");
    std::string head = item[0].symbol_name();
    if (head == "set-info" && !payload_started) {
      w.metadata.push_back(parse_smt(item, head));
      continue;
    }
    payload_started = true;
    if (head == "select-trace") {
      if (has_correctness) fail(item, "witness mixes select-trace with correctness commands");
      w.is_violation = true;
      w.traces.push_back(parse_trace(item.items(), 1, item.span()));
    } else if (head == "annotate-tag") {
      if (w.is_violation) fail(item, "witness mixes select-trace with correctness commands");
      has_correctness = true;
      Command c = parse_command(item);
      w.annotations.push_back({c.name, c.attrs});
    } else if (is_smt_head(head) && !head.starts_with("get-") && !head.starts_with("set-")) {
      if (w.is_violation) fail(item, "witness mixes select-trace with correctness commands");
      if (!w.annotations.empty()) fail(item, "SMT-LIB commands must precede annotate-tag commands");
      has_correctness = true;
      w.smt_commands.push_back(parse_smt(item, head));
    } else {
      fail(item[0], "command '" + head + "' is not allowed in a witness");
    }
  }
  return w;
}

Witness parse_witness_text(std::string_view text) {
  std::vector<SExpr> exprs;
  try {
    exprs = read_all(text);
  } catch (const LexError& ex) {
    throw ParseException({"S-SYNTAX", ex.span(), ex.what()});
  }
  if (exprs.size() != 1) throw ParseException({"S-SYNTAX", {}, "a witness is exactly one parenthesized list"});
  return parse_witness(exprs[0]);
}

Term parse_term_text(std::string_view text) {
  auto exprs = read_all(text);
  if (exprs.size() != 1) throw ParseException({"S-SYNTAX", {}, "expected exactly one term"});
  return parse_term(exprs[0]);
}

Statement parse_statement_text(std::string_view text) {
  auto exprs = read_all(text);
  if (exprs.size() != 1) throw ParseException({"S-SYNTAX", {}, "expected exactly one statement"});
  return parse_statement(exprs[0]);
}

}  // namespace svlib
