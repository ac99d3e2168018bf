#include "svlib/printer.hpp"

namespace svlib {

namespace {

SExpr sym(const std::string& name) { return SExpr::symbol(name); }
SExpr sym(const Symbol& s) { return SExpr::symbol(s.name); }

SExpr list(std::vector<SExpr> items) { return SExpr::list(std::move(items)); }

SExpr head_sexpr(const Term& t) {
  SExpr id = sym(t.name);
  if (!t.indices.empty()) {
    std::vector<SExpr> items = {sym("_"), id};
    items.insert(items.end(), t.indices.begin(), t.indices.end());
    id = list(std::move(items));
  }
  if (t.as_sort) id = list({sym("as"), id, to_sexpr(*t.as_sort)});
  return id;
}

SExpr sorted_vars(const std::vector<SortedVar>& vars) {
  std::vector<SExpr> items;
  for (const auto& v : vars) items.push_back(list({sym(v.name), to_sexpr(v.sort)}));
  return list(std::move(items));
}

SExpr var_values(const char* head, const std::vector<VarValue>& values, const Symbol* name = nullptr) {
  std::vector<SExpr> items = {sym(head)};
  if (name) items.push_back(sym(*name));
  for (const auto& v : values) items.push_back(list({sym(v.var), to_sexpr(v.value)}));
  return list(std::move(items));
}

SExpr tag_attrs(const char* head, const TagAttrs& ta) {
  std::vector<SExpr> items = {sym(head), sym(ta.tag)};
  for (const auto& a : ta.attrs) {
    auto parts = to_sexprs(a);
    items.insert(items.end(), parts.begin(), parts.end());
  }
  return list(std::move(items));
}

SExpr datatype_dec(const DatatypeDec& d) {
  std::vector<SExpr> ctors;
  for (const auto& c : d.constructors) {
    std::vector<SExpr> items = {sym(c.name)};
    for (const auto& s : c.selectors) items.push_back(list({sym(s.name), to_sexpr(s.sort)}));
    ctors.push_back(list(std::move(items)));
  }
  SExpr body = list(std::move(ctors));
  if (d.params.empty()) return body;
  std::vector<SExpr> ps;
  for (const auto& p : d.params) ps.push_back(sym(p));
  return list({sym("par"), list(std::move(ps)), body});
}

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

std::string indent_lines(const std::string& text, int indent) {
  std::string out;
  for (char c : text) {
    out += c;
    if (c == '\n') out += pad(indent);
  }
  return out;
}

// First line is unindented; later lines carry absolute indentation.
std::string emit_stmt(const Statement& s, int indent) {
  if (is_leaf(s)) return write(to_sexpr(s));
  std::string out;
  auto children = [&](std::size_t from) {
    for (std::size_t i = from; i < s.children.size(); ++i)
      out += "\n" + pad(indent + 2) + emit_stmt(s.children[i], indent + 2);
  };
  switch (s.kind) {
    case StmtKind::Sequence:
      out = "(sequence";
      children(0);
      break;
    case StmtKind::Choice:
      out = "(choice";
      children(0);
      break;
    case StmtKind::If:
      out = "(if " + term_text(s.cond);
      children(0);
      break;
    case StmtKind::While:
      out = "(while " + term_text(s.cond);
      children(0);
      break;
    case StmtKind::Annotated:
      out = "(! " + emit_stmt(s.inner(), indent + 2) + "\n" + pad(indent + 2) + attrs_text(s.attrs);
      break;
    default:
      return write(to_sexpr(s));
  }
  return out + ")";
}

std::string emit_trace(const Trace& t) {
  std::string out = "(select-trace\n  (model";
  for (const auto& m : t.model) out += "\n    " + write(to_sexpr(m));
  out += ")\n  " + write(var_values("init-global-vars", t.init_globals));
  out += "\n  (entry-proc " + write(sym(t.entry_proc)) + ")";
  out += "\n  (steps";
  for (const auto& s : t.steps) out += "\n    " + write(to_sexpr(s));
  out += ")\n  ";
  if (t.violated.invalid_step)
    out += "(invalid-step " + write(to_sexpr(*t.violated.step)) + ")";
  else
    out += write(tag_attrs("incorrect-annotation", t.violated.annotation));
  for (const auto& u : t.using_annotations) out += "\n  " + write(tag_attrs("using-annotation", u));
  return out + ")";
}

SExpr trace_sexpr(const Trace& t) {
  std::vector<SExpr> model = {sym("model")};
  for (const auto& m : t.model) model.push_back(to_sexpr(m));
  std::vector<SExpr> steps = {sym("steps")};
  for (const auto& s : t.steps) steps.push_back(to_sexpr(s));
  std::vector<SExpr> items = {sym("select-trace"), list(std::move(model)),
                              var_values("init-global-vars", t.init_globals),
                              list({sym("entry-proc"), sym(t.entry_proc)}), list(std::move(steps))};
  if (t.violated.invalid_step)
    items.push_back(list({sym("invalid-step"), to_sexpr(*t.violated.step)}));
  else
    items.push_back(tag_attrs("incorrect-annotation", t.violated.annotation));
  for (const auto& u : t.using_annotations) items.push_back(tag_attrs("using-annotation", u));
  return list(std::move(items));
}

SExpr signature(const Procedure& p) {
  return list({sym(p.name), sorted_vars(p.inputs), sorted_vars(p.outputs), sorted_vars(p.locals)});
}

}  // namespace

SExpr to_sexpr(const Sort& s) {
  SExpr id = sym(s.name);
  if (!s.indices.empty()) {
    std::vector<SExpr> items = {sym("_"), id};
    items.insert(items.end(), s.indices.begin(), s.indices.end());
    id = list(std::move(items));
  }
  if (s.params.empty()) return id;
  std::vector<SExpr> items = {id};
  for (const auto& p : s.params) items.push_back(to_sexpr(p));
  return list(std::move(items));
}

SExpr to_sexpr(const Term& t) {
  switch (t.kind) {
    case TermKind::Const:
      return t.literal;
    case TermKind::Ident:
      return head_sexpr(t);
    case TermKind::App: {
      std::vector<SExpr> items = {head_sexpr(t)};
      for (const auto& a : t.args) items.push_back(to_sexpr(a));
      return list(std::move(items));
    }
    case TermKind::Let: {
      std::vector<SExpr> binds;
      for (std::size_t i = 0; i < t.bound.size(); ++i) binds.push_back(list({sym(t.bound[i]), to_sexpr(t.args[i])}));
      return list({sym("let"), list(std::move(binds)), to_sexpr(t.body())});
    }
    case TermKind::Forall:
    case TermKind::Exists: {
      std::vector<SExpr> vars;
      for (std::size_t i = 0; i < t.bound.size(); ++i) vars.push_back(list({sym(t.bound[i]), to_sexpr(t.bound_sorts[i])}));
      return list({sym(t.kind == TermKind::Forall ? "forall" : "exists"), list(std::move(vars)), to_sexpr(t.body())});
    }
    case TermKind::Match: {
      std::vector<SExpr> arms;
      for (std::size_t i = 0; i < t.patterns.size(); ++i) arms.push_back(list({t.patterns[i], to_sexpr(t.args[i + 1])}));
      return list({sym("match"), to_sexpr(t.args[0]), list(std::move(arms))});
    }
    case TermKind::Annotated: {
      std::vector<SExpr> items = {sym("!"), to_sexpr(t.args[0])};
      items.insert(items.end(), t.term_attrs.begin(), t.term_attrs.end());
      return list(std::move(items));
    }
    case TermKind::At:
      return list({sym("at"), sym(t.name), sym(t.tag)});
  }
  return SExpr();
}

std::vector<SExpr> to_sexprs(const Attribute& a) {
  std::vector<SExpr> out = {SExpr::keyword(a.key())};
  switch (a.kind) {
    case AttrKind::Tag:
    case AttrKind::Named:
      out.push_back(sym(a.symbol));
      break;
    case AttrKind::DecreasesLex: {
      std::vector<SExpr> ts;
      for (const auto& t : a.terms) ts.push_back(to_sexpr(t));
      out.push_back(list(std::move(ts)));
      break;
    }
    case AttrKind::Recurring:
    case AttrKind::NotRecurring:
      break;
    case AttrKind::Other:
      if (a.value) out.push_back(*a.value);
      break;
    default:
      out.push_back(to_sexpr(a.term()));
  }
  return out;
}

SExpr to_sexpr(const Statement& s) {
  auto head = [&](const char* h) { return std::vector<SExpr>{sym(h)}; };
  switch (s.kind) {
    case StmtKind::Assume:
      return list({sym("assume"), to_sexpr(s.cond)});
    case StmtKind::Assign: {
      auto items = head("assign");
      for (const auto& [x, t] : s.assigns) items.push_back(list({sym(x), to_sexpr(t)}));
      return list(std::move(items));
    }
    case StmtKind::Sequence:
    case StmtKind::Choice: {
      auto items = head(s.kind == StmtKind::Sequence ? "sequence" : "choice");
      for (const auto& c : s.children) items.push_back(to_sexpr(c));
      return list(std::move(items));
    }
    case StmtKind::Annotated: {
      auto items = head("!");
      items.push_back(to_sexpr(s.inner()));
      for (const auto& a : s.attrs) {
        auto parts = to_sexprs(a);
        items.insert(items.end(), parts.begin(), parts.end());
      }
      return list(std::move(items));
    }
    case StmtKind::Call: {
      std::vector<SExpr> args, outs;
      for (const auto& a : s.args) args.push_back(to_sexpr(a));
      for (const auto& o : s.vars) outs.push_back(sym(o));
      return list({sym("call"), sym(s.name), list(std::move(args)), list(std::move(outs))});
    }
    case StmtKind::Return:
      return list({sym("return")});
    case StmtKind::Label:
      return list({sym("label"), sym(s.name)});
    case StmtKind::Goto:
      return list({sym("goto"), sym(s.name)});
    case StmtKind::CondGoto:
      return list({sym("if"), to_sexpr(s.cond), list({sym("goto"), sym(s.name)})});
    case StmtKind::If: {
      std::vector<SExpr> items = {sym("if"), to_sexpr(s.cond)};
      for (const auto& c : s.children) items.push_back(to_sexpr(c));
      return list(std::move(items));
    }
    case StmtKind::While:
      return list({sym("while"), to_sexpr(s.cond), to_sexpr(s.body())});
    case StmtKind::Break:
      return list({sym("break")});
    case StmtKind::Continue:
      return list({sym("continue")});
    case StmtKind::Havoc: {
      auto items = head("havoc");
      for (const auto& v : s.vars) items.push_back(sym(v));
      return list(std::move(items));
    }
  }
  return SExpr();
}

SExpr to_sexpr(const SmtCommand& c) {
  std::vector<SExpr> items = {sym(smt_command_name(c.kind))};
  switch (c.kind) {
    case SmtKind::Assert:
      items.push_back(to_sexpr(c.term));
      break;
    case SmtKind::DeclareConst:
      items.push_back(sym(c.name));
      items.push_back(to_sexpr(c.sort));
      break;
    case SmtKind::DeclareDatatype:
      items.push_back(sym(c.name));
      items.push_back(datatype_dec(c.datatypes.at(0)));
      break;
    case SmtKind::DeclareDatatypes: {
      std::vector<SExpr> decs, dts;
      for (const auto& [n, k] : c.sort_decs) decs.push_back(list({sym(n), SExpr::numeral(std::to_string(k))}));
      for (const auto& d : c.datatypes) dts.push_back(datatype_dec(d));
      items.push_back(list(std::move(decs)));
      items.push_back(list(std::move(dts)));
      break;
    }
    case SmtKind::DeclareFun: {
      std::vector<SExpr> args;
      for (const auto& s : c.arg_sorts) args.push_back(to_sexpr(s));
      items.push_back(sym(c.name));
      items.push_back(list(std::move(args)));
      items.push_back(to_sexpr(c.sort));
      break;
    }
    case SmtKind::DeclareSort:
      items.push_back(sym(c.name));
      items.push_back(SExpr::numeral(std::to_string(c.arity)));
      break;
    case SmtKind::DefineConst:
      items.push_back(sym(c.name));
      items.push_back(to_sexpr(c.sort));
      items.push_back(to_sexpr(c.term));
      break;
    case SmtKind::DefineFun:
    case SmtKind::DefineFunRec: {
      const FunDef& f = c.defs.at(0);
      items.push_back(sym(f.name));
      items.push_back(sorted_vars(f.params));
      items.push_back(to_sexpr(f.result));
      items.push_back(to_sexpr(f.body));
      break;
    }
    case SmtKind::DefineFunsRec: {
      std::vector<SExpr> decs, bodies;
      for (const auto& f : c.defs) {
        decs.push_back(list({sym(f.name), sorted_vars(f.params), to_sexpr(f.result)}));
        bodies.push_back(to_sexpr(f.body));
      }
      items.push_back(list(std::move(decs)));
      items.push_back(list(std::move(bodies)));
      break;
    }
    case SmtKind::DefineSort: {
      std::vector<SExpr> ps;
      for (const auto& p : c.sort_params) ps.push_back(sym(p));
      items.push_back(sym(c.name));
      items.push_back(list(std::move(ps)));
      items.push_back(to_sexpr(c.sort));
      break;
    }
    case SmtKind::GetAssertions:
      break;
    case SmtKind::GetInfo:
    case SmtKind::GetOption:
    case SmtKind::SetInfo:
    case SmtKind::SetOption:
      items.push_back(SExpr::keyword(c.keyword));
      if (c.value) items.push_back(*c.value);
      break;
    case SmtKind::SetLogic:
      items.push_back(sym(c.name));
      break;
  }
  return list(std::move(items));
}

SExpr to_sexpr(const Step& s) {
  switch (s.kind) {
    case StepKind::InitProcVars:
      return var_values("init-proc-vars", s.values, &s.name);
    case StepKind::Havoc:
      return var_values("havoc", s.values);
    case StepKind::Choice:
      return list({sym("choice"), SExpr::numeral(std::to_string(s.choice))});
    case StepKind::Leap:
      return var_values("leap", s.values, &s.name);
  }
  return SExpr();
}

SExpr to_sexpr(const Command& c) {
  switch (c.kind) {
    case CmdKind::DeclareVar:
      return list({sym("declare-var"), sym(c.name), to_sexpr(c.sort)});
    case CmdKind::DefineProc: {
      const Procedure& p = c.procs.at(0);
      return list({sym("define-proc"), sym(p.name), sorted_vars(p.inputs), sorted_vars(p.outputs),
                   sorted_vars(p.locals), to_sexpr(p.body)});
    }
    case CmdKind::DefineProcsRec: {
      std::vector<SExpr> sigs, bodies;
      for (const auto& p : c.procs) {
        sigs.push_back(signature(p));
        bodies.push_back(to_sexpr(p.body));
      }
      return list({sym("define-procs-rec"), list(std::move(sigs)), list(std::move(bodies))});
    }
    case CmdKind::AnnotateTag:
      return tag_attrs("annotate-tag", {c.name, c.attrs});
    case CmdKind::SelectTrace:
      return trace_sexpr(*c.trace);
    case CmdKind::VerifyCall:
    case CmdKind::ToolSpecific: {
      std::vector<SExpr> args;
      for (const auto& a : c.args) args.push_back(to_sexpr(a));
      return list({sym(c.kind == CmdKind::VerifyCall ? "verify-call" : c.verb), sym(c.name), list(std::move(args))});
    }
    case CmdKind::GetWitness:
      return list({sym("get-witness")});
    case CmdKind::Smt:
      return to_sexpr(c.smt);
  }
  return SExpr();
}

std::string term_text(const Term& t) { return write(to_sexpr(t)); }
std::string sort_text(const Sort& s) { return write(to_sexpr(s)); }

std::string attrs_text(const std::vector<Attribute>& attrs) {
  std::string out;
  for (const auto& a : attrs)
    for (const auto& part : to_sexprs(a)) {
      if (!out.empty()) out += ' ';
      out += write(part);
    }
  return out;
}

std::string print_statement(const Statement& s, int indent) { return emit_stmt(s, indent); }

std::string print_command(const Command& c, int indent) {
  std::string text;
  switch (c.kind) {
    case CmdKind::DefineProc: {
      const Procedure& p = c.procs.at(0);
      text = "(define-proc " + write(sym(p.name)) + " " + write(sorted_vars(p.inputs)) + " " +
             write(sorted_vars(p.outputs)) + " " + write(sorted_vars(p.locals)) + "\n  " + emit_stmt(p.body, 2) + ")";
      break;
    }
    case CmdKind::DefineProcsRec: {
      text = "(define-procs-rec\n  (";
      for (std::size_t i = 0; i < c.procs.size(); ++i)
        text += (i ? "\n   " : "") + write(signature(c.procs[i]));
      text += ")\n  (";
      for (std::size_t i = 0; i < c.procs.size(); ++i)
        text += (i ? "\n   " : "") + emit_stmt(c.procs[i].body, 3);
      text += "))";
      break;
    }
    case CmdKind::SelectTrace:
      text = emit_trace(*c.trace);
      break;
    default:
      text = write(to_sexpr(c));
  }
  return indent ? indent_lines(text, indent) : text;
}

std::string print_script(const Script& s) {
  std::string out;
  for (const auto& c : s.commands) out += print_command(c) + "\n";
  return out;
}

std::string print_witness(const Witness& w) {
  std::vector<std::string> lines;
  for (const auto& m : w.metadata) lines.push_back(write(to_sexpr(m)));
  for (const auto& m : w.smt_commands) lines.push_back(write(to_sexpr(m)));
  for (const auto& a : w.annotations) lines.push_back(write(tag_attrs("annotate-tag", a)));
  for (const auto& t : w.traces) lines.push_back(indent_lines(emit_trace(t), 2));
  if (lines.empty()) return "()";
  std::string out = "(";
  for (const auto& l : lines) out += "\n  " + l;
  return out + "\n)";
}

}  // namespace svlib
