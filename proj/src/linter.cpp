#include "svlib/linter.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "svlib/cfg.hpp"

namespace svlib {

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> rules = {
      {"S-SYNTAX", Severity::Error, 'S', 'a', "not built according to the syntax"},
      {"S-SMTLIB", Severity::Error, 'S', 'b', "violates a requirement inherited from SMT-LIB"},
      {"S-DECLARE-BEFORE-USE", Severity::Error, 'S', 'c', "function, sort or procedure used before its declaration"},
      {"S-HASH-PREFIX", Severity::Error, 'S', 'd', "symbol starts with the reserved prefix #"},
      {"S-COND-BOOL", Severity::Error, 'S', 'e', "statement condition is not of sort Bool"},
      {"S-PROC-UNIQUE", Severity::Error, 'S', 'f', "procedure name defined twice"},
      {"S-LABEL-UNIQUE", Severity::Error, 'S', 'g', "label defined twice in one procedure"},
      {"S-GOTO-TARGET", Severity::Error, 'S', 'h', "goto target does not exist in the procedure"},
      {"S-SCOPE", Severity::Error, 'S', 'i', "variable not in scope"},
      {"S-TYPE", Severity::Error, 'S', 'j', "ill-typed term, statement or command"},
      {"S-CALL-ARITY", Severity::Error, 'S', 'k', "wrong number of call arguments or receivers"},
      {"S-ASSIGN-INPUT", Severity::Error, 'S', 'l', "assignment to an input parameter or constant"},
      {"F-STRUCTURAL", Severity::Error, 'F', 'a', "script is not structurally well-formed"},
      {"F-ANNOT-SCOPE", Severity::Error, 'F', 'b', "annotation variable not in scope at every tagged location"},
      {"F-FUN-INLINE", Severity::Error, 'F', 'c', "inline annotation uses a function declared after the statement"},
      {"F-FUN-ANNOTATE", Severity::Error, 'F', 'd', "annotate-tag uses a function declared after the command"},
      {"F-PROP-BOOL", Severity::Error, 'F', 'e', "property term is ill-typed or not Bool"},
      {"F-DECREASES-SORT", Severity::Error, 'F', 'f', "ranking term is ill-typed or not Int"},
      {"F-ANNOT-VAR", Severity::Error, 'F', 'g', "annotation variable not in scope at the tag"},
      {"F-AT-RESOLVE", Severity::Error, 'F', 'h', "at reference cannot be resolved"},
      {"F-TAG-LOOP", Severity::Error, 'F', 'i', "procedure body, loop or label lacks a script-unique tag"},
      {"F-TAG-UNIQUE", Severity::Error, 'F', 'j', "annotated statement lacks a script-unique tag"},
      {"W-UNINIT-LOCAL", Severity::Warning, 'W', 'a', "local variable may be read before initialization"},
      {"W-UNINIT-OUTPUT", Severity::Warning, 'W', 'b', "output variable may be uninitialized at return"},
      {"W-NO-VERSION", Severity::Warning, 'W', 'c', "format version not set"},
      {"W-NO-WITNESS-OPT", Severity::Warning, 'W', 'd', "witness production neither enabled nor disabled"},
      {"W-FRAGMENT-MIX", Severity::Warning, 'W', 0, "conditional goto mixed with structured control flow"},
  };
  return rules;
}

const RuleInfo* find_rule(const std::string& id) {
  for (const auto& r : rule_catalog())
    if (id == r.id) return &r;
  return nullptr;
}

Diagnostic to_diagnostic(const ParseError& e) { return {e.rule_id, Severity::Error, e.span, e.message}; }

bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_text(const Diagnostic& d) {
  return std::string(d.severity == Severity::Error ? "error" : "warning") + ":" + d.rule_id + ":" +
         std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " + d.message;
}

std::string format_sexpr(const Diagnostic& d) {
  return write(SExpr::list({SExpr::symbol(d.severity == Severity::Error ? "error" : "warning"), SExpr::symbol(d.rule_id),
                            SExpr::numeral(std::to_string(d.span.line)), SExpr::numeral(std::to_string(d.span.column)),
                            SExpr::string_literal(d.message)}));
}

namespace {

bool reserved(const std::string& name) { return !name.empty() && name[0] == '#'; }

std::optional<std::string> bad_sort(const Sort& s, const SymbolTable& t, std::size_t limit,
                                    const std::vector<std::string>& params = {}) {
  if (s.params.empty() && std::find(params.begin(), params.end(), s.name) != params.end()) return std::nullopt;
  Sort head = s;
  head.params.clear();
  if (auto b = unknown_sort(head, t, limit)) return b;
  for (const auto& p : s.params)
    if (auto b = bad_sort(p, t, limit, params)) return b;
  return std::nullopt;
}

std::string sort_text_of(const Sort& s) {
  if (!s.indices.empty()) {
    std::string out = "(_ " + s.name;
    for (const auto& i : s.indices) out += " " + i.text();
    return out + ")";
  }
  if (s.params.empty()) return s.name;
  std::string out = "(" + s.name;
  for (const auto& p : s.params) out += " " + sort_text_of(p);
  return out + ")";
}

class Structural {
public:
  explicit Structural(const Script& s) : script_(s), table_(s) {}

  std::vector<Diagnostic> run() {
    for (index_ = 0; index_ < script_.commands.size(); ++index_) command(script_.commands[index_]);
    return std::move(ds_);
  }

private:
  const Script& script_;
  SymbolTable table_;
  std::vector<Diagnostic> ds_;
  std::size_t index_ = 0;
  std::set<std::string> funs_, sorts_, globals_, procs_;
  bool logic_set_ = false, other_cmd_ = false;

  void err(const char* rule, const SourceSpan& span, std::string msg) {
    ds_.push_back({rule, Severity::Error, span, std::move(msg)});
  }

  void hash(const std::string& name, const SourceSpan& span) {
    if (reserved(name)) err("S-HASH-PREFIX", span, "symbol '" + name + "' uses the reserved prefix '#'");
  }

  void hash_term(const Term& t) {
    hash(t.name, t.loc.span);
    for (const auto& b : t.bound) hash(b, t.loc.span);
    for (const auto& a : t.args) hash_term(a);
  }

  void sort(const Sort& s, const SourceSpan& span, std::size_t limit, const std::vector<std::string>& params = {}) {
    if (auto b = bad_sort(s, table_, limit, params)) err("S-DECLARE-BEFORE-USE", span, "unknown sort '" + *b + "'");
  }

  std::optional<Sort> term(const Term& t, const Scope* vars, std::size_t fun_limit) {
    hash_term(t);
    TypeEnv env{&table_, vars, fun_limit, nullptr};
    std::vector<TypeIssue> issues;
    auto s = infer_sort(t, env, issues);
    for (const auto& i : issues) {
      switch (i.kind) {
        case IssueKind::UnknownVar: err("S-SCOPE", i.span, i.message); break;
        case IssueKind::UnknownFun:
        case IssueKind::LateFun:
        case IssueKind::UnknownSort: err("S-DECLARE-BEFORE-USE", i.span, i.message); break;
        case IssueKind::Type: err("S-TYPE", i.span, i.message); break;
        default: err("S-SYNTAX", i.span, i.message); break;
      }
    }
    return s;
  }

  void expect(const std::optional<Sort>& got, const Sort& want, const SourceSpan& span, const std::string& what,
              const char* rule = "S-TYPE") {
    if (!got) return;
    Sort w = table_.expand(want);
    if (!same_sort(*got, w)) err(rule, span, what + " has sort " + sort_text_of(*got) + ", expected " + sort_text_of(w));
  }

  void declare_fun(const Symbol& name, const SourceSpan& span) {
    hash(name.name, name.loc.span);
    if (is_builtin_function(name.name) || funs_.count(name.name) || globals_.count(name.name))
      err("S-SMTLIB", span, "symbol '" + name.name + "' is already declared");
  }

  void declare_sort(const Symbol& name, const SourceSpan& span) {
    hash(name.name, name.loc.span);
    static const std::set<std::string> builtin = {"Bool", "Int", "Real", "Array", "String", "BitVec"};
    if (builtin.count(name.name) || sorts_.count(name.name))
      err("S-SMTLIB", span, "sort '" + name.name + "' is already declared");
  }

  void smt(const SmtCommand& c, const SourceSpan& span) {
    if (c.kind == SmtKind::SetLogic) {
      if (logic_set_) err("S-SMTLIB", span, "set-logic may only be used once");
      else if (other_cmd_) err("S-SMTLIB", span, "set-logic must precede all commands except set-info and set-option");
      logic_set_ = true;
      return;
    }
    if (c.kind != SmtKind::SetInfo && c.kind != SmtKind::SetOption) other_cmd_ = true;
    switch (c.kind) {
      case SmtKind::Assert:
        expect(term(c.term, nullptr, index_), Sort::named("Bool"), c.term.loc.span, "asserted term");
        break;
      case SmtKind::DeclareConst:
        declare_fun(c.name, span);
        sort(c.sort, span, index_);
        break;
      case SmtKind::DeclareFun:
        declare_fun(c.name, span);
        for (const auto& a : c.arg_sorts) sort(a, span, index_);
        sort(c.sort, span, index_);
        break;
      case SmtKind::DefineConst:
        declare_fun(c.name, span);
        sort(c.sort, span, index_);
        expect(term(c.term, nullptr, index_), c.sort, c.term.loc.span, "definition of '" + c.name.name + "'");
        break;
      case SmtKind::DefineFun:
      case SmtKind::DefineFunRec:
      case SmtKind::DefineFunsRec: {
        for (const auto& d : c.defs) declare_fun(d.name, span);
        std::size_t limit = c.kind == SmtKind::DefineFun ? index_ : index_ + 1;
        for (const auto& d : c.defs) {
          Scope params;
          for (const auto& p : d.params) {
            hash(p.name.name, p.name.loc.span);
            sort(p.sort, span, index_);
            params[p.name.name] = {p.sort, VarClass::Input};
          }
          sort(d.result, span, index_);
          expect(term(d.body, &params, limit), d.result, d.body.loc.span, "body of '" + d.name.name + "'");
        }
        break;
      }
      case SmtKind::DeclareSort:
        declare_sort(c.name, span);
        break;
      case SmtKind::DefineSort:
        declare_sort(c.name, span);
        sort(c.sort, span, index_, c.sort_params);
        break;
      case SmtKind::DeclareDatatype:
      case SmtKind::DeclareDatatypes:
        for (const auto& [name, arity] : c.sort_decs) declare_sort(name, span);
        for (std::size_t k = 0; k < c.datatypes.size(); ++k)
          for (const auto& ctor : c.datatypes[k].constructors) {
            declare_fun(ctor.name, span);
            for (const auto& sel : ctor.selectors) {
              declare_fun(sel.name, span);
              sort(sel.sort, span, index_ + 1, c.datatypes[k].params);
            }
          }
        break;
      default:
        break;
    }
    switch (c.kind) {
      case SmtKind::DeclareConst:
      case SmtKind::DeclareFun:
      case SmtKind::DefineConst:
        funs_.insert(c.name.name);
        break;
      case SmtKind::DefineFun:
      case SmtKind::DefineFunRec:
      case SmtKind::DefineFunsRec:
        for (const auto& d : c.defs) funs_.insert(d.name.name);
        break;
      case SmtKind::DeclareSort:
      case SmtKind::DefineSort:
        sorts_.insert(c.name.name);
        break;
      case SmtKind::DeclareDatatype:
      case SmtKind::DeclareDatatypes:
        for (const auto& [name, arity] : c.sort_decs) sorts_.insert(name.name);
        for (const auto& dt : c.datatypes)
          for (const auto& ctor : dt.constructors) {
            funs_.insert(ctor.name.name);
            funs_.insert("is-" + ctor.name.name);
            for (const auto& sel : ctor.selectors) funs_.insert(sel.name.name);
          }
        break;
      default:
        break;
    }
  }

  // ---- procedures ----

  struct ProcCtx {
    const Procedure* proc;
    Scope scope;
    std::set<std::string> labels;
    bool rec;
  };

  const Procedure* callee(const Symbol& name, const SourceSpan& span, bool rec) {
    const ProcInfo* info = table_.proc(name.name);
    if (!info) {
      err("S-DECLARE-BEFORE-USE", span, "procedure '" + name.name + "' is not defined");
      return nullptr;
    }
    if (info->decl_index > index_ || (info->decl_index == index_ && !rec)) {
      err("S-DECLARE-BEFORE-USE", span, "procedure '" + name.name + "' is used before its definition");
      return nullptr;
    }
    return info->proc;
  }

  std::optional<Sort> target(const Symbol& x, const ProcCtx& ctx, const char* what) {
    hash(x.name, x.loc.span);
    auto it = ctx.scope.find(x.name);
    if (it != ctx.scope.end()) {
      if (it->second.cls == VarClass::Input) {
        err("S-ASSIGN-INPUT", x.loc.span, "input parameter '" + x.name + "' cannot be " + what);
        return std::nullopt;
      }
      return table_.expand(it->second.sort);
    }
    const FunInfo* f = table_.function(x.name);
    if (f && f->decl_index < index_)
      err("S-ASSIGN-INPUT", x.loc.span, "constant '" + x.name + "' cannot be " + what);
    else
      err("S-SCOPE", x.loc.span, "variable '" + x.name + "' is not in scope");
    return std::nullopt;
  }

  void cond(const Term& c, ProcCtx& ctx) {
    auto s = term(c, &ctx.scope, index_);
    if (s && !s->is("Bool")) err("S-COND-BOOL", c.loc.span, "condition has sort " + sort_text_of(*s) + ", expected Bool");
  }

  void stmt(const Statement& s, ProcCtx& ctx) {
    const SourceSpan& span = s.loc.span;
    switch (s.kind) {
      case StmtKind::Assume:
      case StmtKind::If:
      case StmtKind::While:
        cond(s.cond, ctx);
        break;
      case StmtKind::CondGoto:
        cond(s.cond, ctx);
        [[fallthrough]];
      case StmtKind::Goto:
        hash(s.name.name, s.name.loc.span);
        if (!ctx.labels.count(s.name.name))
          err("S-GOTO-TARGET", span, "label '" + s.name.name + "' does not exist in procedure '" + ctx.proc->name.name + "'");
        break;
      case StmtKind::Assign:
        for (const auto& [x, t] : s.assigns) {
          auto want = target(x, ctx, "assigned");
          auto got = term(t, &ctx.scope, index_);
          if (want) expect(got, *want, t.loc.span, "value assigned to '" + x.name + "'");
        }
        break;
      case StmtKind::Havoc:
        for (const auto& x : s.vars) target(x, ctx, "havoced");
        break;
      case StmtKind::Call: {
        hash(s.name.name, s.name.loc.span);
        std::vector<std::optional<Sort>> args;
        for (const auto& a : s.args) args.push_back(term(a, &ctx.scope, index_));
        std::vector<std::optional<Sort>> outs;
        for (const auto& x : s.vars) outs.push_back(target(x, ctx, "a call receiver"));
        const Procedure* p = callee(s.name, span, ctx.rec);
        if (!p) break;
        if (p->inputs.size() != s.args.size() || p->outputs.size() != s.vars.size()) {
          err("S-CALL-ARITY", span,
              "procedure '" + p->name.name + "' takes " + std::to_string(p->inputs.size()) + " arguments and " +
                  std::to_string(p->outputs.size()) + " receivers, got " + std::to_string(s.args.size()) + " and " +
                  std::to_string(s.vars.size()));
          break;
        }
        for (std::size_t i = 0; i < args.size(); ++i)
          expect(args[i], p->inputs[i].sort, s.args[i].loc.span, "argument " + std::to_string(i + 1));
        for (std::size_t i = 0; i < outs.size(); ++i)
          if (outs[i]) {
            Sort o = table_.expand(p->outputs[i].sort);
            if (!same_sort(*outs[i], o))
              err("S-TYPE", s.vars[i].loc.span,
                  "receiver '" + s.vars[i].name + "' has sort " + sort_text_of(*outs[i]) + ", output has " + sort_text_of(o));
          }
        break;
      }
      case StmtKind::Label:
        hash(s.name.name, s.name.loc.span);
        break;
      case StmtKind::Annotated:
        for (const auto& a : s.attrs)
          if (a.kind == AttrKind::Tag || a.kind == AttrKind::Named) hash(a.symbol.name, a.symbol.loc.span);
        break;
      default:
        break;
    }
    for (const auto& c : s.children) stmt(c, ctx);
  }

  void procedure(const Procedure& p, bool rec, std::set<std::string>& group) {
    hash(p.name.name, p.name.loc.span);
    if (procs_.count(p.name.name) || !group.insert(p.name.name).second)
      err("S-PROC-UNIQUE", p.name.loc.span, "procedure '" + p.name.name + "' is already defined");
    ProcCtx ctx{&p, {}, {}, rec};
    for (const auto& [name, v] : table_.globals)
      if (table_.global_index.at(name) < index_) ctx.scope[name] = v;
    auto add = [&](const std::vector<SortedVar>& vs, VarClass cls) {
      for (const auto& v : vs) {
        hash(v.name.name, v.name.loc.span);
        sort(v.sort, v.name.loc.span, index_);
        ctx.scope[v.name.name] = {v.sort, cls};
      }
    };
    add(p.inputs, VarClass::Input);
    add(p.outputs, VarClass::Output);
    add(p.locals, VarClass::Local);
    for_each_statement(p.body, [&](const Statement& s) {
      if (s.kind == StmtKind::Label && !ctx.labels.insert(s.name.name).second)
        err("S-LABEL-UNIQUE", s.loc.span, "label '" + s.name.name + "' is defined twice in '" + p.name.name + "'");
    });
    stmt(p.body, ctx);
  }

  void command(const Command& c) {
    const SourceSpan& span = c.loc.span;
    if (c.kind != CmdKind::Smt) other_cmd_ = true;
    switch (c.kind) {
      case CmdKind::DeclareVar:
        hash(c.name.name, c.name.loc.span);
        sort(c.sort, span, index_);
        if (globals_.count(c.name.name) || funs_.count(c.name.name) || is_builtin_function(c.name.name))
          err("S-SMTLIB", span, "symbol '" + c.name.name + "' is already declared");
        globals_.insert(c.name.name);
        break;
      case CmdKind::DefineProc:
      case CmdKind::DefineProcsRec: {
        std::set<std::string> group;
        for (const auto& p : c.procs) procedure(p, c.kind == CmdKind::DefineProcsRec, group);
        procs_.insert(group.begin(), group.end());
        break;
      }
      case CmdKind::AnnotateTag:
        hash(c.name.name, c.name.loc.span);
        break;
      case CmdKind::SelectTrace:
        if (c.trace) callee(c.trace->entry_proc, span, false);
        break;
      case CmdKind::VerifyCall: {
        std::vector<std::optional<Sort>> args;
        for (const auto& a : c.args) args.push_back(term(a, nullptr, index_));
        const Procedure* p = callee(c.name, span, false);
        if (!p) break;
        if (p->inputs.size() != c.args.size()) {
          err("S-CALL-ARITY", span,
              "procedure '" + p->name.name + "' takes " + std::to_string(p->inputs.size()) + " arguments, got " +
                  std::to_string(c.args.size()));
          break;
        }
        for (std::size_t i = 0; i < args.size(); ++i)
          expect(args[i], p->inputs[i].sort, c.args[i].loc.span, "argument " + std::to_string(i + 1));
        break;
      }
      case CmdKind::ToolSpecific:
        for (const auto& a : c.args) term(a, nullptr, index_);
        break;
      case CmdKind::Smt:
        smt(c.smt, span);
        break;
      default:
        break;
    }
  }
};

// ---- full well-formedness ----

class Full {
public:
  explicit Full(const Script& s) : script_(s), table_(s) {}

  std::vector<Diagnostic> run() {
    for (std::size_t i = 0; i < script_.commands.size(); ++i) {
      const Command& c = script_.commands[i];
      if (c.kind == CmdKind::DefineProc || c.kind == CmdKind::DefineProcsRec)
        for (const auto& p : c.procs) {
          auto* info = table_.proc(p.name.name);
          if (info && info->proc == &p) walk(p.body, p, i, true);
        }
      else if (c.kind == CmdKind::AnnotateTag)
        annotate(c, i);
    }
    return std::move(ds_);
  }

private:
  const Script& script_;
  SymbolTable table_;
  std::vector<Diagnostic> ds_;

  void err(const char* rule, const SourceSpan& span, std::string msg) {
    ds_.push_back({rule, Severity::Error, span, std::move(msg)});
  }

  bool unique(const std::string& tag) const {
    auto it = table_.tags.find(tag);
    return it != table_.tags.end() && it->second.size() == 1;
  }

  struct Finding {
    const char* rule;
    SourceSpan span;
    std::string message;
    bool var;  // scope finding, aggregated over sites
  };

  /// Checks one property attribute as seen from a statement of `p`.
  std::vector<Finding> check_attr(const Attribute& a, const Procedure& p, std::size_t fun_limit, bool inline_attr) {
    std::vector<Finding> out;
    char cls = property_class(a.kind);
    bool ranking = a.kind == AttrKind::Decreases || a.kind == AttrKind::DecreasesLex;
    if (a.terms.empty()) return out;
    const char* type_rule = ranking ? "F-DECREASES-SORT" : "F-PROP-BOOL";
    const char* fun_rule = inline_attr ? "F-FUN-INLINE" : "F-FUN-ANNOTATE";
    Scope scope = table_.scope_of(p);
    TypeEnv env{&table_, &scope, fun_limit, nullptr};
    env.at = [&](const Term& t, std::vector<TypeIssue>& issues) -> std::optional<Sort> {
      if (table_.sites_in(t.tag, p).empty()) {
        issues.push_back({IssueKind::AtTag, t.loc.span, "tag '" + t.tag + "' does not occur in procedure '" + p.name.name + "'"});
        return std::nullopt;
      }
      auto it = scope.find(t.name);
      if (it == scope.end()) {
        issues.push_back({IssueKind::AtVar, t.loc.span, "variable '" + t.name + "' in at reference is not in scope"});
        return std::nullopt;
      }
      return table_.expand(it->second.sort);
    };
    for (const auto& t : a.terms) {
      std::vector<TypeIssue> issues;
      auto s = infer_sort(t, env, issues);
      for (const auto& i : issues) {
        switch (i.kind) {
          case IssueKind::UnknownVar: out.push_back({"F-ANNOT-VAR", i.span, a.key() + ": " + i.message, true}); break;
          case IssueKind::UnknownFun:
          case IssueKind::LateFun:
          case IssueKind::UnknownSort: out.push_back({fun_rule, i.span, a.key() + ": " + i.message, false}); break;
          case IssueKind::Type: out.push_back({type_rule, i.span, a.key() + ": " + i.message, false}); break;
          case IssueKind::AtTag:
          case IssueKind::AtVar: out.push_back({"F-AT-RESOLVE", i.span, a.key() + ": " + i.message, false}); break;
        }
      }
      if (!s) continue;
      if (cls == 'G' && !s->is("Bool"))
        out.push_back({"F-PROP-BOOL", t.loc.span, a.key() + " term has sort " + sort_text_of(*s) + ", expected Bool", false});
      if (ranking && !s->is("Int"))
        out.push_back({"F-DECREASES-SORT", t.loc.span, a.key() + " term has sort " + sort_text_of(*s) + ", expected Int", false});
    }
    return out;
  }

  void walk(const Statement& s, const Procedure& p, std::size_t index, bool top) {
    const Statement* inner = &s;
    std::vector<const Attribute*> attrs;
    if (s.kind == StmtKind::Annotated) inner = &strip_annotations(s, &attrs);
    bool has_unique = false, has_props = false;
    for (const auto* a : attrs) {
      if (a->kind == AttrKind::Tag) has_unique = has_unique || unique(a->symbol.name);
      else has_props = true;
    }
    for (const auto* a : attrs)
      if (is_property(a->kind))
        for (auto& f : check_attr(*a, p, index, true)) err(f.rule, f.span, f.message);
    bool needs = top || inner->kind == StmtKind::While || inner->kind == StmtKind::Label;
    if (needs && !has_unique) {
      std::string what = top ? "body of procedure '" + p.name.name + "'"
                             : inner->kind == StmtKind::While ? std::string("loop") : "label '" + inner->name.name + "'";
      err("F-TAG-LOOP", s.loc.span, what + " has no script-unique tag");
    } else if (has_props && !has_unique) {
      err("F-TAG-UNIQUE", s.loc.span, "annotated statement has no script-unique tag");
    }
    for (const auto& c : inner->children) walk(c, p, index, false);
  }

  void annotate(const Command& c, std::size_t index) {
    auto it = table_.tags.find(c.name.name);
    if (it == table_.tags.end() || it->second.empty()) return;
    const auto& sites = it->second;
    for (const auto& a : c.attrs) {
      if (!is_property(a.kind)) continue;
      std::map<std::string, std::pair<std::size_t, Finding>> vars;
      std::vector<std::string> order;
      std::set<std::string> seen;
      std::vector<Finding> other;
      for (const auto& site : sites) {
        std::set<std::string> here;
        for (auto& f : check_attr(a, *site.proc, index, false)) {
          if (f.var) {
            if (!here.insert(f.message).second) continue;
            auto [jt, fresh] = vars.try_emplace(f.message, 0, f);
            if (fresh) order.push_back(f.message);
            ++jt->second.first;
          } else if (seen.insert(f.message).second) {
            other.push_back(f);
          }
        }
      }
      for (const auto& m : order) {
        const auto& [count, f] = vars.at(m);
        if (count == sites.size())
          err("F-ANNOT-VAR", f.span, f.message);
        else
          err("F-ANNOT-SCOPE", f.span,
              f.message + " at " + std::to_string(count) + " of " + std::to_string(sites.size()) + " tagged locations");
      }
      for (const auto& f : other) err(f.rule, f.span, f.message);
    }
  }
};

// ---- warnings ----

void uninit(const Procedure& p, std::vector<Diagnostic>& ds) {
  Cfg g = build_cfg(p);
  std::set<std::string> locals, outputs;
  for (const auto& v : p.locals) locals.insert(v.name.name);
  for (const auto& v : p.outputs) outputs.insert(v.name.name);
  std::set<std::string> start = locals;
  start.insert(outputs.begin(), outputs.end());
  for (const auto& v : p.inputs) start.erase(v.name.name);
  const std::size_t n = g.nodes.size();
  std::vector<std::set<std::string>> in(n);
  std::vector<bool> seen(n, false);
  auto transfer = [&](int v) {
    std::set<std::string> out = in[v];
    const CfgNode& node = g.nodes[v];
    if (node.kind == NodeKind::Assign)
      for (const auto& [x, t] : node.stmt->assigns) out.erase(x.name);
    if (node.kind == NodeKind::Havoc || node.kind == NodeKind::Call)
      for (const auto& x : node.stmt->vars) out.erase(x.name);
    return out;
  };
  in[g.entry] = start;
  seen[g.entry] = true;
  std::vector<int> work{g.entry};
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    auto out = transfer(v);
    for (int w : g.nodes[v].succ) {
      std::size_t before = in[w].size();
      in[w].insert(out.begin(), out.end());
      if (!seen[w] || in[w].size() != before) {
        seen[w] = true;
        work.push_back(w);
      }
    }
  }
  std::set<std::string> reported;
  auto reads = [&](const Term& t, const std::set<std::string>& uninit, const SourceSpan& span) {
    for (const auto& x : free_vars(t))
      if (locals.count(x) && uninit.count(x) && reported.insert(x).second)
        ds.push_back({"W-UNINIT-LOCAL", Severity::Warning, t.loc.span.line ? t.loc.span : span,
                      "local variable '" + x + "' may be read before it is initialized"});
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!seen[v]) continue;
    const CfgNode& node = g.nodes[v];
    const SourceSpan span = node.stmt ? node.stmt->loc.span : p.loc.span;
    switch (node.kind) {
      case NodeKind::Assume:
      case NodeKind::Branch:
        reads(*node.cond, in[v], span);
        break;
      case NodeKind::Assign:
        for (const auto& [x, t] : node.stmt->assigns) reads(t, in[v], span);
        break;
      case NodeKind::Call:
        for (const auto& a : node.stmt->args) reads(a, in[v], span);
        break;
      default:
        break;
    }
  }
  if (seen[g.exit])
    for (const auto& o : p.outputs)
      if (in[g.exit].count(o.name.name))
        ds.push_back({"W-UNINIT-OUTPUT", Severity::Warning, o.name.loc.span,
                      "output '" + o.name.name + "' of '" + p.name.name + "' may be uninitialized at return"});
}

}  // namespace

std::vector<Diagnostic> check_structural(const Script& s) { return Structural(s).run(); }

std::vector<Diagnostic> check_full(const Script& s) {
  auto structural = check_structural(s);
  for (const auto& d : structural)
    if (d.severity == Severity::Error)
      return {{"F-STRUCTURAL", Severity::Error, d.span, "script is not structurally well-formed (" + d.rule_id + ")"}};
  return Full(s).run();
}

std::vector<Diagnostic> check_warnings(const Script& s) {
  std::vector<Diagnostic> ds;
  SourceSpan first = s.commands.empty() ? SourceSpan{} : s.commands.front().loc.span;
  bool witness_opt = false, cond_goto = false, structured = false;
  SourceSpan mix_span;
  for (const auto& c : s.commands) {
    if (c.kind == CmdKind::Smt && (c.smt.kind == SmtKind::SetOption || c.smt.kind == SmtKind::SetInfo) &&
        c.smt.keyword == ":produce-witnesses")
      witness_opt = true;
    for (const auto& p : c.procs) {
      uninit(p, ds);
      for_each_statement(p.body, [&](const Statement& st) {
        if (st.kind == StmtKind::CondGoto) {
          if (!cond_goto) mix_span = st.loc.span;
          cond_goto = true;
        }
        if (st.kind == StmtKind::If || st.kind == StmtKind::While || st.kind == StmtKind::Break ||
            st.kind == StmtKind::Continue)
          structured = true;
      });
    }
  }
  if (!s.format_version())
    ds.push_back({"W-NO-VERSION", Severity::Warning, first, "format version is not set with (set-info :format-version ...)"});
  if (!witness_opt)
    ds.push_back({"W-NO-WITNESS-OPT", Severity::Warning, first, "witness production is neither enabled nor disabled explicitly"});
  if (cond_goto && structured)
    ds.push_back({"W-FRAGMENT-MIX", Severity::Warning, mix_span,
                  "conditional goto is used together with structured control flow"});
  return ds;
}

std::vector<Diagnostic> lint(const ParseResult& r) {
  std::vector<Diagnostic> ds;
  for (const auto& e : r.errors) ds.push_back(to_diagnostic(e));
  auto structural = check_structural(r.script);
  ds.insert(ds.end(), structural.begin(), structural.end());
  if (!has_errors(ds)) {
    auto full = Full(r.script).run();
    ds.insert(ds.end(), full.begin(), full.end());
  }
  auto warn = check_warnings(r.script);
  ds.insert(ds.end(), warn.begin(), warn.end());
  return ds;
}

}  // namespace svlib
