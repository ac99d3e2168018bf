#include "svlib/symbols.hpp"

namespace svlib {

SymbolTable::SymbolTable(const Script& script, std::size_t limit) {
  for (std::size_t i = 0; i < script.commands.size() && i < limit; ++i) add(script.commands[i], i);
}

void SymbolTable::add(const Command& c, std::size_t index) {
  switch (c.kind) {
    case CmdKind::DeclareVar:
      if (!globals.count(c.name.name)) {
        globals[c.name.name] = {c.sort, VarClass::Global};
        global_index[c.name.name] = index;
      }
      return;
    case CmdKind::DefineProc:
      add_proc(c.procs[0], index, next_group_++);
      return;
    case CmdKind::DefineProcsRec: {
      int g = next_group_++;
      for (const auto& p : c.procs) add_proc(p, index, g);
      return;
    }
    case CmdKind::AnnotateTag:
      for (const auto& a : c.attrs)
        if (a.kind != AttrKind::Tag) annotations[c.name.name].push_back({&a, index, false});
      return;
    case CmdKind::Smt:
      break;
    default:
      return;
  }
  const SmtCommand& s = c.smt;
  auto declare = [&](const std::string& name, FunInfo info) {
    info.decl_index = index;
    info.command = &s;
    functions.emplace(name, std::move(info));
  };
  switch (s.kind) {
    case SmtKind::Assert:
      asserts.push_back(&s.term);
      break;
    case SmtKind::DeclareConst:
    case SmtKind::DefineConst: {
      FunInfo f;
      f.kind = s.kind == SmtKind::DeclareConst ? FunInfo::Kind::Declared : FunInfo::Kind::Defined;
      f.result = s.sort;
      declare(s.name.name, f);
      break;
    }
    case SmtKind::DeclareFun: {
      FunInfo f;
      f.args = s.arg_sorts;
      f.result = s.sort;
      declare(s.name.name, f);
      break;
    }
    case SmtKind::DefineFun:
    case SmtKind::DefineFunRec:
    case SmtKind::DefineFunsRec:
      for (const auto& d : s.defs) {
        FunInfo f;
        f.kind = FunInfo::Kind::Defined;
        for (const auto& p : d.params) f.args.push_back(p.sort);
        f.result = d.result;
        f.def = &d;
        declare(d.name.name, f);
      }
      break;
    case SmtKind::DeclareSort:
      sorts.emplace(s.name.name, SortInfo{s.arity, index, nullptr, nullptr});
      break;
    case SmtKind::DefineSort:
      sorts.emplace(s.name.name, SortInfo{s.sort_params.size(), index, &s, nullptr});
      break;
    case SmtKind::DeclareDatatype:
    case SmtKind::DeclareDatatypes:
      for (std::size_t k = 0; k < s.sort_decs.size() && k < s.datatypes.size(); ++k) {
        const std::string& dt = s.sort_decs[k].first.name;
        const DatatypeDec& dec = s.datatypes[k];
        sorts.emplace(dt, SortInfo{dec.params.size(), index, nullptr, &dec});
        Sort dsort = Sort::named(dt);
        for (const auto& p : dec.params) dsort.params.push_back(Sort::named(p));
        for (const auto& ctor : dec.constructors) {
          FunInfo f;
          f.kind = FunInfo::Kind::Constructor;
          f.result = dsort;
          f.datatype = dt;
          f.constructor = ctor.name.name;
          f.parametric = !dec.params.empty();
          for (const auto& sel : ctor.selectors) f.args.push_back(sel.sort);
          declare(ctor.name.name, f);
          FunInfo t;
          t.kind = FunInfo::Kind::Tester;
          t.args = {dsort};
          t.result = Sort::named("Bool");
          t.datatype = dt;
          t.constructor = ctor.name.name;
          t.parametric = f.parametric;
          declare("is-" + ctor.name.name, t);
          for (std::size_t j = 0; j < ctor.selectors.size(); ++j) {
            FunInfo sf;
            sf.kind = FunInfo::Kind::Selector;
            sf.args = {dsort};
            sf.result = ctor.selectors[j].sort;
            sf.datatype = dt;
            sf.constructor = ctor.name.name;
            sf.field = j;
            sf.parametric = f.parametric;
            declare(ctor.selectors[j].name.name, sf);
          }
        }
      }
      break;
    case SmtKind::SetLogic:
      if (!logic) logic = s.name.name;
      return;
    default:
      return;
  }
  smt_commands.push_back(&s);
}

void SymbolTable::add_proc(const Procedure& p, std::size_t index, int group) {
  procs.emplace(p.name.name, ProcInfo{&p, index, group});
  collect_tags(p.body, p, index, true);
}

void SymbolTable::collect_tags(const Statement& s, const Procedure& p, std::size_t index, bool top) {
  const Statement* inner = &s;
  if (s.kind == StmtKind::Annotated) {
    inner = &strip_annotations(s);
    for (const auto& t : tags_of(s)) tags[t].push_back({&s, inner, &p, index, top});
  }
  for (const auto& c : inner->children) collect_tags(c, p, index, false);
}

const ProcInfo* SymbolTable::proc(const std::string& name) const {
  auto it = procs.find(name);
  return it == procs.end() ? nullptr : &it->second;
}

const FunInfo* SymbolTable::function(const std::string& name) const {
  auto it = functions.find(name);
  return it == functions.end() ? nullptr : &it->second;
}

Scope SymbolTable::scope_of(const Procedure& p) const {
  Scope scope;
  std::size_t limit = SIZE_MAX;
  if (auto* info = proc(p.name.name)) limit = info->decl_index;
  for (const auto& [name, v] : globals)
    if (global_index.at(name) < limit) scope[name] = v;
  for (const auto& v : p.inputs) scope[v.name.name] = {v.sort, VarClass::Input};
  for (const auto& v : p.outputs) scope[v.name.name] = {v.sort, VarClass::Output};
  for (const auto& v : p.locals) scope[v.name.name] = {v.sort, VarClass::Local};
  return scope;
}

std::vector<const Attribute*> SymbolTable::attributes_of(const std::string& tag) const {
  std::vector<const Attribute*> out;
  auto it = tags.find(tag);
  if (it != tags.end()) {
    for (const auto& site : it->second) {
      std::vector<const Attribute*> attrs;
      strip_annotations(*site.stmt, &attrs);
      for (const auto* a : attrs)
        if (a->kind != AttrKind::Tag) out.push_back(a);
    }
  }
  auto jt = annotations.find(tag);
  if (jt != annotations.end())
    for (const auto& a : jt->second) out.push_back(a.attr);
  return out;
}

std::vector<const Attribute*> SymbolTable::properties_at(const Statement& wrapper) const {
  std::vector<const Attribute*> out, attrs;
  strip_annotations(wrapper, &attrs);
  std::set<std::string> tags_seen;
  for (const auto* a : attrs)
    if (a->kind != AttrKind::Tag) out.push_back(a);
  for (const auto* a : attrs) {
    if (a->kind != AttrKind::Tag || !tags_seen.insert(a->symbol.name).second) continue;
    auto it = annotations.find(a->symbol.name);
    if (it != annotations.end())
      for (const auto& x : it->second) out.push_back(x.attr);
  }
  return out;
}

std::vector<const TagSite*> SymbolTable::sites_in(const std::string& tag, const Procedure& p) const {
  std::vector<const TagSite*> out;
  auto it = tags.find(tag);
  if (it == tags.end()) return out;
  for (const auto& s : it->second)
    if (s.proc == &p) out.push_back(&s);
  return out;
}

namespace {

Sort substitute(const Sort& s, const std::map<std::string, Sort>& sub) {
  if (s.params.empty() && s.indices.empty()) {
    auto it = sub.find(s.name);
    if (it != sub.end()) return it->second;
  }
  Sort out = s;
  for (auto& p : out.params) p = substitute(p, sub);
  return out;
}

}  // namespace

Sort SymbolTable::expand(const Sort& s) const {
  Sort out = s;
  for (auto& p : out.params) p = expand(p);
  for (int depth = 0; depth < 64; ++depth) {
    auto it = sorts.find(out.name);
    if (it == sorts.end() || !it->second.definition) break;
    const SmtCommand& def = *it->second.definition;
    if (def.sort_params.size() != out.params.size()) break;
    std::map<std::string, Sort> sub;
    for (std::size_t i = 0; i < def.sort_params.size(); ++i) sub[def.sort_params[i]] = out.params[i];
    out = substitute(def.sort, sub);
    for (auto& p : out.params) p = expand(p);
  }
  out.loc = {};
  return out;
}

void for_each_statement(const Statement& s, const std::function<void(const Statement&)>& f) {
  f(s);
  for (const auto& c : s.children) for_each_statement(c, f);
}

namespace {

void collect_mods(const Statement& s, const SymbolTable& table, std::set<std::string>& out,
                  std::set<std::string>& visiting);

std::set<std::string> proc_global_mods(const Procedure& p, const SymbolTable& table, std::set<std::string>& visiting) {
  std::set<std::string> mods;
  if (!visiting.insert(p.name.name).second) return mods;
  collect_mods(p.body, table, mods, visiting);
  visiting.erase(p.name.name);
  std::set<std::string> own;
  for (const auto* g : {&p.inputs, &p.outputs, &p.locals})
    for (const auto& v : *g) own.insert(v.name.name);
  std::set<std::string> out;
  for (const auto& m : mods)
    if (!own.count(m) && table.globals.count(m)) out.insert(m);
  return out;
}

void collect_mods(const Statement& s, const SymbolTable& table, std::set<std::string>& out,
                  std::set<std::string>& visiting) {
  for_each_statement(s, [&](const Statement& st) {
    switch (st.kind) {
      case StmtKind::Assign:
        for (const auto& [x, t] : st.assigns) out.insert(x.name);
        break;
      case StmtKind::Havoc:
        for (const auto& x : st.vars) out.insert(x.name);
        break;
      case StmtKind::Call:
        for (const auto& x : st.vars) out.insert(x.name);
        if (const auto* info = table.proc(st.name.name)) {
          auto g = proc_global_mods(*info->proc, table, visiting);
          out.insert(g.begin(), g.end());
        }
        break;
      default:
        break;
    }
  });
}

}  // namespace

std::set<std::string> modified_vars(const Statement& s, const SymbolTable& table) {
  std::set<std::string> out, visiting;
  collect_mods(s, table, out, visiting);
  return out;
}

namespace {

void free_vars_impl(const Term& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto is_bound = [&](const std::string& n) {
    for (const auto& b : bound)
      if (b == n) return true;
    return false;
  };
  switch (t.kind) {
    case TermKind::Const:
      return;
    case TermKind::Ident:
      if (t.indices.empty() && !is_bound(t.name)) out.insert(t.name);
      return;
    case TermKind::At:
      out.insert(t.name);
      return;
    case TermKind::Let: {
      for (std::size_t i = 0; i + 1 < t.args.size(); ++i) free_vars_impl(t.args[i], bound, out);
      std::size_t n = bound.size();
      bound.insert(bound.end(), t.bound.begin(), t.bound.end());
      free_vars_impl(t.body(), bound, out);
      bound.resize(n);
      return;
    }
    case TermKind::Forall:
    case TermKind::Exists: {
      std::size_t n = bound.size();
      bound.insert(bound.end(), t.bound.begin(), t.bound.end());
      free_vars_impl(t.body(), bound, out);
      bound.resize(n);
      return;
    }
    case TermKind::Match: {
      free_vars_impl(t.args[0], bound, out);
      for (std::size_t i = 0; i < t.patterns.size(); ++i) {
        std::size_t n = bound.size();
        const SExpr& p = t.patterns[i];
        if (p.is_atom())
          bound.push_back(p.symbol_name());
        else
          for (std::size_t k = 1; k < p.size(); ++k) bound.push_back(p[k].symbol_name());
        free_vars_impl(t.args[i + 1], bound, out);
        bound.resize(n);
      }
      return;
    }
    case TermKind::App:
    case TermKind::Annotated:
      for (const auto& a : t.args) free_vars_impl(a, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  free_vars_impl(t, bound, out);
  return out;
}

std::set<std::string> function_symbols(const Term& t, const Scope& vars) {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& x) {
    if (x.kind == TermKind::App && !is_builtin_function(x.name) && x.indices.empty()) out.insert(x.name);
    for (const auto& a : x.args) walk(a);
  };
  walk(t);
  for (const auto& v : free_vars(t))
    if (!vars.count(v) && v != "true" && v != "false") out.insert(v);
  return out;
}

}  // namespace svlib
