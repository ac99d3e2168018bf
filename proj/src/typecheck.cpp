#include <set>

#include "svlib/symbols.hpp"

namespace svlib {

namespace {

const std::set<std::string>& builtins() {
  static const std::set<std::string> names = {
      "true", "false", "not", "and", "or", "xor", "=>", "=", "distinct", "ite",
      "+", "-", "*", "/", "div", "mod", "abs", "<", "<=", ">", ">=",
      "to_real", "to_int", "is_int", "select", "store", "const"};
  return names;
}

bool opaque_symbol(const std::string& n) {
  static const char* prefixes[] = {"bv", "str.", "re.", "fp.", "fp", "seq.", "set.", "int2bv", "bv2nat",
                                   "concat", "extract", "repeat", "zero_extend", "sign_extend",
                                   "rotate_left", "rotate_right", "to_fp", "to_fp_unsigned",
                                   "roundNearest", "RN", "RNE", "RNA", "RTP", "RTN", "RTZ", "ubv_to_int",
                                   "sbv_to_int", "int_to_bv", "char"};
  for (const char* p : prefixes)
    if (n.rfind(p, 0) == 0) return true;
  return false;
}

bool numeric(const Sort& s) { return s.is("Int") || s.is("Real"); }

Sort bool_sort() { return Sort::named("Bool"); }

struct Checker {
  const TypeEnv& env;
  std::vector<TypeIssue>& issues;
  std::vector<std::pair<std::string, std::optional<Sort>>> bound;

  void issue(IssueKind k, const Term& t, std::string msg) { issues.push_back({k, t.loc.span, std::move(msg)}); }

  Sort norm(const Sort& s) const { return env.table ? env.table->expand(s) : s; }

  const FunInfo* lookup(const std::string& name, const Term& t) {
    if (!env.table) return nullptr;
    const FunInfo* f = env.table->function(name);
    if (f && f->decl_index >= env.fun_limit) {
      issue(IssueKind::LateFun, t, "function '" + name + "' is declared later");
      return nullptr;
    }
    return f;
  }

  const std::pair<std::string, std::optional<Sort>>* find_bound(const std::string& n) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == n) return &*it;
    return nullptr;
  }

  void expect(const std::optional<Sort>& got, const Sort& want, const Term& at, const std::string& what) {
    if (got && !same_sort(*got, want))
      issue(IssueKind::Type, at, what + " expects " + sort_name(want) + " but got " + sort_name(*got));
  }

  static std::string sort_name(const Sort& s) {
    std::string out;
    if (!s.indices.empty()) {
      out = "(_ " + s.name;
      for (const auto& i : s.indices) out += " " + i.text();
      return out + ")";
    }
    if (s.params.empty()) return s.name;
    out = "(" + s.name;
    for (const auto& p : s.params) out += " " + sort_name(p);
    return out + ")";
  }

  std::optional<Sort> literal(const Term& t) {
    const SExpr& l = t.literal;
    switch (l.atom_kind()) {
      case AtomKind::Numeral: return Sort::named("Int");
      case AtomKind::Decimal: return Sort::named("Real");
      case AtomKind::String: return Sort::named("String");
      case AtomKind::Hexadecimal:
      case AtomKind::Binary: {
        Sort s = Sort::named("BitVec");
        std::size_t w = (l.text().size() - 2) * (l.atom_kind() == AtomKind::Hexadecimal ? 4 : 1);
        s.indices.push_back(SExpr::numeral(std::to_string(w)));
        return s;
      }
      default: return std::nullopt;
    }
  }

  std::optional<Sort> ident(const Term& t) {
    if (t.as_sort) {
      if (auto* f = env.table ? env.table->function(t.name) : nullptr; f && f->decl_index >= env.fun_limit)
        issue(IssueKind::LateFun, t, "function '" + t.name + "' is declared later");
      return norm(*t.as_sort);
    }
    if (!t.indices.empty()) {
      if (t.name.rfind("bv", 0) == 0 && t.indices.size() == 1) {
        Sort s = Sort::named("BitVec");
        s.indices = t.indices;
        return s;
      }
      return std::nullopt;
    }
    if (auto* b = find_bound(t.name)) return b->second;
    if (env.vars) {
      auto it = env.vars->find(t.name);
      if (it != env.vars->end()) return norm(it->second.sort);
    }
    if (t.name == "true" || t.name == "false") return bool_sort();
    if (env.table) {
      const FunInfo* f = env.table->function(t.name);
      if (f) {
        if (f->decl_index >= env.fun_limit) {
          issue(IssueKind::LateFun, t, "function '" + t.name + "' is declared later");
          return std::nullopt;
        }
        if (!f->args.empty()) {
          issue(IssueKind::Type, t, "function '" + t.name + "' needs " + std::to_string(f->args.size()) + " arguments");
          return std::nullopt;
        }
        if (f->parametric) return std::nullopt;
        return norm(f->result);
      }
    }
    if (opaque_symbol(t.name)) return std::nullopt;
    issue(IssueKind::UnknownVar, t, "unknown symbol '" + t.name + "'");
    return std::nullopt;
  }

  std::optional<Sort> builtin(const Term& t, const std::vector<std::optional<Sort>>& a) {
    const std::string& n = t.name;
    std::size_t k = a.size();
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (k < lo || k > hi) {
        issue(IssueKind::Type, t, "wrong number of arguments to '" + n + "'");
        return false;
      }
      return true;
    };
    auto all = [&](const Sort& s) {
      for (std::size_t i = 0; i < k; ++i) expect(a[i], s, t.args[i], "'" + n + "'");
    };
    auto common = [&]() -> std::optional<Sort> {
      std::optional<Sort> first;
      for (std::size_t i = 0; i < k; ++i) {
        if (!a[i]) continue;
        if (!first)
          first = a[i];
        else if (!same_sort(*first, *a[i]))
          issue(IssueKind::Type, t.args[i], "'" + n + "' arguments have different sorts");
      }
      return first;
    };
    auto arith = [&]() -> std::optional<Sort> {
      auto s = common();
      if (s && !numeric(*s)) {
        issue(IssueKind::Type, t, "'" + n + "' expects numeric arguments");
        return std::nullopt;
      }
      return s;
    };
    if (n == "not") {
      if (arity(1, 1)) all(bool_sort());
      return bool_sort();
    }
    if (n == "and" || n == "or") {
      if (arity(1, SIZE_MAX)) all(bool_sort());
      return bool_sort();
    }
    if (n == "xor" || n == "=>") {
      if (arity(2, SIZE_MAX)) all(bool_sort());
      return bool_sort();
    }
    if (n == "=" || n == "distinct") {
      if (arity(2, SIZE_MAX)) common();
      return bool_sort();
    }
    if (n == "ite") {
      if (!arity(3, 3)) return std::nullopt;
      expect(a[0], bool_sort(), t.args[0], "'ite' condition");
      if (a[1] && a[2] && !same_sort(*a[1], *a[2])) issue(IssueKind::Type, t, "'ite' branches have different sorts");
      return a[1] ? a[1] : a[2];
    }
    if (n == "+" || n == "*" || n == "-") {
      if (!arity(1, SIZE_MAX)) return std::nullopt;
      return arith();
    }
    if (n == "div" || n == "mod") {
      if (arity(2, n == "div" ? SIZE_MAX : 2)) all(Sort::named("Int"));
      return Sort::named("Int");
    }
    if (n == "abs") {
      if (arity(1, 1)) all(Sort::named("Int"));
      return Sort::named("Int");
    }
    if (n == "/") {
      if (arity(2, SIZE_MAX)) all(Sort::named("Real"));
      return Sort::named("Real");
    }
    if (n == "<" || n == "<=" || n == ">" || n == ">=") {
      if (arity(2, SIZE_MAX)) arith();
      return bool_sort();
    }
    if (n == "to_real") {
      if (arity(1, 1)) all(Sort::named("Int"));
      return Sort::named("Real");
    }
    if (n == "to_int" || n == "is_int") {
      if (arity(1, 1)) all(Sort::named("Real"));
      return n == "to_int" ? Sort::named("Int") : bool_sort();
    }
    if (n == "select" || n == "store") {
      if (!arity(n == "select" ? 2 : 3, n == "select" ? 2 : 3)) return std::nullopt;
      if (!a[0]) return std::nullopt;
      if (a[0]->name != "Array" || a[0]->params.size() != 2) {
        issue(IssueKind::Type, t.args[0], "'" + n + "' expects an array");
        return std::nullopt;
      }
      expect(a[1], a[0]->params[0], t.args[1], "array index");
      if (n == "store") {
        expect(a[2], a[0]->params[1], t.args[2], "array element");
        return a[0];
      }
      return a[0]->params[1];
    }
    if (n == "const") {
      if (!t.as_sort) return std::nullopt;
      Sort s = norm(*t.as_sort);
      if (arity(1, 1) && s.name == "Array" && s.params.size() == 2) expect(a[0], s.params[1], t.args[0], "constant array element");
      return s;
    }
    return std::nullopt;
  }

  std::optional<Sort> app(const Term& t) {
    std::vector<std::optional<Sort>> a;
    for (const auto& x : t.args) a.push_back(infer(x));
    if (t.name == "is" && t.indices.size() == 1) {
      const std::string ctor = t.indices[0].symbol_name();
      if (env.table) {
        const FunInfo* f = lookup(ctor, t);
        if (!f && !env.table->function(ctor)) issue(IssueKind::UnknownFun, t, "unknown constructor '" + ctor + "'");
      }
      return bool_sort();
    }
    if (!t.indices.empty()) return std::nullopt;
    if (is_builtin_function(t.name) && !find_bound(t.name)) return builtin(t, a);
    const FunInfo* f = nullptr;
    if (env.table && env.table->function(t.name)) {
      f = lookup(t.name, t);
      if (!f) return std::nullopt;
    }
    if (!f) {
      if (opaque_symbol(t.name)) return std::nullopt;
      if ((env.vars && env.vars->count(t.name)) || find_bound(t.name))
        issue(IssueKind::Type, t, "'" + t.name + "' is not a function");
      else
        issue(IssueKind::UnknownFun, t, "unknown function '" + t.name + "'");
      return std::nullopt;
    }
    if (f->args.size() != a.size()) {
      issue(IssueKind::Type, t,
            "'" + t.name + "' expects " + std::to_string(f->args.size()) + " arguments, got " + std::to_string(a.size()));
      return f->parametric ? std::nullopt : std::optional<Sort>(norm(f->result));
    }
    if (f->parametric) return t.as_sort ? std::optional<Sort>(norm(*t.as_sort)) : std::nullopt;
    for (std::size_t i = 0; i < a.size(); ++i) expect(a[i], norm(f->args[i]), t.args[i], "argument of '" + t.name + "'");
    return norm(f->result);
  }

  std::optional<Sort> infer(const Term& t) {
    switch (t.kind) {
      case TermKind::Const:
        return literal(t);
      case TermKind::Ident:
        return ident(t);
      case TermKind::App:
        return app(t);
      case TermKind::Let: {
        std::vector<std::optional<Sort>> vals;
        for (std::size_t i = 0; i + 1 < t.args.size(); ++i) vals.push_back(infer(t.args[i]));
        std::size_t n = bound.size();
        for (std::size_t i = 0; i < t.bound.size(); ++i) bound.push_back({t.bound[i], vals[i]});
        auto r = infer(t.body());
        bound.resize(n);
        return r;
      }
      case TermKind::Forall:
      case TermKind::Exists: {
        std::size_t n = bound.size();
        for (std::size_t i = 0; i < t.bound.size(); ++i) {
          check_sort_known(t.bound_sorts[i], t);
          bound.push_back({t.bound[i], norm(t.bound_sorts[i])});
        }
        auto r = infer(t.body());
        bound.resize(n);
        expect(r, bool_sort(), t.body(), "quantifier body");
        return bool_sort();
      }
      case TermKind::Match: {
        auto scrut = infer(t.args[0]);
        std::optional<Sort> result;
        for (std::size_t i = 0; i < t.patterns.size(); ++i) {
          std::size_t n = bound.size();
          const SExpr& p = t.patterns[i];
          if (p.is_atom()) {
            const FunInfo* f = env.table ? env.table->function(p.symbol_name()) : nullptr;
            if (!f || f->kind != FunInfo::Kind::Constructor) bound.push_back({p.symbol_name(), scrut});
          } else {
            const FunInfo* f = env.table ? env.table->function(p[0].symbol_name()) : nullptr;
            if (!f || f->kind != FunInfo::Kind::Constructor)
              issue(IssueKind::UnknownFun, t, "unknown constructor '" + p[0].symbol_name() + "'");
            for (std::size_t k = 1; k < p.size(); ++k) {
              std::optional<Sort> s;
              if (f && !f->parametric && k - 1 < f->args.size()) s = norm(f->args[k - 1]);
              bound.push_back({p[k].symbol_name(), s});
            }
          }
          auto r = infer(t.args[i + 1]);
          bound.resize(n);
          if (!result) result = r;
          else if (r && !same_sort(*result, *r)) issue(IssueKind::Type, t.args[i + 1], "match arms have different sorts");
        }
        return result;
      }
      case TermKind::Annotated:
        return infer(t.args[0]);
      case TermKind::At:
        if (!env.at) {
          issue(IssueKind::Type, t, "'at' is only allowed in annotations");
          return std::nullopt;
        }
        return env.at(t, issues);
    }
    return std::nullopt;
  }

  void check_sort_known(const Sort& s, const Term& at) {
    if (!env.table) return;
    if (auto bad = unknown_sort(s, *env.table, env.fun_limit)) issue(IssueKind::UnknownSort, at, "unknown sort '" + *bad + "'");
  }
};

}  // namespace

bool is_builtin_function(const std::string& name) { return builtins().count(name) > 0; }

std::optional<std::string> unknown_sort(const Sort& s, const SymbolTable& table, std::size_t limit) {
  static const std::set<std::string> known = {"Bool", "Int", "Real", "String", "RegLan", "Array", "BitVec",
                                              "FloatingPoint", "RoundingMode", "Float16", "Float32",
                                              "Float64", "Float128", "Seq", "Set"};
  bool ok = known.count(s.name) > 0;
  if (!ok) {
    auto it = table.sorts.find(s.name);
    ok = it != table.sorts.end() && it->second.decl_index < limit;
  }
  if (!ok) return s.name;
  for (const auto& p : s.params)
    if (auto bad = unknown_sort(p, table, limit)) return bad;
  return std::nullopt;
}

bool same_sort(const Sort& a, const Sort& b) { return a == b; }

std::optional<Sort> infer_sort(const Term& t, const TypeEnv& env, std::vector<TypeIssue>& issues) {
  Checker c{env, issues, {}};
  return c.infer(t);
}

}  // namespace svlib
