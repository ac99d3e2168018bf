#include "svlib/interpreter.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "svlib/cfg.hpp"
#include "svlib/printer.hpp"

namespace svlib {

Model Model::from(const std::vector<SmtCommand>& commands) {
  Model m;
  for (const auto& c : commands)
    for (const auto& d : c.defs) m.funs[d.name.name] = &d;
  return m;
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::ViolationConfirmed: return "violation-confirmed";
    case VerdictKind::StepInvalid: return "step-invalid";
    case VerdictKind::ViolationNotReached: return "violation-not-reached";
    case VerdictKind::FuelExhausted: return "fuel-exhausted";
    case VerdictKind::Unsupported: return "unsupported";
  }
  return "";
}

namespace {

[[noreturn]] void unsupported(const std::string& msg) { throw EvalError(EvalError::Kind::Unsupported, msg); }

mpq_class parse_decimal(const std::string& text) {
  auto dot = text.find('.');
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  mpz_class num(digits), den(1);
  for (std::size_t k = dot + 1; k < text.size(); ++k) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

struct Evaluator {
  const EvalContext& ctx;
  std::vector<std::pair<std::string, Value>> bound;
  int depth = 0;

  const Value* find_bound(const std::string& n) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == n) return &it->second;
    return nullptr;
  }

  Value call_def(const FunDef& d, std::vector<Value> args) {
    if (args.size() != d.params.size()) unsupported("wrong number of arguments to '" + d.name.name + "'");
    if (depth > 2000) unsupported("recursion too deep in '" + d.name.name + "'");
    EvalContext inner{ctx.table, ctx.model, nullptr, nullptr, nullptr, nullptr};
    Evaluator e{inner, {}, depth + 1};
    for (std::size_t k = 0; k < args.size(); ++k) e.bound.push_back({d.params[k].name.name, std::move(args[k])});
    return e.eval(d.body);
  }

  std::optional<Value> from_model(const std::string& name, const std::vector<Value>& args) {
    if (!ctx.model) return std::nullopt;
    auto it = ctx.model->funs.find(name);
    if (it == ctx.model->funs.end()) return std::nullopt;
    return call_def(*it->second, args);
  }

  Value variable(const std::string& name) {
    if (ctx.local_names && ctx.local_names->count(name)) {
      if (ctx.locals) {
        auto it = ctx.locals->find(name);
        if (it != ctx.locals->end()) return it->second;
      }
      if (auto v = from_model(name, {})) return *v;
      throw EvalError(EvalError::Kind::Undefined, "variable '" + name + "' is read before it is assigned", name);
    }
    if (ctx.globals) {
      auto it = ctx.globals->find(name);
      if (it != ctx.globals->end()) return it->second;
    }
    if (ctx.table && ctx.table->globals.count(name)) {
      if (auto v = from_model(name, {})) return *v;
      throw EvalError(EvalError::Kind::Undefined, "global '" + name + "' is read before it is assigned", name);
    }
    return function(name, nullptr, {});
  }

  Value function(const std::string& name, const Term* t, std::vector<Value> args) {
    const FunInfo* f = ctx.table ? ctx.table->function(name) : nullptr;
    if (f) {
      switch (f->kind) {
        case FunInfo::Kind::Defined:
          if (f->def) return call_def(*f->def, std::move(args));
          if (f->command && args.empty()) {
            EvalContext inner{ctx.table, ctx.model, nullptr, nullptr, nullptr, nullptr};
            return Evaluator{inner, {}, depth + 1}.eval(f->command->term);
          }
          break;
        case FunInfo::Kind::Declared:
          if (auto v = from_model(name, args)) return *v;
          throw EvalError(EvalError::Kind::Undefined, "no interpretation for '" + name + "'", name);
        case FunInfo::Kind::Constructor:
          return Value::datatype(f->constructor, std::move(args), f->parametric ? std::nullopt : std::optional<Sort>(f->result));
        case FunInfo::Kind::Selector:
          if (args.size() == 1 && args[0].kind == Value::Kind::Datatype) {
            if (args[0].name == f->constructor && f->field < args[0].args.size()) return args[0].args[f->field];
            if (auto v = from_model(name, args)) return *v;
            throw EvalError(EvalError::Kind::Underspecified, "selector '" + name + "' applied to another constructor");
          }
          break;
        case FunInfo::Kind::Tester:
          if (args.size() == 1 && args[0].kind == Value::Kind::Datatype) return Value::boolean(args[0].name == f->constructor);
          break;
      }
    }
    if (auto v = from_model(name, args)) return *v;
    (void)t;
    unsupported("cannot evaluate '" + name + "'");
  }

  static const mpz_class& int_of(const Value& v, const std::string& op) {
    if (v.kind != Value::Kind::Int) unsupported("'" + op + "' expects integers");
    return v.i;
  }

  static bool bool_of(const Value& v, const std::string& op) {
    if (v.kind != Value::Kind::Bool) unsupported("'" + op + "' expects Booleans");
    return v.b;
  }

  static mpq_class num_of(const Value& v, const std::string& op) {
    if (v.kind == Value::Kind::Int) return mpq_class(v.i);
    if (v.kind == Value::Kind::Real) return v.q;
    unsupported("'" + op + "' expects numbers");
  }

  Value arith(const std::string& op, const std::vector<Value>& a) {
    bool real = std::any_of(a.begin(), a.end(), [](const Value& v) { return v.kind == Value::Kind::Real; });
    if (!real) {
      mpz_class r = int_of(a[0], op);
      if (op == "-" && a.size() == 1) return Value::integer(-r);
      for (std::size_t k = 1; k < a.size(); ++k) {
        const mpz_class& x = int_of(a[k], op);
        if (op == "+") r += x;
        else if (op == "-") r -= x;
        else r *= x;
      }
      return Value::integer(r);
    }
    mpq_class r = num_of(a[0], op);
    if (op == "-" && a.size() == 1) return Value::real(-r);
    for (std::size_t k = 1; k < a.size(); ++k) {
      mpq_class x = num_of(a[k], op);
      if (op == "+") r += x;
      else if (op == "-") r -= x;
      else r *= x;
    }
    return Value::real(r);
  }

  static void euclid(const mpz_class& a, const mpz_class& b, mpz_class& q, mpz_class& r) {
    if (b == 0) throw EvalError(EvalError::Kind::Underspecified, "division by zero");
    mpz_class ab = abs(b);
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), ab.get_mpz_t());
    q = (a - r) / b;
  }

  Value builtin(const Term& t, const std::string& n) {
    if (n == "ite") {
      return bool_of(eval(t.args[0]), n) ? eval(t.args[1]) : eval(t.args[2]);
    }
    if (n == "and" || n == "or") {
      bool is_and = n == "and";
      for (const auto& x : t.args)
        if (bool_of(eval(x), n) != is_and) return Value::boolean(!is_and);
      return Value::boolean(is_and);
    }
    if (n == "=>") {
      std::vector<bool> v;
      for (const auto& x : t.args) v.push_back(bool_of(eval(x), n));
      bool r = v.back();
      for (std::size_t k = v.size() - 1; k-- > 0;) r = !v[k] || r;
      return Value::boolean(r);
    }
    std::vector<Value> a;
    for (const auto& x : t.args) a.push_back(eval(x));
    if (n == "not") return Value::boolean(!bool_of(a.at(0), n));
    if (n == "xor") {
      bool r = false;
      for (const auto& v : a) r ^= bool_of(v, n);
      return Value::boolean(r);
    }
    if (n == "=") {
      for (std::size_t k = 1; k < a.size(); ++k) {
        if (a[k].kind == Value::Kind::Opaque || a[0].kind == Value::Kind::Opaque)
          if (!(a[k] == a[0])) unsupported("cannot compare uninterpreted values");
        if (!(a[k] == a[0])) return Value::boolean(false);
      }
      return Value::boolean(true);
    }
    if (n == "distinct") {
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
          if (a[i] == a[j]) return Value::boolean(false);
      return Value::boolean(true);
    }
    if (n == "+" || n == "-" || n == "*") return arith(n, a);
    if (n == "div" || n == "mod") {
      mpz_class r = int_of(a[0], n);
      for (std::size_t k = 1; k < a.size(); ++k) {
        mpz_class q, m;
        euclid(r, int_of(a[k], n), q, m);
        r = n == "div" ? q : m;
      }
      return Value::integer(r);
    }
    if (n == "abs") return Value::integer(abs(int_of(a[0], n)));
    if (n == "/") {
      mpq_class r = num_of(a[0], n);
      for (std::size_t k = 1; k < a.size(); ++k) {
        mpq_class x = num_of(a[k], n);
        if (x == 0) throw EvalError(EvalError::Kind::Underspecified, "division by zero");
        r /= x;
      }
      return Value::real(r);
    }
    if (n == "<" || n == "<=" || n == ">" || n == ">=") {
      for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        int c = cmp(num_of(a[k], n), num_of(a[k + 1], n));
        bool ok = n == "<" ? c < 0 : n == "<=" ? c <= 0 : n == ">" ? c > 0 : c >= 0;
        if (!ok) return Value::boolean(false);
      }
      return Value::boolean(true);
    }
    if (n == "to_real") return Value::real(num_of(a[0], n));
    if (n == "to_int") {
      mpq_class q = num_of(a[0], n);
      mpz_class r;
      mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      return Value::integer(r);
    }
    if (n == "is_int") return Value::boolean(num_of(a[0], n).get_den() == 1);
    if (n == "select") {
      if (a[0].kind != Value::Kind::Array) unsupported("'select' expects an array");
      return a[0].select(a[1]);
    }
    if (n == "store") {
      if (a[0].kind != Value::Kind::Array) unsupported("'store' expects an array");
      return a[0].store(a[1], a[2]);
    }
    if (n == "const" && t.as_sort) return Value::array(a.at(0), ctx.table ? ctx.table->expand(*t.as_sort) : *t.as_sort);
    unsupported("cannot evaluate '" + n + "'");
  }

  Value eval(const Term& t) {
    switch (t.kind) {
      case TermKind::Const:
        switch (t.literal.atom_kind()) {
          case AtomKind::Numeral: return Value::integer(mpz_class(t.literal.text()));
          case AtomKind::Decimal: return Value::real(parse_decimal(t.literal.text()));
          default: return Value::opaque(t.literal.text());
        }
      case TermKind::Ident: {
        if (!t.indices.empty()) unsupported("cannot evaluate indexed identifier '" + t.name + "'");
        if (auto* b = find_bound(t.name)) return *b;
        if (!t.as_sort && (t.name == "true" || t.name == "false")) return Value::boolean(t.name == "true");
        if (t.as_sort) return function(t.name, &t, {});
        return variable(t.name);
      }
      case TermKind::At: {
        if (!ctx.snapshots) unsupported("'at' is not available here");
        auto it = ctx.snapshots->find(t.tag);
        if (it == ctx.snapshots->end())
          throw EvalError(EvalError::Kind::Undefined, "tag '" + t.tag + "' has not been visited", t.name);
        auto jt = it->second.find(t.name);
        if (jt == it->second.end())
          throw EvalError(EvalError::Kind::Undefined, "variable '" + t.name + "' was undefined at tag '" + t.tag + "'", t.name);
        return jt->second;
      }
      case TermKind::App: {
        if (t.name == "is" && t.indices.size() == 1) {
          Value v = eval(t.args.at(0));
          if (v.kind != Value::Kind::Datatype) unsupported("tester expects a datatype value");
          return Value::boolean(v.name == t.indices[0].symbol_name());
        }
        if (!t.indices.empty()) unsupported("cannot evaluate indexed function '" + t.name + "'");
        if (is_builtin_function(t.name) && !find_bound(t.name)) return builtin(t, t.name);
        std::vector<Value> args;
        for (const auto& x : t.args) args.push_back(eval(x));
        return function(t.name, &t, std::move(args));
      }
      case TermKind::Let: {
        std::vector<Value> vals;
        for (std::size_t k = 0; k + 1 < t.args.size(); ++k) vals.push_back(eval(t.args[k]));
        std::size_t n = bound.size();
        for (std::size_t k = 0; k < vals.size(); ++k) bound.push_back({t.bound[k], std::move(vals[k])});
        Value r = eval(t.body());
        bound.resize(n);
        return r;
      }
      case TermKind::Forall:
      case TermKind::Exists:
        unsupported("quantifiers cannot be evaluated concretely");
      case TermKind::Match: {
        Value v = eval(t.args[0]);
        for (std::size_t k = 0; k < t.patterns.size(); ++k) {
          const SExpr& p = t.patterns[k];
          std::size_t n = bound.size();
          if (p.is_atom()) {
            const FunInfo* f = ctx.table ? ctx.table->function(p.symbol_name()) : nullptr;
            if (f && f->kind == FunInfo::Kind::Constructor) {
              if (v.kind != Value::Kind::Datatype || v.name != p.symbol_name()) continue;
            } else {
              bound.push_back({p.symbol_name(), v});
            }
          } else {
            if (v.kind != Value::Kind::Datatype || v.name != p[0].symbol_name()) continue;
            for (std::size_t j = 1; j < p.size() && j - 1 < v.args.size(); ++j) bound.push_back({p[j].symbol_name(), v.args[j - 1]});
          }
          Value r = eval(t.args[k + 1]);
          bound.resize(n);
          return r;
        }
        throw EvalError(EvalError::Kind::Underspecified, "no match case applies");
      }
      case TermKind::Annotated:
        return eval(t.args[0]);
    }
    unsupported("cannot evaluate term");
  }
};

// ---- execution ----

struct Stop {
  TraceVerdict verdict;
};

struct ConcreteStop {
  ConcreteStatus status;
  std::string reason;
};

class Machine {
public:
  Machine(const Script& script, std::size_t limit, const Trace* trace, const RunOptions& opt)
      : table_(script, limit), trace_(trace), opt_(opt), fuel_(opt.fuel) {
    if (trace_) model_ = Model::from(trace_->model);
  }

  TraceVerdict replay(const Command& call) {
    try {
      setup_claim();
      check_model();
      for (const auto& g : trace_->init_globals) {
        if (!table_.globals.count(g.var.name)) invalid_setup("'" + g.var.name + "' is not a global variable");
        globals_[g.var.name] = ground(g.value, "initial value of '" + g.var.name + "'");
      }
      if (trace_->entry_proc.name != call.name.name)
        not_reached("trace enters '" + trace_->entry_proc.name + "' but the verified procedure is '" + call.name.name + "'");
      const ProcInfo* info = table_.proc(call.name.name);
      if (!info) not_reached("procedure '" + call.name.name + "' is not defined");
      std::vector<Value> args;
      for (const auto& a : call.args) args.push_back(ground(a, "verify-call argument"));
      push(*info->proc, std::move(args), nullptr);
      run();
      if (cursor_ < trace_->steps.size()) invalid_step("execution ended before this step could be taken");
      not_reached(lasso_ ? "the lasso head was not reached after the stem" : "the claimed violation was not observed");
    } catch (Stop& s) {
      if (!frames_.empty()) s.verdict.locals = frames_.back().env;
      s.verdict.globals = globals_;
      s.verdict.warnings = warnings_;
      return s.verdict;
    }
  }

  ConcreteResult concrete(const std::string& proc, std::vector<Value> inputs, const Env& globals) {
    ConcreteResult r;
    globals_ = globals;
    try {
      const ProcInfo* info = table_.proc(proc);
      if (!info) throw ConcreteStop{ConcreteStatus::Error, "procedure '" + proc + "' is not defined"};
      if (info->proc->inputs.size() != inputs.size()) throw ConcreteStop{ConcreteStatus::Error, "wrong number of inputs"};
      push(*info->proc, std::move(inputs), nullptr);
      run();
      r.status = ConcreteStatus::Returned;
      r.locals = final_env_;
    } catch (ConcreteStop& s) {
      r.status = s.status;
      r.reason = s.reason;
      if (!frames_.empty()) r.locals = frames_.back().env;
    } catch (Stop& s) {
      r.status = s.verdict.kind == VerdictKind::FuelExhausted ? ConcreteStatus::FuelExhausted : ConcreteStatus::Error;
      r.reason = s.verdict.reason;
      if (s.verdict.kind == VerdictKind::ViolationNotReached) r.status = ConcreteStatus::AssumeFailed;
    }
    r.globals = globals_;
    return r;
  }

private:
  struct Frame {
    const Procedure* proc = nullptr;
    const Cfg* cfg = nullptr;
    const std::set<std::string>* names = nullptr;
    int node = 0;
    int prev = -1;
    Env env;
    std::map<std::string, Env> snaps;
    const Statement* call = nullptr;  // the caller's call statement
    std::map<int, std::vector<Value>> ranks;
    std::optional<std::vector<Value>> top_rank;
  };

  SymbolTable table_;
  const Trace* trace_;
  const RunOptions& opt_;
  Model model_;
  std::uint64_t fuel_;
  std::map<const Procedure*, std::unique_ptr<Cfg>> cfgs_;
  std::map<const Procedure*, std::set<std::string>> names_;
  std::vector<Frame> frames_;
  Env globals_;
  Env final_env_;
  std::size_t cursor_ = 0;
  std::vector<std::string> warnings_;

  std::string claim_tag_;
  std::vector<const Attribute*> claims_;  // the script's attributes matching the claim
  std::vector<Attribute> claim_attrs_;
  std::set<const Attribute*> falsified_;
  bool lasso_ = false;
  std::map<std::string, std::vector<const Attribute*>> using_;

  // ---- verdicts ----

  [[noreturn]] void not_reached(const std::string& why) {
    TraceVerdict v;
    v.kind = VerdictKind::ViolationNotReached;
    v.reason = why;
    throw Stop{v};
  }

  [[noreturn]] void invalid_step(const std::string& why) {
    if (!trace_) throw ConcreteStop{ConcreteStatus::Error, why};
    TraceVerdict v;
    v.kind = VerdictKind::StepInvalid;
    v.step_index = cursor_;
    if (cursor_ < trace_->steps.size()) v.step = trace_->steps[cursor_];
    v.reason = why;
    throw Stop{v};
  }

  [[noreturn]] void invalid_setup(const std::string& why) {
    TraceVerdict v;
    v.kind = VerdictKind::StepInvalid;
    v.step_index = 0;
    v.reason = why;
    throw Stop{v};
  }

  [[noreturn]] void unsupported_run(const std::string& why) {
    if (!trace_) throw ConcreteStop{ConcreteStatus::Error, why};
    TraceVerdict v;
    v.kind = VerdictKind::Unsupported;
    v.reason = why;
    throw Stop{v};
  }

  [[noreturn]] void eval_failed(const EvalError& e) {
    if (e.kind == EvalError::Kind::Undefined) invalid_step(e.what());
    unsupported_run(e.what());
  }

  // ---- setup ----

  void setup_claim() {
    const ViolatedProperty& vp = trace_->violated;
    if (vp.invalid_step) return;
    claim_tag_ = vp.annotation.tag.name;
    claim_attrs_ = vp.annotation.attrs;
    if (!table_.tags.count(claim_tag_)) not_reached("tag '" + claim_tag_ + "' does not occur in the script");
    auto present = table_.attributes_of(claim_tag_);
    for (const auto& a : claim_attrs_) {
      if (a.kind == AttrKind::Recurring) {
        TraceVerdict v;
        v.kind = VerdictKind::Unsupported;
        v.reason = ":recurring violations are not supported";
        throw Stop{v};
      }
      if (a.kind == AttrKind::NotRecurring) lasso_ = true;
      const Attribute* match = nullptr;
      for (const auto* p : present)
        if (*p == a) match = p;
      if (!match) not_reached("claimed annotation " + a.key() + " is not an annotation of tag '" + claim_tag_ + "'");
      claims_.push_back(match);
    }
    for (const auto& u : trace_->using_annotations)
      for (const auto& a : u.attrs) using_[u.tag.name].push_back(&a);
  }

  void check_model() {
    for (const Term* a : table_.asserts) {
      try {
        EvalContext ctx{&table_, &model_, nullptr, nullptr, nullptr, nullptr};
        Value v = eval_term(*a, ctx);
        if (v.is_bool() && !v.b) not_reached("the model violates the assertion " + term_text(*a));
      } catch (const EvalError& e) {
        warnings_.push_back("assertion not checked against the model: " + std::string(e.what()));
      }
    }
  }

  Value ground(const Term& t, const std::string& what) {
    try {
      EvalContext ctx{&table_, &model_, nullptr, nullptr, nullptr, nullptr};
      return eval_term(t, ctx);
    } catch (const EvalError& e) {
      invalid_step(what + ": " + e.what());
    }
  }

  // ---- frames ----

  const Cfg& cfg_of(const Procedure& p) {
    auto& slot = cfgs_[&p];
    if (!slot) slot = std::make_unique<Cfg>(build_cfg(p));
    return *slot;
  }

  const std::set<std::string>& names_of(const Procedure& p) {
    auto [it, fresh] = names_.try_emplace(&p);
    if (fresh)
      for (const auto* g : {&p.inputs, &p.outputs, &p.locals})
        for (const auto& v : *g) it->second.insert(v.name.name);
    return it->second;
  }

  void push(const Procedure& p, std::vector<Value> args, const Statement* call) {
    Frame f;
    f.proc = &p;
    f.cfg = &cfg_of(p);
    f.names = &names_of(p);
    f.node = f.cfg->entry;
    f.call = call;
    for (std::size_t k = 0; k < p.inputs.size(); ++k) f.env[p.inputs[k].name.name] = std::move(args[k]);
    frames_.push_back(std::move(f));
    if (trace_ && cursor_ < trace_->steps.size() && trace_->steps[cursor_].kind == StepKind::InitProcVars) {
      const Step& s = trace_->steps[cursor_];
      if (s.name.name != p.name.name)
        invalid_step("init-proc-vars names '" + s.name.name + "' but '" + p.name.name + "' was called");
      Frame& top = frames_.back();
      for (const auto& v : s.values) {
        bool ok = false;
        for (const auto* g : {&p.outputs, &p.locals})
          for (const auto& d : *g) ok = ok || d.name.name == v.var.name;
        if (!ok) invalid_step("'" + v.var.name + "' is not a local or output of '" + p.name.name + "'");
        top.env[v.var.name] = ground(v.value, "value of '" + v.var.name + "'");
      }
      ++cursor_;
    }
  }

  Value eval(const Term& t, const Frame& f) {
    EvalContext ctx{&table_, &model_, &f.env, f.names, &globals_, &f.snaps};
    try {
      return eval_term(t, ctx);
    } catch (const EvalError& e) {
      eval_failed(e);
    }
  }

  bool truth(const Term& t, const Frame& f) {
    Value v = eval(t, f);
    if (!v.is_bool()) unsupported_run("condition is not Boolean");
    return v.b;
  }

  void write(Frame& f, const std::string& x, Value v) {
    if (f.names->count(x)) f.env[x] = std::move(v);
    else globals_[x] = std::move(v);
  }

  void erase(Frame& f, const std::string& x) {
    if (f.names->count(x)) f.env.erase(x);
    else globals_.erase(x);
  }

  Env snapshot(const Frame& f) {
    Env s = globals_;
    for (const auto& [k, v] : f.env) s[k] = v;
    return s;
  }

  const Step* next_step(StepKind kind, const char* what) {
    if (!trace_) throw ConcreteStop{ConcreteStatus::NondetReached, std::string(what) + " statement reached"};
    if (cursor_ >= trace_->steps.size()) not_reached(std::string("no step left for a ") + what + " statement");
    const Step& s = trace_->steps[cursor_];
    if (s.kind != kind) invalid_step(std::string("expected a ") + what + " step");
    return &s;
  }

  // ---- annotations ----

  bool claimed(const Attribute* a) const {
    return std::find(claims_.begin(), claims_.end(), a) != claims_.end();
  }

  void falsify(const Attribute* a, const std::vector<std::string>& tags) {
    if (std::find(tags.begin(), tags.end(), claim_tag_) == tags.end()) return;
    falsified_.insert(a);
    if (falsified_.size() == claims_.size() && !lasso_) {
      if (cursor_ < trace_->steps.size()) invalid_step("the violation is reached before this step could be taken");
      TraceVerdict v;
      v.kind = VerdictKind::ViolationConfirmed;
      v.tag = claim_tag_;
      v.attrs = claim_attrs_;
      throw Stop{v};
    }
  }

  std::vector<Value> rank(const Attribute& a, const Frame& f) {
    std::vector<Value> r;
    for (const auto& t : a.terms) r.push_back(eval(t, f));
    return r;
  }

  static bool decreased(const std::vector<Value>& now, const std::vector<Value>& before) {
    for (const auto& v : now)
      if (!v.is_int() || v.i < 0) return false;
    for (std::size_t k = 0; k < now.size() && k < before.size(); ++k) {
      if (!before[k].is_int()) return false;
      if (now[k].i < before[k].i) return true;
      if (now[k].i > before[k].i) return false;
    }
    return false;
  }

  void visit(Frame& f, const CfgNode& n, int id) {
    const Statement& wrapper = *n.stmt;
    std::vector<std::string> tags = tags_of(wrapper);
    const Statement& inner = strip_annotations(wrapper);
    bool back = f.prev >= 0 && f.cfg->is_back_edge(f.prev, id);
    bool is_claim_site = !claim_tag_.empty() && std::find(tags.begin(), tags.end(), claim_tag_) != tags.end();
    bool steps_done = !trace_ || cursor_ >= trace_->steps.size();

    if (lasso_ && is_claim_site && steps_done) {
      for (const auto* a : using_[claim_tag_])
        if (property_class(a->kind) == 'G')
          for (const auto& t : a->terms)
            if (!truth(t, f)) not_reached("the lasso head violates its using-annotation " + a->key());
      TraceVerdict v;
      v.kind = VerdictKind::ViolationConfirmed;
      v.tag = claim_tag_;
      v.attrs = claim_attrs_;
      v.lasso = true;
      throw Stop{v};
    }

    auto props = table_.properties_at(wrapper);
    if (n.loop_head && !back)
      for (const auto& t : tags) f.snaps[t] = snapshot(f);

    bool leapt = false;
    if (trace_ && cursor_ < trace_->steps.size() && trace_->steps[cursor_].kind == StepKind::Leap &&
        std::find(tags.begin(), tags.end(), trace_->steps[cursor_].name.name) != tags.end()) {
      const Step& s = trace_->steps[cursor_];
      auto allowed = modified_vars(inner, table_);
      std::vector<std::pair<std::string, Value>> vals;
      for (const auto& v : s.values) {
        if (!allowed.count(v.var.name))
          invalid_step("leap sets '" + v.var.name + "', which the statement at '" + s.name.name + "' does not modify");
        vals.push_back({v.var.name, ground(v.value, "leap value of '" + v.var.name + "'")});
      }
      if (vals.size() < allowed.size())
        warnings_.push_back("leap at '" + s.name.name + "' leaves some modified variables unchanged");
      for (auto& [x, v] : vals) write(f, x, std::move(v));
      std::vector<const Attribute*> checks = props;
      auto it = using_.find(s.name.name);
      if (it != using_.end()) checks.insert(checks.end(), it->second.begin(), it->second.end());
      for (const auto* a : checks) {
        bool relevant = a->kind == AttrKind::Invariant || a->kind == AttrKind::CheckTrue ||
                        (a->kind == AttrKind::Requires && !back);
        if (!relevant) continue;
        for (const auto& t : a->terms) {
          bool ok;
          try {
            EvalContext ctx{&table_, &model_, &f.env, f.names, &globals_, &f.snaps};
            Value v = eval_term(t, ctx);
            ok = v.is_bool() && v.b;
          } catch (const EvalError& e) {
            invalid_step(std::string("leap state cannot be checked: ") + e.what());
          }
          if (!ok) invalid_step("leap state violates " + a->key() + " at '" + s.name.name + "'");
        }
      }
      ++cursor_;
      leapt = true;
    }

    if (!n.loop_head)
      for (const auto& t : tags) f.snaps[t] = snapshot(f);

    for (const auto* a : props) {
      switch (a->kind) {
        case AttrKind::Decreases:
        case AttrKind::DecreasesLex: {
          if (!claimed(a)) break;
          if (n.loop_head) {
            auto now = rank(*a, f);
            auto it = f.ranks.find(id);
            if (back && !leapt && it != f.ranks.end() && !decreased(now, it->second)) falsify(a, tags);
            f.ranks[id] = now;
          } else if (&wrapper == &f.proc->body && !back) {
            auto now = rank(*a, f);
            for (auto it = frames_.rbegin() + 1; it != frames_.rend(); ++it) {
              if (it->proc != f.proc || !it->top_rank) continue;
              if (!decreased(now, *it->top_rank)) falsify(a, tags);
              break;
            }
            f.top_rank = now;
          }
          break;
        }
        case AttrKind::CheckTrue:
        case AttrKind::Invariant:
          if (claimed(a))
            for (const auto& t : a->terms)
              if (!truth(t, f)) falsify(a, tags);
          break;
        case AttrKind::Requires:
          if (claimed(a) && !back)
            for (const auto& t : a->terms)
              if (!truth(t, f)) falsify(a, tags);
          break;
        default:
          break;
      }
    }
    if (opt_.on_visit) opt_.on_visit(f.proc->name.name, tags, f.env, globals_);
  }

  void leave(Frame& f, const Statement& wrapper) {
    if (claims_.empty()) return;
    std::vector<std::string> tags = tags_of(wrapper);
    for (const auto* a : table_.properties_at(wrapper))
      if (a->kind == AttrKind::Ensures && claimed(a))
        for (const auto& t : a->terms)
          if (!truth(t, f)) falsify(a, tags);
  }

  void advance(Frame& f, int to) {
    f.prev = f.node;
    f.node = to;
  }

  void run() {
    while (!frames_.empty()) {
      if (fuel_ == 0) {
        TraceVerdict v;
        v.kind = VerdictKind::FuelExhausted;
        v.reason = "step budget exhausted";
        if (!trace_) throw ConcreteStop{ConcreteStatus::FuelExhausted, v.reason};
        throw Stop{v};
      }
      --fuel_;
      Frame& f = frames_.back();
      const int id = f.node;
      const CfgNode& n = f.cfg->nodes[id];
      switch (n.kind) {
        case NodeKind::Nop:
          advance(f, n.succ[0]);
          break;
        case NodeKind::Assume:
          if (!truth(*n.cond, f)) {
            if (!trace_) throw ConcreteStop{ConcreteStatus::AssumeFailed, "assumption does not hold"};
            not_reached("execution blocked by a failing assume");
          }
          advance(f, n.succ[0]);
          break;
        case NodeKind::Assign: {
          std::vector<Value> vals;
          for (const auto& [x, t] : n.stmt->assigns) vals.push_back(eval(t, f));
          for (std::size_t k = 0; k < vals.size(); ++k) write(f, n.stmt->assigns[k].first.name, std::move(vals[k]));
          advance(f, n.succ[0]);
          break;
        }
        case NodeKind::Havoc: {
          const Step* s = next_step(StepKind::Havoc, "havoc");
          std::vector<std::pair<std::string, Value>> vals;
          for (const auto& v : s->values) {
            bool target = std::any_of(n.stmt->vars.begin(), n.stmt->vars.end(),
                                      [&](const Symbol& x) { return x.name == v.var.name; });
            if (!target) invalid_step("'" + v.var.name + "' is not havoced here");
            vals.push_back({v.var.name, ground(v.value, "havoc value of '" + v.var.name + "'")});
          }
          for (const auto& x : n.stmt->vars) erase(f, x.name);
          for (auto& [x, v] : vals) write(f, x, std::move(v));
          ++cursor_;
          advance(f, n.succ[0]);
          break;
        }
        case NodeKind::Choice: {
          const Step* s = next_step(StepKind::Choice, "choice");
          if (s->choice >= n.succ.size())
            invalid_step("choice index " + std::to_string(s->choice) + " is out of range for " +
                         std::to_string(n.succ.size()) + " branches");
          ++cursor_;
          advance(f, n.succ[s->choice]);
          break;
        }
        case NodeKind::Branch:
          advance(f, truth(*n.cond, f) ? n.succ[0] : n.succ[1]);
          break;
        case NodeKind::Call: {
          const ProcInfo* info = table_.proc(n.stmt->name.name);
          if (!info) unsupported_run("procedure '" + n.stmt->name.name + "' is not defined");
          std::vector<Value> args;
          for (const auto& a : n.stmt->args) args.push_back(eval(a, f));
          push(*info->proc, std::move(args), n.stmt);
          break;
        }
        case NodeKind::Visit:
          visit(f, n, id);
          advance(frames_.back(), n.succ[0]);
          break;
        case NodeKind::Leave:
          leave(f, *n.stmt);
          advance(f, n.succ[0]);
          break;
        case NodeKind::Exit: {
          if (n.stmt) leave(f, *n.stmt);
          Frame done = std::move(frames_.back());
          frames_.pop_back();
          if (frames_.empty()) {
            final_env_ = std::move(done.env);
            return;
          }
          Frame& caller = frames_.back();
          const Statement& call = *done.call;
          std::vector<Value> outs;
          for (const auto& o : done.proc->outputs) {
            auto it = done.env.find(o.name.name);
            if (it == done.env.end()) {
              if (model_.defines(o.name.name)) {
                outs.push_back(ground(Term::var(o.name.name), "output"));
                continue;
              }
              std::string msg = "output '" + o.name.name + "' of '" + done.proc->name.name + "' is undefined at return";
              frames_.push_back(std::move(done));
              invalid_step(msg);
            }
            outs.push_back(it->second);
          }
          for (std::size_t k = 0; k < outs.size(); ++k) write(caller, call.vars[k].name, std::move(outs[k]));
          advance(caller, caller.cfg->nodes[caller.node].succ[0]);
          break;
        }
      }
    }
  }
};

}  // namespace

Value eval_term(const Term& t, const EvalContext& ctx) {
  Evaluator e{ctx, {}, 0};
  return e.eval(t);
}

TraceVerdict run_trace(const Script& script, std::size_t verify_index, const Trace& trace, const RunOptions& options) {
  Machine m(script, verify_index, &trace, options);
  return m.replay(script.commands.at(verify_index));
}

ConcreteResult run_concrete(const Script& script, const std::string& proc, const std::vector<Value>& inputs,
                            const RunOptions& options, const Env& globals) {
  Machine m(script, SIZE_MAX, nullptr, options);
  return m.concrete(proc, inputs, globals);
}

}  // namespace svlib
