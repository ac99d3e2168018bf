#include "svlib/vcgen.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "svlib/cfg.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/printer.hpp"
#include "svlib/symbols.hpp"

namespace svlib {

const char* obligation_kind_name(ObligationKind k) {
  switch (k) {
    case ObligationKind::InvariantInit: return "invariant-init";
    case ObligationKind::InvariantInductive: return "invariant-inductive";
    case ObligationKind::Ensures: return "ensures";
    case ObligationKind::RequiresEntry: return "requires-entry";
    case ObligationKind::RequiresCall: return "requires-call";
    case ObligationKind::Requires: return "requires";
    case ObligationKind::CheckTrue: return "check-true";
    case ObligationKind::Decreases: return "decreases";
    case ObligationKind::LassoStem: return "lasso-stem";
    case ObligationKind::LassoInductive: return "lasso-inductive";
    case ObligationKind::LassoNonExit: return "lasso-non-exit";
  }
  return "?";
}

namespace {

using Lookup = std::function<std::optional<Term>(const std::string&)>;
using AtFn = std::function<Term(const Term&)>;

/// Capture-avoiding renaming of free variables.
struct Renamer {
  Lookup lookup;
  AtFn at;
  const SymbolTable* table = nullptr;
  std::vector<std::string> bound;

  bool is_bound(const std::string& n) const { return std::find(bound.begin(), bound.end(), n) != bound.end(); }

  void bind_pattern(const SExpr& p) {
    if (p.is_list()) {
      for (std::size_t i = 1; i < p.size(); ++i) bound.push_back(p[i].symbol_name());
    } else if (p.is_symbol() && !(table && table->function(p.symbol_name()))) {
      bound.push_back(p.symbol_name());
    }
  }

  Term operator()(const Term& t) {
    switch (t.kind) {
      case TermKind::Const:
        return t;
      case TermKind::Ident:
        if (t.indices.empty() && !t.as_sort && !is_bound(t.name))
          if (auto r = lookup(t.name)) return *r;
        return t;
      case TermKind::App: {
        Term out = t;
        for (auto& a : out.args) a = (*this)(a);
        return out;
      }
      case TermKind::Let: {
        Term out = t;
        for (std::size_t i = 0; i + 1 < out.args.size(); ++i) out.args[i] = (*this)(out.args[i]);
        std::size_t n = bound.size();
        bound.insert(bound.end(), t.bound.begin(), t.bound.end());
        out.args.back() = (*this)(t.args.back());
        bound.resize(n);
        return out;
      }
      case TermKind::Forall:
      case TermKind::Exists: {
        Term out = t;
        std::size_t n = bound.size();
        bound.insert(bound.end(), t.bound.begin(), t.bound.end());
        out.args.back() = (*this)(t.args.back());
        bound.resize(n);
        return out;
      }
      case TermKind::Match: {
        Term out = t;
        out.args[0] = (*this)(t.args[0]);
        for (std::size_t i = 1; i < t.args.size(); ++i) {
          std::size_t n = bound.size();
          if (i - 1 < t.patterns.size()) bind_pattern(t.patterns[i - 1]);
          out.args[i] = (*this)(t.args[i]);
          bound.resize(n);
        }
        return out;
      }
      case TermKind::Annotated: {
        Term body = (*this)(t.args.back());
        std::vector<SExpr> kept;
        for (std::size_t i = 0; i < t.term_attrs.size(); ++i) {
          if (t.term_attrs[i].is_keyword(":named")) {
            if (i + 1 < t.term_attrs.size() && !t.term_attrs[i + 1].is_keyword()) ++i;
            continue;
          }
          kept.push_back(t.term_attrs[i]);
        }
        if (kept.empty()) return body;
        Term out = t;
        out.args.back() = std::move(body);
        out.term_attrs = std::move(kept);
        return out;
      }
      case TermKind::At:
        if (at) return at(t);
        return t;
    }
    return t;
  }
};

Term conj(std::vector<Term> ts) {
  if (ts.empty()) return Term::boolean(true);
  if (ts.size() == 1) return ts[0];
  return Term::app("and", std::move(ts));
}

Term negate(Term t) { return Term::app("not", {std::move(t)}); }

/// All components non-negative and lexicographically smaller than `old`.
Term decrease_term(const std::vector<Term>& now, const std::vector<std::string>& old) {
  std::vector<Term> nonneg, alts;
  for (const auto& t : now) nonneg.push_back(Term::app(">=", {t, Term::numeral("0")}));
  for (std::size_t k = 0; k < now.size() && k < old.size(); ++k) {
    std::vector<Term> parts;
    for (std::size_t j = 0; j < k; ++j) parts.push_back(Term::app("=", {now[j], Term::var(old[j])}));
    parts.push_back(Term::app("<", {now[k], Term::var(old[k])}));
    alts.push_back(conj(std::move(parts)));
  }
  Term lex = alts.empty() ? Term::boolean(false) : alts.size() == 1 ? alts[0] : Term::app("or", std::move(alts));
  nonneg.push_back(std::move(lex));
  return conj(std::move(nonneg));
}

void collect_at(const Term& t, std::map<std::string, std::set<std::string>>& out) {
  if (t.kind == TermKind::At) out[t.tag].insert(t.name);
  for (const auto& a : t.args) collect_at(a, out);
}

bool mentions_quantifier(const SExpr& e) {
  if (e.is_atom()) return false;
  if (!e.empty() && (e[0].is_symbol("forall") || e[0].is_symbol("exists"))) return true;
  for (const auto& c : e.items())
    if (mentions_quantifier(c)) return true;
  return false;
}

bool mentions_sort(const Sort& s, const std::string& name) {
  if (s.name == name) return true;
  for (const auto& p : s.params)
    if (mentions_sort(p, name)) return true;
  return false;
}

// ---- passified program ----

enum class PKind { Nop, Assume, Assign, Havoc, Assert };

struct Spec {
  ObligationKind kind;
  std::string name;
  std::string proc;
  std::string tag;
  std::optional<Attribute> attr;
};

struct PNode {
  PKind kind = PKind::Nop;
  Term term;
  std::vector<std::pair<std::string, Term>> assigns;
  std::vector<std::string> havoc;
  int spec = -1;
  std::vector<int> succ;
  PathNode::Event event = PathNode::Event::None;
  std::string tag;
  std::size_t choice = 0;
  std::vector<std::pair<std::string, std::string>> event_vars;  // program variable, pg variable
};

struct Frame {
  const Procedure* proc = nullptr;
  const Cfg* cfg = nullptr;
  std::string suffix;
  std::map<std::string, std::string> vars;  // parameters and locals
  const Scope* scope = nullptr;
  int depth = 0;
  bool entry_unit = false;
  std::map<int, int> memo;
  std::map<int, int> back_memo;
  int exit_node = -1;
  std::vector<std::string> top_rank;
};

struct Abort {
  VcStatus status;
  std::string reason;
};

class Builder {
public:
  Builder(const Script& script, std::size_t verify_index, const VcOptions& opt)
      : script_(script), vi_(verify_index), table_(script, verify_index), opt_(opt) {
    for (const auto& [tag, sites] : table_.tags)
      for (const auto& site : sites) {
        std::vector<const Attribute*> attrs;
        strip_annotations(*site.stmt, &attrs);
        for (const auto* a : attrs)
          for (const auto& t : a->terms) collect_at(t, at_uses_);
      }
    for (const auto& [tag, anns] : table_.annotations)
      for (const auto& a : anns)
        for (const auto& t : a.attr->terms) collect_at(t, at_uses_);
    for (const auto& [name, info] : table_.procs) {
      std::set<std::string> callees;
      for_each_statement(info.proc->body, [&](const Statement& s) {
        if (s.kind == StmtKind::Call) callees.insert(s.name.name);
      });
      calls_[name] = std::move(callees);
    }
  }

  const SymbolTable& table() const { return table_; }

  // ---- units ----

  std::vector<PNode> nodes;
  std::vector<Spec> specs;
  std::map<std::string, Sort> sorts;
  int entry = -1;
  std::string unit_proc;
  bool entry_unit = false;

  std::vector<const Procedure*> modular_queue;
  bool saw_recurring = false;
  bool saw_not_recurring = false;
  bool unranked = false;

  void reset() {
    nodes.clear();
    specs.clear();
    sorts.clear();
    frames_.clear();
    entry = -1;
    entry_unit = false;
    lasso_frame_ = nullptr;
  }

  void build_entry(const Procedure& p, const std::vector<Term>& args) {
    reset();
    unit_proc = p.name.name;
    entry_unit = true;
    Frame& f = new_frame(p, "", 0);
    f.entry_unit = true;
    PNode a;
    a.kind = PKind::Assign;
    Renamer r{[](const std::string&) { return std::optional<Term>{}; }, nullptr, &table_, {}};
    for (std::size_t i = 0; i < p.inputs.size() && i < args.size(); ++i)
      a.assigns.push_back({f.vars.at(p.inputs[i].name.name), r(args[i])});
    int body = pg(f, f.cfg->entry);
    entry = chain({a}, body);
  }

  void build_modular(const Procedure& p) {
    reset();
    unit_proc = p.name.name;
    Frame& f = new_frame(p, "", 0);
    entry = pg(f, f.cfg->entry);
  }

  void build_lasso(const Procedure& p, const Statement& head_stmt, std::vector<const Attribute*> using_attrs) {
    reset();
    unit_proc = p.name.name;
    lasso_ = true;
    Frame& f = new_frame(p, "", 0);
    int h = -1;
    for (std::size_t i = 0; i < f.cfg->nodes.size(); ++i)
      if (f.cfg->nodes[i].kind == NodeKind::Visit && f.cfg->nodes[i].stmt == &head_stmt) h = static_cast<int>(i);
    if (h < 0 || !f.cfg->cutpoints.count(h)) throw Abort{VcStatus::Unsupported, "the lasso head is not a loop head"};
    lasso_frame_ = &f;
    lasso_head_ = h;
    lasso_region_ = natural_loop(*f.cfg, h);
    lasso_using_ = std::move(using_attrs);
    PNode assume;
    assume.kind = PKind::Assume;
    assume.term = conj(using_terms(f));
    entry = chain({assume}, edge(f, h, f.cfg->nodes[h].succ.at(0)));
  }

private:
  const Script& script_;
  std::size_t vi_;
  SymbolTable table_;
  VcOptions opt_;
  std::map<std::string, std::set<std::string>> at_uses_;
  std::map<std::string, std::set<std::string>> calls_;
  std::deque<Frame> frames_;
  std::map<const Procedure*, std::unique_ptr<Cfg>> cfgs_;
  std::map<const Procedure*, std::unique_ptr<Scope>> scopes_;
  std::set<const Procedure*> queued_;
  int counter_ = 0;

  bool lasso_ = false;
  Frame* lasso_frame_ = nullptr;
  int lasso_head_ = -1;
  std::set<int> lasso_region_;
  std::vector<const Attribute*> lasso_using_;

  const Cfg& cfg_of(const Procedure& p) {
    auto& c = cfgs_[&p];
    if (!c) {
      c = std::make_unique<Cfg>(build_cfg(p));
      if (!c->reducible) throw Abort{VcStatus::Unsupported, "procedure " + p.name.name + " has an irreducible control flow"};
    }
    return *c;
  }

  const Scope& scope_of(const Procedure& p) {
    auto& s = scopes_[&p];
    if (!s) s = std::make_unique<Scope>(table_.scope_of(p));
    return *s;
  }

  Frame& new_frame(const Procedure& p, std::string suffix, int depth) {
    Frame f;
    f.proc = &p;
    f.cfg = &cfg_of(p);
    f.scope = &scope_of(p);
    f.suffix = std::move(suffix);
    f.depth = depth;
    auto add = [&](const std::vector<SortedVar>& vs) {
      for (const auto& v : vs) {
        std::string pg = p.name.name + f.suffix + "." + v.name.name;
        f.vars[v.name.name] = pg;
        sorts[pg] = v.sort;
      }
    };
    add(p.inputs);
    add(p.outputs);
    add(p.locals);
    frames_.push_back(std::move(f));
    return frames_.back();
  }

  std::string fresh_suffix(char c) { return std::string(1, c) + std::to_string(++counter_); }

  std::string var(const Frame& f, const std::string& x) {
    auto it = f.vars.find(x);
    if (it != f.vars.end()) return it->second;
    auto g = table_.globals.find(x);
    if (g != table_.globals.end()) sorts[x] = g->second.sort;
    return x;
  }

  std::string ghost_at(const Frame& f, const std::string& tag, const std::string& x) {
    std::string g = "ghost_at_" + tag + "_" + x + f.suffix;
    auto it = f.scope->find(x);
    if (it != f.scope->end()) sorts[g] = it->second.sort;
    else sorts[g] = Sort::named("Int");
    return g;
  }

  Term tr(const Frame& f, const Term& t) {
    Renamer r{[&](const std::string& n) -> std::optional<Term> {
                if (f.vars.count(n) || table_.globals.count(n)) return Term::var(var(f, n));
                return std::nullopt;
              },
              [&](const Term& a) { return Term::var(ghost_at(f, a.tag, a.name)); }, &table_, {}};
    return r(t);
  }

  Term tr_attr(const Frame& f, const Attribute& a) {
    std::vector<Term> ts;
    for (const auto& t : a.terms) ts.push_back(tr(f, t));
    return conj(std::move(ts));
  }

  int add(PNode n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  }

  /// Links `seq` in order in front of `tail` (no successor when tail < 0).
  int chain(std::vector<PNode> seq, int tail) {
    int cur = tail;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      PNode n = std::move(*it);
      n.succ.clear();
      if (cur >= 0) n.succ.push_back(cur);
      cur = add(std::move(n));
    }
    return cur;
  }

  std::string origin_tag(const std::vector<std::string>& tags, const Attribute* a) {
    for (const auto& t : tags) {
      auto attrs = table_.attributes_of(t);
      if (std::find(attrs.begin(), attrs.end(), a) != attrs.end()) return t;
    }
    return tags.empty() ? std::string() : tags[0];
  }

  PNode assertion(ObligationKind kind, const std::string& what, const Frame& f, Term t, std::string tag,
                  const Attribute* a) {
    Spec s;
    s.kind = kind;
    s.name = f.proc->name.name + "." + what;
    s.proc = f.proc->name.name;
    s.tag = std::move(tag);
    if (a) s.attr = *a;
    specs.push_back(std::move(s));
    PNode n;
    n.kind = PKind::Assert;
    n.term = std::move(t);
    n.spec = static_cast<int>(specs.size()) - 1;
    return n;
  }

  PNode assume(Term t) {
    PNode n;
    n.kind = PKind::Assume;
    n.term = std::move(t);
    return n;
  }

  std::vector<const Attribute*> of_kind(const std::vector<const Attribute*>& props, AttrKind k) {
    std::vector<const Attribute*> out;
    for (const auto* a : props)
      if (a->kind == k) out.push_back(a);
    return out;
  }

  std::vector<const Attribute*> ranks(const std::vector<const Attribute*>& props) {
    std::vector<const Attribute*> out;
    for (const auto* a : props)
      if (a->kind == AttrKind::Decreases || a->kind == AttrKind::DecreasesLex) out.push_back(a);
    return out;
  }

  void ghost_assigns(const Frame& f, const std::vector<std::string>& tags, std::vector<PNode>& seq) {
    PNode a;
    a.kind = PKind::Assign;
    for (const auto& t : tags) {
      auto it = at_uses_.find(t);
      if (it == at_uses_.end()) continue;
      for (const auto& x : it->second)
        if (f.scope->count(x)) a.assigns.push_back({ghost_at(f, t, x), Term::var(var(f, x))});
    }
    if (!a.assigns.empty()) seq.push_back(std::move(a));
  }

  std::vector<Term> using_terms(const Frame& f) {
    std::vector<Term> ts;
    for (const auto* a : lasso_using_)
      for (const auto& t : a->terms) ts.push_back(tr(f, t));
    return ts;
  }

  static std::set<int> natural_loop(const Cfg& g, int h) {
    std::set<int> region{h};
    auto preds = g.predecessors();
    std::vector<int> work;
    for (const auto& [u, v] : g.back_edges)
      if (v == h && region.insert(u).second) work.push_back(u);
    while (!work.empty()) {
      int n = work.back();
      work.pop_back();
      for (int p : preds[n])
        if (region.insert(p).second) work.push_back(p);
    }
    return region;
  }

  bool recursive(const std::string& p) {
    std::set<std::string> seen;
    std::vector<std::string> work(calls_[p].begin(), calls_[p].end());
    while (!work.empty()) {
      std::string q = work.back();
      work.pop_back();
      if (q == p) return true;
      if (!seen.insert(q).second) continue;
      for (const auto& r : calls_[q]) work.push_back(r);
    }
    return false;
  }

  bool has_contract(const Procedure& q) {
    if (q.body.kind != StmtKind::Annotated) return false;
    for (const auto* a : table_.properties_at(q.body))
      if (a->kind == AttrKind::Requires || a->kind == AttrKind::Ensures) return true;
    return false;
  }

  // ---- graph construction ----

  int edge(Frame& f, int from, int to) {
    if (lasso_ && &f == lasso_frame_) {
      if (to == lasso_head_) {
        PNode a = assertion(ObligationKind::LassoInductive, "lasso.head.inductive", f, conj(using_terms(f)),
                            "", nullptr);
        specs.back().name = "lasso.head.inductive";
        return chain({a}, -1);
      }
      if (!lasso_region_.count(to)) {
        PNode a = assertion(ObligationKind::LassoNonExit, "lasso.non-exit", f, Term::boolean(false), "", nullptr);
        specs.back().name = "lasso.non-exit";
        return chain({a}, -1);
      }
      return pg(f, to);
    }
    if (f.cfg->is_back_edge(from, to)) return back_check(f, to);
    return pg(f, to);
  }

  int pg(Frame& f, int n) {
    auto it = f.memo.find(n);
    if (it != f.memo.end()) return it->second;
    int r = build_node(f, n);
    f.memo[n] = r;
    return r;
  }

  int build_node(Frame& f, int n) {
    const CfgNode& node = f.cfg->nodes[n];
    if (f.cfg->cutpoints.count(n) && node.kind != NodeKind::Visit)
      throw Abort{VcStatus::MissingAnnotation,
                  "a loop in procedure " + f.proc->name.name + " carries no :invariant"};
    switch (node.kind) {
      case NodeKind::Nop:
        return edge(f, n, node.succ[0]);
      case NodeKind::Assume:
        return chain({assume(tr(f, *node.cond))}, edge(f, n, node.succ[0]));
      case NodeKind::Assign: {
        PNode a;
        a.kind = PKind::Assign;
        for (const auto& [x, t] : node.stmt->assigns) a.assigns.push_back({var(f, x.name), tr(f, t)});
        return chain({a}, edge(f, n, node.succ[0]));
      }
      case NodeKind::Havoc: {
        PNode h;
        h.kind = PKind::Havoc;
        h.event = PathNode::Event::Havoc;
        for (const auto& x : node.stmt->vars) {
          h.havoc.push_back(var(f, x.name));
          h.event_vars.push_back({x.name, var(f, x.name)});
        }
        return chain({h}, edge(f, n, node.succ[0]));
      }
      case NodeKind::Branch: {
        Term c = tr(f, *node.cond);
        int t = chain({assume(c)}, edge(f, n, node.succ[0]));
        int e = chain({assume(negate(c))}, edge(f, n, node.succ[1]));
        PNode split;
        split.succ = {t, e};
        return add(std::move(split));
      }
      case NodeKind::Choice: {
        std::string sel = "ghost_sel" + fresh_suffix('_');
        sorts[sel] = Sort::named("Int");
        PNode h;
        h.kind = PKind::Havoc;
        h.havoc = {sel};
        for (std::size_t i = 0; i < node.succ.size(); ++i) {
          PNode a = assume(Term::app("=", {Term::var(sel), Term::numeral(std::to_string(i))}));
          a.event = PathNode::Event::Choice;
          a.choice = i;
          h.succ.push_back(chain({a}, edge(f, n, node.succ[i])));
        }
        return add(std::move(h));
      }
      case NodeKind::Call:
        return call(f, n);
      case NodeKind::Visit:
        return visit(f, n);
      case NodeKind::Leave:
        return leave(f, n);
      case NodeKind::Exit:
        return exit(f, n);
    }
    return -1;
  }

  int back_check(Frame& f, int h) {
    auto it = f.back_memo.find(h);
    if (it != f.back_memo.end()) return it->second;
    const Statement& w = *f.cfg->nodes[h].stmt;
    auto tags = tags_of(w);
    auto props = table_.properties_at(w);
    std::vector<PNode> seq;
    for (const auto* a : of_kind(props, AttrKind::Invariant))
      seq.push_back(assertion(ObligationKind::InvariantInductive, "invariant.inductive", f, tr_attr(f, *a),
                              origin_tag(tags, a), a));
    auto rk = ranks(props);
    for (std::size_t i = 0; i < rk.size(); ++i) {
      std::vector<Term> now;
      for (const auto& t : rk[i]->terms) now.push_back(tr(f, t));
      seq.push_back(assertion(ObligationKind::Decreases,
                              rk[i]->kind == AttrKind::Decreases ? "decreases" : "decreases-lex", f,
                              decrease_term(now, rank_vars(f, h, i, rk[i]->terms.size())), origin_tag(tags, rk[i]),
                              rk[i]));
    }
    int r = chain(std::move(seq), -1);
    if (r < 0) r = add(PNode{});
    f.back_memo[h] = r;
    return r;
  }

  std::vector<std::string> rank_vars(const Frame& f, int h, std::size_t i, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) {
      std::string g = "ghost_rank" + f.suffix + "_" + std::to_string(h) + "_" + std::to_string(i) + "_" +
                      std::to_string(k);
      sorts[g] = Sort::named("Int");
      out.push_back(g);
    }
    return out;
  }

  void note_fprops(const std::vector<const Attribute*>& props) {
    if (lasso_) return;
    for (const auto* a : props) {
      if (a->kind == AttrKind::Recurring) saw_recurring = true;
      if (a->kind == AttrKind::NotRecurring) saw_not_recurring = true;
    }
  }

  int visit(Frame& f, int n) {
    const CfgNode& node = f.cfg->nodes[n];
    const Statement& w = *node.stmt;
    const Statement& inner = strip_annotations(w);
    auto tags = tags_of(w);
    auto props = table_.properties_at(w);
    bool top = &w == &f.proc->body;
    bool root = f.depth == 0;
    bool cut = f.cfg->cutpoints.count(n) > 0;
    note_fprops(props);
    std::vector<PNode> seq;

    if (lasso_) {
      if (cut) throw Abort{VcStatus::Unsupported, "nested loops inside a lasso are not supported"};
      ghost_assigns(f, tags, seq);
      return chain(std::move(seq), edge(f, n, node.succ[0]));
    }

    if (top && root) {
      ghost_assigns(f, tags, seq);
      for (const auto* a : of_kind(props, AttrKind::Requires)) {
        Term t = tr_attr(f, *a);
        if (f.entry_unit)
          seq.push_back(assertion(ObligationKind::RequiresEntry, "requires.entry", f, t, origin_tag(tags, a), a));
        seq.push_back(assume(t));
      }
      if (!node.loop_head) {
        auto rk = ranks(props);
        if (!rk.empty()) {
          f.top_rank = rank_vars(f, -1, 0, rk[0]->terms.size());
          PNode r;
          r.kind = PKind::Assign;
          for (std::size_t k = 0; k < rk[0]->terms.size(); ++k)
            r.assigns.push_back({f.top_rank[k], tr(f, rk[0]->terms[k])});
          seq.push_back(std::move(r));
        }
      }
    } else {
      if (!cut || node.loop_head) ghost_assigns(f, tags, seq);
      for (const auto* a : of_kind(props, AttrKind::Requires))
        seq.push_back(assertion(ObligationKind::Requires, "requires", f, tr_attr(f, *a), origin_tag(tags, a), a));
    }

    auto checks = [&] {
      for (const auto* a : of_kind(props, AttrKind::CheckTrue))
        seq.push_back(assertion(ObligationKind::CheckTrue, "check-true", f, tr_attr(f, *a), origin_tag(tags, a), a));
    };

    if (cut) {
      auto invs = of_kind(props, AttrKind::Invariant);
      if (invs.empty())
        throw Abort{VcStatus::MissingAnnotation, "loop head " + (tags.empty() ? std::string("?") : tags[0]) +
                                                     " in procedure " + f.proc->name.name + " carries no :invariant"};
      for (const auto* a : invs)
        seq.push_back(assertion(ObligationKind::InvariantInit, "invariant.init", f, tr_attr(f, *a),
                                origin_tag(tags, a), a));
      auto region = natural_loop(*f.cfg, n);
      std::set<std::string> mods;
      for (int m : region) {
        const CfgNode& x = f.cfg->nodes[m];
        if ((x.kind == NodeKind::Assign || x.kind == NodeKind::Havoc || x.kind == NodeKind::Call) && x.stmt)
          for (const auto& v : modified_vars(*x.stmt, table_)) mods.insert(v);
      }
      std::set<std::string> leap_vars =
          inner.kind == StmtKind::While ? modified_vars(inner, table_) : mods;
      PNode h;
      h.kind = PKind::Havoc;
      h.event = PathNode::Event::Leap;
      h.tag = tags.empty() ? std::string() : tags[0];
      for (const auto& v : mods) {
        if (!f.scope->count(v)) continue;
        h.havoc.push_back(var(f, v));
        if (leap_vars.count(v)) h.event_vars.push_back({v, var(f, v)});
      }
      for (int m : region) {
        const CfgNode& x = f.cfg->nodes[m];
        if (m == n || x.kind != NodeKind::Visit) continue;
        for (const auto& t : tags_of(*x.stmt)) {
          auto it = at_uses_.find(t);
          if (it == at_uses_.end()) continue;
          for (const auto& v : it->second)
            if (f.scope->count(v)) h.havoc.push_back(ghost_at(f, t, v));
        }
      }
      seq.push_back(std::move(h));
      for (const auto* a : invs) seq.push_back(assume(tr_attr(f, *a)));
      if (!node.loop_head) ghost_assigns(f, tags, seq);
      checks();
      auto rk = ranks(props);
      if (rk.empty()) unranked = true;
      for (std::size_t i = 0; i < rk.size(); ++i) {
        auto rv = rank_vars(f, n, i, rk[i]->terms.size());
        PNode r;
        r.kind = PKind::Assign;
        for (std::size_t k = 0; k < rv.size(); ++k) r.assigns.push_back({rv[k], tr(f, rk[i]->terms[k])});
        seq.push_back(std::move(r));
      }
      return chain(std::move(seq), edge(f, n, node.succ[0]));
    }

    checks();
    if (summarized_statement(w, top, node.loop_head)) {
      std::string sel = "ghost_sel" + fresh_suffix('_');
      sorts[sel] = Sort::named("Int");
      PNode pick;
      pick.kind = PKind::Havoc;
      pick.havoc = {sel};
      seq.push_back(std::move(pick));
      int body = chain({assume(Term::app("=", {Term::var(sel), Term::numeral("0")}))}, edge(f, n, node.succ[0]));
      int after = -1;
      for (std::size_t i = 0; i < f.cfg->nodes.size(); ++i)
        if (f.cfg->nodes[i].kind == NodeKind::Leave && f.cfg->nodes[i].stmt == &w)
          after = edge(f, static_cast<int>(i), f.cfg->nodes[i].succ[0]);
      std::vector<PNode> summary{assume(Term::app("=", {Term::var(sel), Term::numeral("1")}))};
      PNode h;
      h.kind = PKind::Havoc;
      h.event = PathNode::Event::Summary;
      for (const auto& v : modified_vars(inner, table_))
        if (f.scope->count(v)) h.havoc.push_back(var(f, v));
      summary.push_back(std::move(h));
      for (const auto* a : of_kind(props, AttrKind::Ensures)) summary.push_back(assume(tr_attr(f, *a)));
      int alt = chain(std::move(summary), after);
      int split = chain(std::move(seq), -1);
      nodes[last_of(split)].succ = {body, alt};
      return split;
    }
    return chain(std::move(seq), edge(f, n, node.succ[0]));
  }

  int last_of(int n) {
    while (!nodes[n].succ.empty()) n = nodes[n].succ[0];
    return n;
  }

  bool summarized_statement(const Statement& w, bool top, bool loop_head) {
    if (top || loop_head) return false;
    if (strip_annotations(w).kind == StmtKind::Label) return false;
    for (const auto* a : table_.properties_at(w))
      if (a->kind == AttrKind::Ensures) return true;
    return false;
  }

  int leave(Frame& f, int n) {
    const CfgNode& node = f.cfg->nodes[n];
    const Statement& w = *node.stmt;
    auto tags = tags_of(w);
    std::vector<PNode> seq;
    if (!lasso_)
      for (const auto* a : of_kind(table_.properties_at(w), AttrKind::Ensures))
        seq.push_back(assertion(ObligationKind::Ensures, "ensures", f, tr_attr(f, *a), origin_tag(tags, a), a));
    bool stop = !lasso_ && summarized_statement(w, false, strip_annotations(w).kind == StmtKind::While);
    int tail = stop ? -1 : edge(f, n, node.succ[0]);
    int r = chain(std::move(seq), tail);
    return r < 0 ? add(PNode{}) : r;
  }

  int exit(Frame& f, int n) {
    if (f.exit_node >= 0) return f.exit_node;
    const CfgNode& node = f.cfg->nodes[n];
    std::vector<PNode> seq;
    if (node.stmt && !lasso_) {
      auto tags = tags_of(*node.stmt);
      for (const auto* a : of_kind(table_.properties_at(*node.stmt), AttrKind::Ensures))
        seq.push_back(assertion(ObligationKind::Ensures, "ensures.modular", f, tr_attr(f, *a), origin_tag(tags, a), a));
    }
    int r = chain(std::move(seq), -1);
    return r < 0 ? add(PNode{}) : r;
  }

  int call(Frame& f, int n) {
    const CfgNode& node = f.cfg->nodes[n];
    const Statement& s = *node.stmt;
    const ProcInfo* info = table_.proc(s.name.name);
    if (!info) throw Abort{VcStatus::Unsupported, "call to unknown procedure " + s.name.name};
    const Procedure& q = *info->proc;
    bool rec = recursive(q.name.name);
    if (!lasso_ && has_contract(q)) return summarize(f, n, q);
    if (rec) throw Abort{VcStatus::Unsupported, "recursive procedure " + q.name.name + " has no contract"};
    if (f.depth + 1 > opt_.inline_depth)
      throw Abort{VcStatus::Unsupported, "call nesting exceeds the inlining depth at " + q.name.name};
    Frame& g = new_frame(q, fresh_suffix('!'), f.depth + 1);
    PNode out;
    out.kind = PKind::Assign;
    for (std::size_t i = 0; i < s.vars.size() && i < q.outputs.size(); ++i)
      out.assigns.push_back({var(f, s.vars[i].name), Term::var(g.vars.at(q.outputs[i].name.name))});
    g.exit_node = chain({out}, edge(f, n, node.succ[0]));
    PNode in;
    in.kind = PKind::Assign;
    for (std::size_t i = 0; i < s.args.size() && i < q.inputs.size(); ++i)
      in.assigns.push_back({g.vars.at(q.inputs[i].name.name), tr(f, s.args[i])});
    return chain({in}, pg(g, g.cfg->entry));
  }

  int summarize(Frame& f, int n, const Procedure& q) {
    const CfgNode& node = f.cfg->nodes[n];
    const Statement& s = *node.stmt;
    if (queued_.insert(&q).second) modular_queue.push_back(&q);
    Frame& g = new_frame(q, fresh_suffix('^'), f.depth + 1);
    auto tags = tags_of(q.body);
    auto props = table_.properties_at(q.body);
    std::vector<PNode> seq;
    PNode in;
    in.kind = PKind::Assign;
    for (std::size_t i = 0; i < s.args.size() && i < q.inputs.size(); ++i)
      in.assigns.push_back({g.vars.at(q.inputs[i].name.name), tr(f, s.args[i])});
    seq.push_back(std::move(in));
    ghost_assigns(g, tags, seq);
    for (const auto* a : of_kind(props, AttrKind::Requires)) {
      seq.push_back(assertion(ObligationKind::RequiresCall, "requires.call", f, tr_attr(g, *a), origin_tag(tags, a), a));
    }
    auto rk = ranks(props);
    if (&q == f.proc && !f.top_rank.empty() && !rk.empty()) {
      std::vector<Term> now;
      for (const auto& t : rk[0]->terms) now.push_back(tr(g, t));
      seq.push_back(assertion(ObligationKind::Decreases,
                              rk[0]->kind == AttrKind::Decreases ? "decreases" : "decreases-lex", f,
                              decrease_term(now, f.top_rank), origin_tag(tags, rk[0]), rk[0]));
    }
    if (rk.empty() && recursive(q.name.name)) unranked = true;
    PNode h;
    h.kind = PKind::Havoc;
    h.event = PathNode::Event::Summary;
    for (const auto& o : q.outputs) h.havoc.push_back(g.vars.at(o.name.name));
    for (const auto& v : modified_vars(q.body, table_))
      if (table_.globals.count(v) && !g.vars.count(v)) h.havoc.push_back(var(f, v));
    seq.push_back(std::move(h));
    for (const auto* a : of_kind(props, AttrKind::Ensures)) seq.push_back(assume(tr_attr(g, *a)));
    PNode out;
    out.kind = PKind::Assign;
    for (std::size_t i = 0; i < s.vars.size() && i < q.outputs.size(); ++i)
      out.assigns.push_back({var(f, s.vars[i].name), Term::var(g.vars.at(q.outputs[i].name.name))});
    seq.push_back(std::move(out));
    return chain(std::move(seq), edge(f, n, node.succ[0]));
  }
};

// ---- passification ----

class Encoder {
public:
  Encoder(const std::vector<PNode>& nodes, const std::map<std::string, Sort>& sorts, int entry,
          const SymbolTable& table)
      : nodes_(nodes), sorts_(sorts), entry_(entry), table_(table) {}

  std::vector<SExpr> decls, defs;
  std::vector<std::string> reach;
  std::vector<Term> asserted;  // per node, the asserted property in SMT constants
  std::vector<std::vector<Binding>> events;
  std::vector<bool> reachable;

  void run() {
    const std::size_t n = nodes_.size();
    reach.assign(n, "");
    asserted.assign(n, Term::boolean(true));
    events.assign(n, {});
    reachable.assign(n, false);
    out_.assign(n, {});
    rout_.assign(n, Term::boolean(false));
    std::vector<std::vector<int>> preds(n);
    std::vector<int> indeg(n, 0);
    std::vector<int> work{entry_};
    reachable[entry_] = true;
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      for (int w : nodes_[v].succ) {
        preds[w].push_back(v);
        if (!reachable[w]) {
          reachable[w] = true;
          work.push_back(w);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (reachable[v])
        for (int w : nodes_[v].succ) ++indeg[w];
    std::vector<int> ready{entry_}, order;
    while (!ready.empty()) {
      int v = ready.back();
      ready.pop_back();
      order.push_back(v);
      const auto& succ = nodes_[v].succ;
      for (auto it = succ.rbegin(); it != succ.rend(); ++it)
        if (--indeg[*it] == 0) ready.push_back(*it);
    }
    for (int v : order) step(v, preds[v]);
  }

  Term subst(const Term& t, const std::map<std::string, std::string>& st) {
    Renamer r{[&](const std::string& name) -> std::optional<Term> {
                if (!sorts_.count(name)) return std::nullopt;
                return Term::var(current(st, name));
              },
              nullptr, &table_, {}};
    return r(t);
  }

  std::string current(const std::map<std::string, std::string>& st, const std::string& v) {
    auto it = st.find(v);
    if (it != st.end()) return it->second;
    std::string s = v + "@0";
    declare(s, sorts_.at(v));
    return s;
  }

private:
  const std::vector<PNode>& nodes_;
  const std::map<std::string, Sort>& sorts_;
  int entry_;
  const SymbolTable& table_;
  std::map<std::string, int> next_;
  std::set<std::string> declared_;
  std::vector<std::map<std::string, std::string>> out_;
  std::vector<Term> rout_;

  void declare(const std::string& s, const Sort& sort) {
    if (!declared_.insert(s).second) return;
    decls.push_back(SExpr::list({SExpr::symbol("declare-const"), SExpr::symbol(s), to_sexpr(sort)}));
  }

  std::string fresh(const std::string& v) {
    std::string s = v + "@" + std::to_string(++next_[v]);
    declare(s, sorts_.at(v));
    return s;
  }

  void define(const Term& t) { defs.push_back(SExpr::list({SExpr::symbol("assert"), to_sexpr(t)})); }

  void step(int v, const std::vector<int>& preds) {
    const PNode& node = nodes_[v];
    std::map<std::string, std::string> st;
    std::string r = "ghost_reach_" + std::to_string(v);
    declare(r, Sort::named("Bool"));
    reach[v] = r;
    Term rin = Term::boolean(v == entry_);
    if (v != entry_ && !preds.empty()) {
      std::vector<Term> alts;
      for (int p : preds) alts.push_back(rout_[p]);
      rin = alts.size() == 1 ? alts[0] : Term::app("or", alts);
      if (preds.size() == 1) {
        st = out_[preds[0]];
      } else {
        std::set<std::string> keys;
        for (int p : preds)
          for (const auto& [k, s] : out_[p]) keys.insert(k);
        for (const auto& k : keys) {
          std::vector<std::string> syms;
          for (int p : preds) syms.push_back(current(out_[p], k));
          if (std::all_of(syms.begin(), syms.end(), [&](const std::string& s) { return s == syms[0]; })) {
            st[k] = syms[0];
            continue;
          }
          std::string m = fresh(k);
          for (std::size_t i = 0; i < preds.size(); ++i)
            define(Term::app("=>", {rout_[preds[i]], Term::app("=", {Term::var(m), Term::var(syms[i])})}));
          st[k] = m;
        }
      }
    }
    // The reach constant of an assume node already includes its condition.
    switch (node.kind) {
      case PKind::Nop:
        break;
      case PKind::Assume:
        rin = Term::app("and", {rin, subst(node.term, st)});
        break;
      case PKind::Assign: {
        std::vector<std::pair<std::string, Term>> vals;
        for (const auto& [x, t] : node.assigns) vals.push_back({x, subst(t, st)});
        for (auto& [x, t] : vals) {
          std::string s = fresh(x);
          define(Term::app("=", {Term::var(s), t}));
          st[x] = s;
        }
        break;
      }
      case PKind::Havoc:
        for (const auto& x : node.havoc) st[x] = fresh(x);
        break;
      case PKind::Assert:
        asserted[v] = subst(node.term, st);
        break;
    }
    define(Term::app("=", {Term::var(r), rin}));
    Term rout = Term::var(r);
    for (const auto& [prog, pgv] : node.event_vars) events[v].push_back({prog, current(st, pgv), sorts_.at(pgv)});
    out_[v] = std::move(st);
    rout_[v] = std::move(rout);
  }
};

std::vector<SExpr> background(const Script& script, std::size_t limit) {
  std::vector<SExpr> out;
  for (std::size_t i = 0; i < limit && i < script.commands.size(); ++i) {
    const Command& c = script.commands[i];
    if (c.kind != CmdKind::Smt) continue;
    switch (c.smt.kind) {
      case SmtKind::Assert:
      case SmtKind::DeclareConst:
      case SmtKind::DeclareDatatype:
      case SmtKind::DeclareDatatypes:
      case SmtKind::DeclareFun:
      case SmtKind::DeclareSort:
      case SmtKind::DefineConst:
      case SmtKind::DefineFun:
      case SmtKind::DefineFunRec:
      case SmtKind::DefineFunsRec:
      case SmtKind::DefineSort:
        out.push_back(to_sexpr(c.smt));
        break;
      default:
        break;
    }
  }
  return out;
}

std::vector<ModelFun> model_funs(const Script& script, std::size_t limit) {
  std::vector<ModelFun> out;
  for (std::size_t i = 0; i < limit && i < script.commands.size(); ++i) {
    const Command& c = script.commands[i];
    if (c.kind != CmdKind::Smt) continue;
    if (c.smt.kind == SmtKind::DeclareConst) out.push_back({c.smt.name.name, {}, c.smt.sort});
    if (c.smt.kind == SmtKind::DeclareFun) out.push_back({c.smt.name.name, c.smt.arg_sorts, c.smt.sort});
  }
  return out;
}

std::string logic_for(const SymbolTable& table, const std::vector<SExpr>& body, const std::map<std::string, Sort>& sorts) {
  if (!table.logic) return "ALL";
  std::string l = *table.logic;
  if (l == "ALL") return l;
  bool quant = false;
  for (const auto& e : body) quant = quant || mentions_quantifier(e);
  bool arrays = false, datatypes = !table.sorts.empty();
  for (const auto& [v, s] : sorts) arrays = arrays || mentions_sort(s, "Array");
  std::string core = l.rfind("QF_", 0) == 0 ? l.substr(3) : l;
  if (arrays && core.find('A') != 0 && core.find("AX") == std::string::npos) return "ALL";
  for (const auto& [name, info] : table.sorts)
    if (info.datatype && core.find("DT") == std::string::npos) return "ALL";
  (void)datatypes;
  if (quant && l.rfind("QF_", 0) == 0) return core;
  return l;
}

std::vector<SExpr> header(const std::string& logic) {
  return {SExpr::list({SExpr::symbol("set-option"), SExpr::keyword(":produce-models"), SExpr::symbol("true")}),
          SExpr::list({SExpr::symbol("set-logic"), SExpr::symbol(logic)})};
}

SExpr check_sat() { return SExpr::list({SExpr::symbol("check-sat")}); }

void name_uniquely(std::vector<Obligation>& obs) {
  std::map<std::string, int> seen;
  for (const auto& o : obs) ++seen[o.name];
  std::set<std::string> used;
  for (auto& o : obs) {
    if (seen[o.name] > 1 && !o.tag.empty() && !used.count(o.name + "." + o.tag)) o.name += "." + o.tag;
    std::string base = o.name;
    for (int k = 2; used.count(o.name); ++k) o.name = base + "." + std::to_string(k);
    used.insert(o.name);
  }
}

void emit_unit(Builder& b, const Script& script, std::size_t vi, std::vector<Obligation>& out) {
  Encoder enc(b.nodes, b.sorts, b.entry, b.table());
  enc.run();
  auto graph = std::make_shared<PathGraph>();
  graph->entry = b.entry;
  graph->proc = b.unit_proc;
  graph->from_entry = b.entry_unit;
  for (const auto& [name, info] : b.table().globals) {
    if (!b.sorts.count(name)) continue;
    graph->globals.push_back({name, enc.current({}, name), info.sort});
  }
  graph->model_funs = model_funs(script, vi);
  for (std::size_t i = 0; i < b.nodes.size(); ++i) {
    PathNode pn;
    pn.reach = enc.reach[i];
    pn.succ = b.nodes[i].succ;
    pn.event = b.nodes[i].event;
    pn.tag = b.nodes[i].tag;
    pn.choice = b.nodes[i].choice;
    pn.values = enc.events[i];
    graph->nodes.push_back(std::move(pn));
  }
  auto bg = background(script, vi);
  for (std::size_t i = 0; i < b.nodes.size(); ++i) {
    const PNode& n = b.nodes[i];
    if (n.kind != PKind::Assert || !enc.reachable[i]) continue;
    const Spec& s = b.specs[n.spec];
    Obligation ob;
    ob.name = s.name;
    ob.kind = s.kind;
    ob.proc = s.proc;
    ob.tag = s.tag;
    ob.attr = s.attr;
    ob.paths = graph;
    ob.target = static_cast<int>(i);
    std::vector<SExpr> body = bg;
    body.insert(body.end(), enc.decls.begin(), enc.decls.end());
    body.insert(body.end(), enc.defs.begin(), enc.defs.end());
    body.push_back(SExpr::list({SExpr::symbol("assert"),
                                to_sexpr(Term::app("and", {Term::var(enc.reach[i]), negate(enc.asserted[i])}))}));
    ob.script = header(logic_for(b.table(), body, b.sorts));
    ob.script.insert(ob.script.end(), body.begin(), body.end());
    ob.script.push_back(check_sat());
    out.push_back(std::move(ob));
  }
}

const Command* verify_command(const Script& script, std::size_t vi) {
  if (vi >= script.commands.size() || script.commands[vi].kind != CmdKind::VerifyCall) return nullptr;
  return &script.commands[vi];
}

}  // namespace

VcResult generate_obligations(const Script& script, std::size_t verify_index, const VcOptions& options) {
  VcResult res;
  const Command* vc = verify_command(script, verify_index);
  if (!vc) {
    res.status = VcStatus::Unsupported;
    res.reason = "no verify-call at the given index";
    return res;
  }
  try {
    Builder b(script, verify_index, options);
    const ProcInfo* info = b.table().proc(vc->name.name);
    if (!info) throw Abort{VcStatus::Unsupported, "unknown procedure " + vc->name.name};
    b.build_entry(*info->proc, vc->args);
    emit_unit(b, script, verify_index, res.obligations);
    for (std::size_t k = 0; k < b.modular_queue.size(); ++k) {
      const Procedure* p = b.modular_queue[k];
      b.build_modular(*p);
      emit_unit(b, script, verify_index, res.obligations);
    }
    if (b.saw_recurring) throw Abort{VcStatus::Unsupported, ":recurring properties can only be refuted by a lasso"};
    if (b.saw_not_recurring && b.unranked)
      throw Abort{VcStatus::Unsupported, ":not-recurring needs a ranking function at every loop and recursive call"};
  } catch (const Abort& a) {
    res.status = a.status;
    res.reason = a.reason;
    res.obligations.clear();
    return res;
  }
  name_uniquely(res.obligations);
  return res;
}

VcResult generate_lasso_obligations(const Script& script, std::size_t verify_index, const Trace& trace,
                                    const VcOptions& options) {
  VcResult res;
  if (!verify_command(script, verify_index)) {
    res.status = VcStatus::Unsupported;
    res.reason = "no verify-call at the given index";
    return res;
  }
  try {
    Builder b(script, verify_index, options);
    const SymbolTable& table = b.table();
    const std::string head = trace.violated.annotation.tag.name;
    auto it = table.tags.find(head);
    if (it == table.tags.end() || it->second.empty())
      throw Abort{VcStatus::Unsupported, "tag '" + head + "' does not occur in the script"};
    const TagSite& site = it->second[0];
    std::vector<const Attribute*> using_attrs;
    for (const auto& u : trace.using_annotations)
      if (u.tag.name == head)
        for (const auto& a : u.attrs)
          if (property_class(a.kind) == 'G') using_attrs.push_back(&a);

    // (a) the stem reaches a head state satisfying the using-annotations
    TraceVerdict v = run_trace(script, verify_index, trace);
    Obligation stem;
    stem.name = "lasso.stem";
    stem.kind = ObligationKind::LassoStem;
    stem.proc = site.proc->name.name;
    stem.tag = head;
    std::vector<SExpr> body = background(script, verify_index);
    Term claim = Term::boolean(false);
    if (v.kind == VerdictKind::ViolationConfirmed && v.lasso) {
      std::vector<Term> ts;
      bool ground = true;
      Renamer r{[&](const std::string& n) -> std::optional<Term> {
                  auto l = v.locals.find(n);
                  if (l != v.locals.end()) return to_term(l->second);
                  auto g = v.globals.find(n);
                  if (g != v.globals.end()) return to_term(g->second);
                  return std::nullopt;
                },
                [&](const Term& t) {
                  ground = false;
                  return t;
                },
                &table, {}};
      for (const auto* a : using_attrs)
        for (const auto& t : a->terms) ts.push_back(r(t));
      claim = ground ? conj(std::move(ts)) : Term::boolean(true);
    }
    body.push_back(SExpr::list({SExpr::symbol("assert"), to_sexpr(negate(claim))}));
    stem.script = header(table.logic.value_or("ALL"));
    stem.script.insert(stem.script.end(), body.begin(), body.end());
    stem.script.push_back(check_sat());
    res.obligations.push_back(std::move(stem));

    // (b) and (c)
    b.build_lasso(*site.proc, *site.stmt, using_attrs);
    emit_unit(b, script, verify_index, res.obligations);
  } catch (const Abort& a) {
    res.status = a.status;
    res.reason = a.reason;
    res.obligations.clear();
    return res;
  }
  name_uniquely(res.obligations);
  return res;
}

std::string emit_smt(const Obligation& ob) {
  std::string out;
  for (const auto& e : ob.script) {
    out += write(e);
    out += '\n';
  }
  return out;
}

}  // namespace svlib
