#include "svlib/witness.hpp"

#include <algorithm>
#include <map>

#include "svlib/printer.hpp"
#include "svlib/sexpr.hpp"

namespace svlib {

namespace {

std::vector<SmtCommand> metadata(const WitnessMeta& meta) {
  SmtCommand producer;
  producer.kind = SmtKind::SetInfo;
  producer.keyword = ":producer";
  producer.value = SExpr::string_literal(meta.producer);
  SmtCommand files;
  files.kind = SmtKind::SetInfo;
  files.keyword = ":input-files";
  std::vector<SExpr> names;
  for (const auto& f : meta.input_files) names.push_back(SExpr::string_literal(f));
  files.value = SExpr::list(std::move(names));
  return {producer, files};
}

std::optional<Term> default_value(const Sort& s) {
  if (s.is("Int")) return Term::numeral("0");
  if (s.is("Real")) return Term::constant(SExpr::atom(AtomKind::Decimal, "0.0"));
  if (s.is("Bool")) return Term::boolean(false);
  if (s.name == "BitVec" && s.indices.size() == 1 && s.indices[0].is_numeral())
    return Term::constant(SExpr::atom(AtomKind::Binary, "#b" + std::string(std::stoul(s.indices[0].text()), '0')));
  return std::nullopt;
}

}  // namespace

Witness correctness_witness(const Script& script, std::size_t verify_index, const WitnessMeta& meta) {
  Witness w;
  w.metadata = metadata(meta);
  for (std::size_t i = 0; i < verify_index && i < script.commands.size(); ++i) {
    const Command& c = script.commands[i];
    if (c.kind != CmdKind::AnnotateTag) continue;
    TagAttrs ta;
    ta.tag = c.name;
    for (const auto& a : c.attrs)
      if (a.kind == AttrKind::Requires || a.kind == AttrKind::Ensures || a.kind == AttrKind::Invariant ||
          a.kind == AttrKind::Decreases || a.kind == AttrKind::DecreasesLex)
        ta.attrs.push_back(a);
    if (!ta.attrs.empty() && std::find(w.annotations.begin(), w.annotations.end(), ta) == w.annotations.end())
      w.annotations.push_back(std::move(ta));
  }
  return w;
}

Witness violation_witness(const Trace& trace, const WitnessMeta& meta) {
  Witness w;
  w.is_violation = true;
  w.metadata = metadata(meta);
  w.traces.push_back(trace);
  return w;
}

Witness invalid_step_witness(const Trace& trace, const Step& step, const WitnessMeta& meta) {
  Trace t = trace;
  t.violated = ViolatedProperty{};
  t.violated.invalid_step = true;
  t.violated.step = step;
  t.using_annotations.clear();
  return violation_witness(t, meta);
}

std::optional<Trace> trace_from_model(const Obligation& ob, const std::vector<SmtCommand>& model, std::string* why) {
  auto fail = [&](const std::string& msg) -> std::optional<Trace> {
    if (why) *why = msg;
    return std::nullopt;
  };
  if (!ob.paths || ob.target < 0) return fail("the obligation carries no path information");
  const PathGraph& g = *ob.paths;
  if (!g.from_entry) return fail("the failing check is not reachable from the verify-call as a concrete trace");
  if (!ob.attr || ob.tag.empty()) return fail("the violated annotation has no tag");

  std::map<std::string, const FunDef*> defs;
  for (const auto& c : model)
    if (c.kind == SmtKind::DefineFun && !c.defs.empty()) defs[c.defs[0].name.name] = &c.defs[0];
  auto value = [&](const Binding& b) -> std::optional<Term> {
    auto it = defs.find(b.symbol);
    if (it != defs.end() && it->second->params.empty()) return it->second->body;
    return default_value(b.sort);
  };
  auto holds = [&](const std::string& sym) {
    auto it = defs.find(sym);
    return it != defs.end() && it->second->body.is_true();
  };

  Trace t;
  t.entry_proc = Symbol(g.proc);
  for (const auto& f : g.model_funs) {
    auto it = defs.find(f.name);
    SmtCommand c;
    c.kind = SmtKind::DefineFun;
    if (it != defs.end()) {
      c.defs.push_back(*it->second);
    } else {
      auto v = default_value(f.result);
      if (!v) return fail("no value for " + f.name + " in the model");
      FunDef d;
      d.name = Symbol(f.name);
      for (std::size_t i = 0; i < f.args.size(); ++i) d.params.push_back({Symbol("x" + std::to_string(i)), f.args[i]});
      d.result = f.result;
      d.body = *v;
      c.defs.push_back(std::move(d));
    }
    c.name = c.defs[0].name;
    t.model.push_back(std::move(c));
  }
  for (const auto& b : g.globals) {
    auto v = value(b);
    if (v) t.init_globals.push_back({Symbol(b.var), *v});
  }

  int cur = g.entry;
  std::size_t guard = 0;
  while (true) {
    if (++guard > g.nodes.size() + 1) return fail("the model does not determine a path");
    const PathNode& n = g.nodes[cur];
    switch (n.event) {
      case PathNode::Event::None:
        break;
      case PathNode::Event::Summary:
        return fail("the path uses a procedure or statement contract instead of its body");
      case PathNode::Event::Choice: {
        Step s;
        s.kind = StepKind::Choice;
        s.choice = n.choice;
        t.steps.push_back(std::move(s));
        break;
      }
      case PathNode::Event::Havoc:
      case PathNode::Event::Leap: {
        Step s;
        s.kind = n.event == PathNode::Event::Havoc ? StepKind::Havoc : StepKind::Leap;
        if (s.kind == StepKind::Leap) {
          if (n.tag.empty()) return fail("the path leaps over an untagged loop");
          s.name = Symbol(n.tag);
        }
        for (const auto& b : n.values) {
          auto v = value(b);
          if (!v) return fail("no value for " + b.var + " in the model");
          s.values.push_back({Symbol(b.var), *v});
        }
        t.steps.push_back(std::move(s));
        break;
      }
    }
    if (cur == ob.target) break;
    int next = -1;
    for (int s : n.succ)
      if (holds(g.nodes[s].reach)) {
        next = s;
        break;
      }
    if (next < 0) return fail("the model does not determine a path");
    cur = next;
  }
  t.violated.annotation.tag = Symbol(ob.tag);
  t.violated.annotation.attrs.push_back(*ob.attr);
  return t;
}

bool uses_reserved_symbols(const std::string& witness_text) {
  std::vector<SExpr> exprs;
  try {
    exprs = read_all(witness_text);
  } catch (const LexError&) {
    return false;
  }
  std::vector<const SExpr*> work;
  for (const auto& e : exprs) work.push_back(&e);
  while (!work.empty()) {
    const SExpr* e = work.back();
    work.pop_back();
    if (e->is_symbol() && !e->symbol_name().empty() && e->symbol_name()[0] == '#') return true;
    if (e->is_list())
      for (const auto& c : e->items()) work.push_back(&c);
  }
  return false;
}

}  // namespace svlib
