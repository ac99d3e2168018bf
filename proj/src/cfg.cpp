#include "svlib/cfg.hpp"

#include <map>
#include <string>

namespace svlib {

namespace {

struct Builder {
  Cfg& g;
  std::map<std::string, int> labels;

  struct Ctx {
    int brk = -1;
    int cont = -1;
  };

  int add(NodeKind k, const Statement* s, std::vector<int> succ = {}) {
    CfgNode n;
    n.kind = k;
    n.stmt = s;
    n.succ = std::move(succ);
    g.nodes.push_back(std::move(n));
    return static_cast<int>(g.nodes.size()) - 1;
  }

  void scan_labels(const Statement& s) {
    if (s.kind == StmtKind::Label && !labels.count(s.name.name)) labels[s.name.name] = add(NodeKind::Nop, &s);
    for (const auto& c : s.children) scan_labels(c);
  }

  int label(const std::string& name) {
    auto it = labels.find(name);
    return it == labels.end() ? g.exit : it->second;
  }

  int loop(const Statement& w, const Statement* wrapper, int next, bool top) {
    if (wrapper) {
      int visit = add(NodeKind::Visit, wrapper);
      g.nodes[visit].loop_head = true;
      int leave = top ? next : add(NodeKind::Leave, wrapper, {next});
      int branch = add(NodeKind::Branch, &w);
      g.nodes[branch].cond = &w.cond;
      int body = build(w.body(), visit, Ctx{leave, visit});
      g.nodes[branch].succ = {body, leave};
      g.nodes[visit].succ = {branch};
      return visit;
    }
    int branch = add(NodeKind::Branch, &w);
    g.nodes[branch].cond = &w.cond;
    int body = build(w.body(), branch, Ctx{next, branch});
    g.nodes[branch].succ = {body, next};
    return branch;
  }

  int build(const Statement& s, int next, const Ctx& ctx, bool top = false) {
    switch (s.kind) {
      case StmtKind::Assume: {
        int n = add(NodeKind::Assume, &s, {next});
        g.nodes[n].cond = &s.cond;
        return n;
      }
      case StmtKind::Assign:
        return add(NodeKind::Assign, &s, {next});
      case StmtKind::Havoc:
        return add(NodeKind::Havoc, &s, {next});
      case StmtKind::Call:
        return add(NodeKind::Call, &s, {next});
      case StmtKind::Sequence: {
        int cur = next;
        for (auto it = s.children.rbegin(); it != s.children.rend(); ++it) cur = build(*it, cur, ctx);
        return cur;
      }
      case StmtKind::Annotated: {
        const Statement& inner = strip_annotations(s);
        if (inner.kind == StmtKind::While) return loop(inner, &s, next, top);
        if (inner.kind == StmtKind::Label) {
          int n = label(inner.name.name);
          g.nodes[n].kind = NodeKind::Visit;
          g.nodes[n].stmt = &s;
          g.nodes[n].succ = {next};
          return n;
        }
        int visit = add(NodeKind::Visit, &s);
        int after = top ? next : add(NodeKind::Leave, &s, {next});
        g.nodes[visit].succ = {build(inner, after, ctx)};
        return visit;
      }
      case StmtKind::Return:
        return g.exit;
      case StmtKind::Label: {
        int n = label(s.name.name);
        g.nodes[n].succ = {next};
        return n;
      }
      case StmtKind::Goto:
        return label(s.name.name);
      case StmtKind::CondGoto: {
        int n = add(NodeKind::Branch, &s, {label(s.name.name), next});
        g.nodes[n].cond = &s.cond;
        return n;
      }
      case StmtKind::If: {
        int n = add(NodeKind::Branch, &s);
        g.nodes[n].cond = &s.cond;
        int t = build(s.children[0], next, ctx);
        int e = s.has_else() ? build(s.children[1], next, ctx) : next;
        g.nodes[n].succ = {t, e};
        return n;
      }
      case StmtKind::While:
        return loop(s, nullptr, next, false);
      case StmtKind::Break:
        return ctx.brk >= 0 ? ctx.brk : next;
      case StmtKind::Continue:
        return ctx.cont >= 0 ? ctx.cont : next;
      case StmtKind::Choice: {
        int n = add(NodeKind::Choice, &s);
        std::vector<int> succ;
        for (const auto& c : s.children) succ.push_back(build(c, next, ctx));
        g.nodes[n].succ = std::move(succ);
        return n;
      }
    }
    return next;
  }
};

void analyze(Cfg& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> state(n, 0), order;
  std::vector<std::pair<int, std::size_t>> stack{{g.entry, 0}};
  state[g.entry] = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < g.nodes[v].succ.size()) {
      int w = g.nodes[v].succ[i++];
      if (state[w] == 1)
        g.back_edges.insert({v, w});
      else if (state[w] == 0) {
        state[w] = 1;
        stack.push_back({w, 0});
      }
    } else {
      state[v] = 2;
      order.push_back(v);
      stack.pop_back();
    }
  }
  std::vector<int> rpo(order.rbegin(), order.rend()), pos(n, -1);
  for (std::size_t i = 0; i < rpo.size(); ++i) pos[rpo[i]] = static_cast<int>(i);
  auto preds = g.predecessors();
  g.idom.assign(n, -1);
  std::vector<int> dom(n, -1);
  dom[g.entry] = g.entry;
  auto intersect = [&](int a, int b) {
    while (a != b) {
      while (pos[a] > pos[b]) a = dom[a];
      while (pos[b] > pos[a]) b = dom[b];
    }
    return a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int v : rpo) {
      if (v == g.entry) continue;
      int nd = -1;
      for (int p : preds[v]) {
        if (dom[p] < 0) continue;
        nd = nd < 0 ? p : intersect(p, nd);
      }
      if (nd != dom[v]) {
        dom[v] = nd;
        changed = true;
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (v != g.entry) g.idom[v] = dom[v];
  for (const auto& [from, to] : g.back_edges) {
    g.cutpoints.insert(to);
    if (!g.dominates(to, from)) g.reducible = false;
  }
  for (int v = 0; v < n; ++v)
    if (g.nodes[v].loop_head && g.reachable(v)) g.cutpoints.insert(v);
}

}  // namespace

std::vector<std::vector<int>> Cfg::predecessors() const {
  std::vector<std::vector<int>> p(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v)
    for (int w : nodes[v].succ) p[w].push_back(static_cast<int>(v));
  return p;
}

bool Cfg::dominates(int a, int b) const {
  if (!reachable(b)) return false;
  for (int v = b; v >= 0; v = idom[v])
    if (v == a) return true;
  return false;
}

Cfg build_cfg(const Procedure& p) {
  Cfg g;
  g.proc = &p;
  Builder b{g, {}};
  g.exit = b.add(NodeKind::Exit, p.body.kind == StmtKind::Annotated ? &p.body : nullptr);
  b.scan_labels(p.body);
  g.entry = b.build(p.body, g.exit, {}, true);
  analyze(g);
  return g;
}

}  // namespace svlib
