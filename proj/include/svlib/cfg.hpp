#pragma once

#include <set>
#include <utility>
#include <vector>

#include "svlib/ast.hpp"

namespace svlib {

enum class NodeKind { Nop, Assume, Assign, Havoc, Call, Branch, Choice, Visit, Leave, Exit };

struct CfgNode {
  NodeKind kind = NodeKind::Nop;
  /// Leaf statement for Assume/Assign/Havoc/Call; If/While/CondGoto for Branch;
  /// Choice statement; the outermost annotation wrapper for Visit/Leave;
  /// the annotated top-level body (or null) for Exit.
  const Statement* stmt = nullptr;
  const Term* cond = nullptr;  // Branch
  std::vector<int> succ;       // Branch: [true, false]; Choice: one per branch
  bool loop_head = false;      // Visit of an annotated while loop
};

/// Control-flow graph of one procedure body.
struct Cfg {
  const Procedure* proc = nullptr;
  std::vector<CfgNode> nodes;
  int entry = 0;
  int exit = 0;
  std::set<std::pair<int, int>> back_edges;
  std::set<int> cutpoints;  // loop heads and back-edge targets
  std::vector<int> idom;    // immediate dominators, -1 for entry and unreachable nodes
  bool reducible = true;

  std::vector<std::vector<int>> predecessors() const;
  bool is_back_edge(int from, int to) const { return back_edges.count({from, to}) > 0; }
  bool dominates(int a, int b) const;
  bool reachable(int n) const { return n == entry || idom[n] >= 0; }
};

Cfg build_cfg(const Procedure& p);

}  // namespace svlib
