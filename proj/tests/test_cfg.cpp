#include <doctest.h>

#include "support.hpp"
#include "svlib/cfg.hpp"
#include "svlib/symbols.hpp"

using namespace svlib;

namespace {

const Procedure& proc(const Script& s, const std::string& name) {
  for (const auto& c : s.commands)
    for (const auto& p : c.procs)
      if (p.name.name == name) return p;
  throw std::runtime_error("no procedure " + name);
}

std::vector<std::string> cut_tags(const Cfg& g) {
  std::vector<std::string> out;
  for (int n : g.cutpoints) {
    const CfgNode& node = g.nodes[n];
    if (node.stmt)
      for (const auto& t : tags_of(*node.stmt)) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_SUITE("cfg") {

TEST_CASE("the add loop is the only cutpoint") {
  Script s = support::parse_ok(std::string("(set-logic LIA)") + support::kAddProc);
  Cfg g = build_cfg(proc(s, "add"));
  CHECK(g.reducible);
  CHECK(g.cutpoints.size() == 1);
  CHECK(cut_tags(g) == std::vector<std::string>{"while-loop"});
  CHECK(g.back_edges.size() == 1);
}

TEST_CASE("straight-line code has no cutpoints") {
  Script s = support::parse_ok("(define-proc f ((a Int)) ((r Int)) () (sequence (assign (r a)) (assume (> r 0))))");
  Cfg g = build_cfg(proc(s, "f"));
  CHECK(g.cutpoints.empty());
  CHECK(g.back_edges.empty());
  CHECK(g.reachable(g.exit));
}

TEST_CASE("a backward goto makes its label a cutpoint") {
  Script s = support::parse_ok(
      "(define-proc f ((a Int)) ((r Int)) () (sequence (assign (r a)) (! (label L) :tag l-tag)"
      " (assign (r (- r 1))) (if (> r 0) (goto L))))");
  Cfg g = build_cfg(proc(s, "f"));
  CHECK(g.back_edges.size() == 1);
  CHECK(g.cutpoints.size() == 1);
  int target = g.back_edges.begin()->second;
  CHECK(g.cutpoints.count(target) == 1);
}

TEST_CASE("jumping into a loop is irreducible") {
  Script s = support::parse_ok(
      "(define-proc f ((a Int)) ((r Int)) () (sequence (assign (r a)) (if (> r 0) (goto B))"
      " (label A) (assign (r (- r 1))) (label B) (assign (r (- r 1))) (if (> r 0) (goto A))))");
  Cfg g = build_cfg(proc(s, "f"));
  CHECK_FALSE(g.reducible);
}

TEST_CASE("return and break edges") {
  Script s = support::parse_ok(
      "(define-proc f ((a Int)) ((r Int)) () (sequence (assign (r a))"
      " (while true (sequence (if (> r 3) (break)) (assign (r (+ r 1)))))"
      " (if (> r 10) (return)) (assign (r 0))))");
  Cfg g = build_cfg(proc(s, "f"));
  CHECK(g.reachable(g.exit));
  CHECK(g.back_edges.size() == 1);
  auto preds = g.predecessors();
  CHECK(preds[g.exit].size() >= 2);
}

}

TEST_SUITE("symbols") {

TEST_CASE("modified variables") {
  Script s = support::parse_ok(std::string("(set-logic LIA) (declare-var g Int)") + support::kAddProc +
                               "(define-proc h () () () (assign (g 1)))"
                               "(define-proc k ((a Int)) ((b Int)) () (sequence (call h () ()) (assign (b a))))");
  SymbolTable t(s);
  const Procedure& add = proc(s, "add");
  const Statement& loop = strip_annotations(strip_annotations(add.body).children.at(1));
  REQUIRE(loop.kind == StmtKind::While);
  CHECK(modified_vars(loop.body(), t) == std::set<std::string>{"x", "y"});
  CHECK(modified_vars(parse_statement_text("(assume true)"), t).empty());
  CHECK(modified_vars(parse_statement_text("(choice (choice (assign (a 1)) (havoc b)) (assume true))"), t) ==
        std::set<std::string>{"a", "b"});
  CHECK(modified_vars(proc(s, "k").body, t) == std::set<std::string>{"b", "g"});
}

TEST_CASE("tags and annotations") {
  Script s = support::parse_ok(std::string("(set-logic LIA)") + support::kAddProc +
                               "(annotate-tag while-loop :invariant (>= y 0))"
                               "(annotate-tag proc-add :ensures (= x (+ x0 y0)))");
  SymbolTable t(s);
  CHECK(t.tags.at("while-loop").size() == 1);
  CHECK(t.attributes_of("while-loop").size() == 1);
  CHECK(t.attributes_of("proc-add").size() == 1);
  CHECK(t.attributes_of("nothing").empty());
}

TEST_CASE("free variables skip bound names") {
  Term q = parse_term_text("(forall ((i Int)) (=> (> i n) (> (+ i m) 0)))");
  CHECK(free_vars(q) == std::set<std::string>{"m", "n"});
  Term l = parse_term_text("(let ((z (+ a 1))) (> z b))");
  CHECK(free_vars(l) == std::set<std::string>{"a", "b"});
}

}
