#include <doctest.h>

#include <set>

#include "support.hpp"
#include "svlib/linter.hpp"

using namespace svlib;

namespace {

std::set<std::string> ids(const std::vector<Diagnostic>& ds, Severity sev) {
  std::set<std::string> out;
  for (const auto& d : ds)
    if (d.severity == sev) out.insert(d.rule_id);
  return out;
}

std::vector<Diagnostic> lint_text(const std::string& text) { return lint(parse_script_text(text)); }

const char* kHeader = "(set-info :format-version \"1.0\")\n(set-option :produce-witnesses true)\n(set-logic LIA)\n";

}  // namespace

TEST_SUITE("linter") {

TEST_CASE("catalog fixtures trigger exactly their rule") {
  int seen = 0;
  for (const auto& rule : rule_catalog()) {
    auto path = support::fixtures() / "lint" / (std::string(rule.id) + ".svlib");
    if (!std::filesystem::exists(path)) {
      CHECK_MESSAGE(rule.item == 0, "missing fixture for " << rule.id);
      continue;
    }
    ++seen;
    CAPTURE(rule.id);
    std::string text = support::slurp(path);
    ParseResult r = parse_script_text(text);
    std::vector<Diagnostic> ds;
    if (rule.level == 'F') {
      CHECK(ids(check_full(r.script), Severity::Error) == std::set<std::string>{rule.id});
      continue;
    }
    ds = lint(r);
    if (rule.severity == Severity::Error) {
      CHECK(ids(ds, Severity::Error) == std::set<std::string>{rule.id});
    } else {
      CHECK(ids(ds, Severity::Error).empty());
      CHECK(ids(ds, Severity::Warning) == std::set<std::string>{rule.id});
    }
  }
  CHECK(seen == 26);
}

TEST_CASE("corpus tasks are well-formed") {
  for (const auto& id : corpus::list()) {
    CAPTURE(id);
    auto e = corpus::load(id);
    auto ds = lint_text(e.task);
    CHECK_FALSE(has_errors(ds));
  }
}

TEST_CASE("goto to an absent label") {
  auto ds = lint_text(std::string(kHeader) +
                      "(define-proc f () () () (! (sequence (label a) (goto b)) :tag f-body))");
  CHECK(ids(ds, Severity::Error) == std::set<std::string>{"S-GOTO-TARGET"});
}

TEST_CASE("assigning an input") {
  auto ds = lint_text(std::string(kHeader) + "(define-proc f ((x0 Int)) () () (! (assign (x0 1)) :tag f-body))");
  CHECK(ids(ds, Severity::Error) == std::set<std::string>{"S-ASSIGN-INPUT"});
}

TEST_CASE("non-Bool loop condition") {
  auto ds = lint_text(std::string(kHeader) + "(define-proc f () () () (! (while 5 (sequence)) :tag f-body))");
  CHECK(ids(ds, Severity::Error) == std::set<std::string>{"S-COND-BOOL"});
}

TEST_CASE("conditional goto mixed with while") {
  auto ds = lint_text(std::string(kHeader) +
                      "(define-proc f ((x Int)) () () (! (sequence (! (label l) :tag l-tag) (if (> x 0) (goto l))"
                      " (! (while false (sequence)) :tag w)) :tag f-body))");
  CHECK(ids(ds, Severity::Error).empty());
  CHECK(ids(ds, Severity::Warning).count("W-FRAGMENT-MIX") == 1);
}

TEST_CASE("annotate-tag of an unused tag is accepted") {
  auto ds = lint_text(std::string(kHeader) + "(annotate-tag ghost-tag :invariant true)");
  CHECK_FALSE(has_errors(ds));
}

TEST_CASE("full checks are not run on structurally broken scripts") {
  auto ds = lint_text(std::string(kHeader) + "(define-proc f () () () (while (> z 0) (sequence)))");
  CHECK(ids(ds, Severity::Error) == std::set<std::string>{"S-SCOPE"});
}

TEST_CASE("text and S-expression formats") {
  Diagnostic d{"S-SCOPE", Severity::Error, {0, 1, 3, 7}, "unknown symbol 'z'"};
  CHECK(format_text(d) == "error:S-SCOPE:3:7: unknown symbol 'z'");
  CHECK(format_sexpr(d).find("S-SCOPE") != std::string::npos);
}

TEST_CASE("lint is deterministic") {
  for (const auto& id : corpus::list()) {
    auto text = corpus::load(id).task;
    auto a = lint_text(text), b = lint_text(text);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(format_text(a[i]) == format_text(b[i]));
  }
}

}
