#include "properties.hpp"

#include <random>

#include "support.hpp"
#include "svlib/interpreter.hpp"
#include "svlib/linter.hpp"
#include "svlib/printer.hpp"
#include "svlib/symbols.hpp"

using namespace svlib;

namespace props {

namespace {

struct Runner {
  Outcome out;
  explicit Runner(std::string name) { out.name = std::move(name); }
  void check(bool cond, const std::string& what) {
    ++out.cases;
    if (cond) return;
    if (out.failures++ == 0) out.first_failure = what;
  }
};

/// Adds blanks, line breaks and comments between tokens without changing the meaning.
std::string perturb(const std::string& text, std::mt19937_64& rng) {
  std::string out;
  bool in_string = false, in_quote = false;
  for (char c : text) {
    out += c;
    if (c == '"' && !in_quote) in_string = !in_string;
    if (c == '|' && !in_string) in_quote = !in_quote;
    if (in_string || in_quote) continue;
    if (c == '(' || c == ')' || c == ' ') {
      switch (rng() % 6) {
        case 0: out += "  "; break;
        case 1: out += "\n\t"; break;
        case 2: out += " ; note ( \n"; break;
        default: break;
      }
    }
  }
  return out;
}

Statement wrap(Statement s, std::mt19937_64& rng, int& tag) {
  for (auto& c : s.children) c = wrap(std::move(c), rng, tag);
  int layers = static_cast<int>(rng() % 4);
  for (int i = 0; i < layers; ++i) {
    Statement a;
    a.kind = StmtKind::Annotated;
    a.children.push_back(std::move(s));
    int n = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < n; ++k) {
      Attribute t;
      t.kind = AttrKind::Tag;
      t.symbol = Symbol("w" + std::to_string(tag++));
      a.attrs.push_back(t);
    }
    s = std::move(a);
  }
  return s;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Outcome parse_print_identity(int n) {
  Runner r("parse(print(s)) == s on generated scripts");
  for (int seed = 0; seed < n; ++seed) {
    Script s = corpus::generate_random_program(static_cast<std::uint64_t>(seed), 1 + seed % 14);
    ParseResult p = parse_script_text(print_script(s));
    r.check(p.ok() && p.script == s, "seed " + std::to_string(seed));
  }
  return r.out;
}

Outcome print_parse_idempotence(int n) {
  Runner r("print(parse(t)) is a fixed point on perturbed text");
  std::mt19937_64 rng(7);
  for (int seed = 0; seed < n; ++seed) {
    std::string text = perturb(print_script(corpus::generate_random_program(1000 + seed, 1 + seed % 14)), rng);
    ParseResult p1 = parse_script_text(text);
    std::string once = print_script(p1.script);
    std::string twice = print_script(parse_script_text(once).script);
    r.check(p1.ok() && once == twice, "seed " + std::to_string(seed));
  }
  return r.out;
}

Outcome flattening_idempotence(int n) {
  Runner r("flatten(flatten(s)) == flatten(s)");
  std::mt19937_64 rng(11);
  int tag = 0;
  for (int seed = 0; seed < n; ++seed) {
    Script s = corpus::generate_random_program(2000 + seed, 8);
    const Statement* body = nullptr;
    for (const auto& c : s.commands)
      if (!c.procs.empty()) body = &c.procs.back().body;
    Statement w = wrap(*body, rng, tag);
    Statement f = flatten_annotations(w);
    bool no_nesting = true;
    for_each_statement(f, [&](const Statement& st) {
      if (st.kind == StmtKind::Annotated && st.inner().kind == StmtKind::Annotated) no_nesting = false;
    });
    std::vector<const Attribute*> before, after;
    strip_annotations(w, &before);
    strip_annotations(f, &after);
    r.check(flatten_annotations(f) == f && no_nesting && before.size() == after.size(), "seed " + std::to_string(seed));
  }
  return r.out;
}

Outcome parallel_assign_swap(int n) {
  Runner r("(assign (a b) (b a)) swaps");
  Script s = support::parse_ok(
      "(define-proc swap ((a0 Int) (b0 Int)) ((a Int) (b Int)) ()"
      " (sequence (assign (a a0) (b b0)) (assign (a b) (b a))))");
  std::mt19937_64 rng(3);
  for (int i = 0; i < n; ++i) {
    mpz_class x(std::to_string(static_cast<long long>(rng())) + std::to_string(rng() % 1000));
    mpz_class y(static_cast<long>(rng() % 2001) - 1000);
    if (i % 2) x = -x;
    ConcreteResult c = run_concrete(s, "swap", {Value::integer(x), Value::integer(y)});
    r.check(c.status == ConcreteStatus::Returned && c.locals.at("a") == Value::integer(y) &&
                c.locals.at("b") == Value::integer(x),
            "swap " + x.get_str() + " " + y.get_str());
  }
  return r.out;
}

Outcome add_matches_brute_force() {
  Runner r("add(x0, y0) == x0 + y0 for 0 <= x0, y0 <= 8");
  Script s = support::parse_ok(std::string("(set-logic LIA)") + support::kAddProc);
  for (long a = 0; a <= 8; ++a)
    for (long b = 0; b <= 8; ++b) {
      long sum = a;
      for (long k = 0; k < b; ++k) ++sum;
      ConcreteResult c = run_concrete(s, "add", {Value::integer(a), Value::integer(b)});
      r.check(c.status == ConcreteStatus::Returned && c.locals.at("x") == Value::integer(sum),
              "add " + std::to_string(a) + " " + std::to_string(b));
    }
  return r.out;
}

Outcome modified_vars_monotone(int n) {
  Runner r("modified_vars(child) is a subset of modified_vars(parent)");
  for (int seed = 0; seed < n; ++seed) {
    Script s = corpus::generate_random_program(3000 + seed, 10);
    SymbolTable t(s);
    bool ok = true;
    for (const auto& c : s.commands)
      for (const auto& p : c.procs)
        for_each_statement(p.body, [&](const Statement& st) {
          auto mine = modified_vars(st, t);
          for (const auto& ch : st.children) ok = ok && subset(modified_vars(ch, t), mine);
          Statement seq;
          seq.kind = StmtKind::Sequence;
          seq.children = {st, parse_statement_text("(havoc zz)")};
          ok = ok && subset(mine, modified_vars(seq, t));
        });
    r.check(ok, "seed " + std::to_string(seed));
  }
  return r.out;
}

Outcome lint_deterministic(int n) {
  Runner r("lint gives identical diagnostics on repeated runs");
  for (int seed = 0; seed < n; ++seed) {
    std::string text = print_script(corpus::generate_random_program(4000 + seed, 12));
    if (seed % 3 == 0) text += "(define-proc p0 () () () (assign (zz 1)))(annotate-tag t0 :invariant 3)";
    auto render = [&] {
      std::string out;
      for (const auto& d : lint(parse_script_text(text))) out += format_text(d) + "\n";
      return out;
    };
    std::string a = render();
    r.check(a == render() && a == render(), "seed " + std::to_string(seed));
  }
  return r.out;
}

std::vector<Outcome> all(int n) {
  return {parse_print_identity(n),   print_parse_idempotence(n), flattening_idempotence(n), parallel_assign_swap(n),
          add_matches_brute_force(), modified_vars_monotone(n),  lint_deterministic(n)};
}

}  // namespace props
