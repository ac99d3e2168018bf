#include <doctest.h>

#include <set>

#include "support.hpp"
#include "svlib/linter.hpp"
#include "svlib/printer.hpp"
#include "svlib/symbols.hpp"

using namespace svlib;

TEST_SUITE("corpus") {

TEST_CASE("catalog") {
  auto ids = corpus::list();
  for (const char* id : {"loop-add", "loop-add-incremental", "loop-add-incorrect-ensures", "loop-add-incorrect-liveness",
                         "loop-add-incorrect-invariant", "loop-add-validation"})
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
  CHECK_THROWS_AS(corpus::load("no-such-entry"), std::out_of_range);
}

TEST_CASE("entries") {
  auto add = corpus::load("loop-add");
  CHECK(add.expected_verdicts == std::vector<std::string>{"correct"});
  CHECK(add.witness);
  auto inv = corpus::load("loop-add-incorrect-invariant");
  CHECK(inv.expected_verdicts == std::vector<std::string>{"incorrect"});
  CHECK(parse_witness_text(*inv.witness).is_violation);
  auto inc = corpus::load("loop-add-incremental");
  CHECK(inc.expected_verdicts == std::vector<std::string>{"correct", "correct"});
  for (const auto& id : corpus::list()) {
    auto e = corpus::load(id);
    CAPTURE(id);
    ParseResult r = parse_script_text(e.task);
    CHECK(r.ok());
    CHECK_FALSE(has_errors(check_full(r.script)));
    if (e.witness) CHECK_NOTHROW(parse_witness_text(*e.witness));
  }
}

TEST_CASE("the smallest generated program") {
  Script s = corpus::generate_random_program(0, 1);
  int procs = 0;
  for (const auto& c : s.commands) procs += static_cast<int>(c.procs.size());
  CHECK(procs == 1);
}

TEST_CASE("generated programs are structurally well-formed") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Script s = corpus::generate_random_program(seed, 1 + static_cast<int>(seed % 12));
    auto ds = check_structural(s);
    CAPTURE(seed);
    CHECK_FALSE(has_errors(ds));
  }
}

TEST_CASE("generated programs stay within their fragments") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Script s = corpus::generate_random_program(seed, 10);
    std::string text = print_script(s);
    CHECK(text.find('#') == std::string::npos);
    for (const auto& c : s.commands)
      for (const auto& p : c.procs)
        for_each_statement(p.body, [](const Statement& st) {
          char f = st.fragment();
          CHECK((f == 'B' || f == 'S' || f == 'N'));
        });
  }
}

TEST_CASE("seeds give distinct programs") {
  std::set<std::string> texts;
  for (std::uint64_t seed = 0; seed < 100; ++seed) texts.insert(print_script(corpus::generate_random_program(seed, 6)));
  CHECK(texts.size() == 100);
  CHECK(print_script(corpus::generate_random_program(42, 6)) == print_script(corpus::generate_random_program(42, 6)));
}

}
