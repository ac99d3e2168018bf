#include <doctest.h>

#include "svlib/smt_client.hpp"
#include "svlib/vcgen.hpp"

using namespace svlib;

namespace {

Obligation from_text(std::string name, const std::string& text) {
  Obligation ob;
  ob.name = std::move(name);
  ob.script = read_all(text);
  return ob;
}

}  // namespace

TEST_SUITE("smt-client") {

TEST_CASE("unsat and sat") {
  SolverConfig cfg = SolverConfig::from_environment();
  CHECK(run_solver("(assert false)\n(check-sat)\n", cfg).verdict == SolverVerdict::Unsat);
  SolverResult r = run_solver("(declare-const x Int)\n(assert (= x 3))\n(check-sat)\n", cfg);
  REQUIRE(r.verdict == SolverVerdict::Sat);
  auto model = model_commands(r);
  REQUIRE(model.size() == 1);
  CHECK(model[0].defs.at(0).name.name == "x");
  CHECK(model[0].defs.at(0).body == Term::numeral("3"));
}

TEST_CASE("proving true and reflexivity") {
  SolverConfig cfg = SolverConfig::from_environment();
  CHECK(discharge(from_text("t", "(assert (not true)) (check-sat)"), cfg).verdict == SolverVerdict::Unsat);
  CHECK(discharge(from_text("r", "(declare-const x Int) (assert (not (= x x))) (check-sat)"), cfg).verdict ==
        SolverVerdict::Unsat);
}

TEST_CASE("solver errors and missing solvers") {
  SolverConfig cfg = SolverConfig::from_environment();
  CHECK(run_solver("(assert (= y 1))\n(check-sat)\n", cfg).verdict == SolverVerdict::SolverError);
  SolverConfig missing = SolverConfig::from_command("no-such-solver-binary -in", 5);
  SolverResult r = run_solver("(check-sat)\n", missing);
  CHECK(r.verdict == SolverVerdict::SolverError);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("timeouts give unknown") {
  SolverConfig cfg = SolverConfig::from_command("sleep 5", 0.3);
  SolverResult r = run_solver("(check-sat)\n", cfg);
  CHECK(r.verdict == SolverVerdict::Unknown);
  CHECK(r.elapsed < 3.0);
}

TEST_CASE("discharge_all keeps order and skips after a failure") {
  SolverConfig cfg = SolverConfig::from_environment();
  CHECK(discharge_all({}, cfg).empty());
  std::vector<Obligation> obs{from_text("a", "(assert false) (check-sat)"),
                              from_text("b", "(declare-const x Int) (assert (= x 1)) (check-sat)"),
                              from_text("c", "(assert false) (check-sat)"),
                              from_text("d", "(assert false) (check-sat)")};
  auto all = discharge_all(obs, cfg, 3);
  REQUIRE(all.size() == 4);
  CHECK(all[0].verdict == SolverVerdict::Unsat);
  CHECK(all[1].verdict == SolverVerdict::Sat);
  CHECK(all[2].verdict == SolverVerdict::Unsat);
  auto early = discharge_all(obs, cfg, 1, true);
  CHECK(early[0].verdict == SolverVerdict::Unsat);
  CHECK(early[1].verdict == SolverVerdict::Sat);
  CHECK(early[2].verdict == SolverVerdict::Skipped);
  CHECK(early[3].verdict == SolverVerdict::Skipped);
}

TEST_CASE("solver command lines") {
  SolverConfig c = SolverConfig::from_command("cvc5 --lang smt2 --incremental", 7);
  CHECK(c.command == std::vector<std::string>{"cvc5", "--lang", "smt2", "--incremental"});
  CHECK(c.timeout == 7);
}

}
