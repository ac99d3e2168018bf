#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svlib/ast.hpp"
#include "svlib/smt_client.hpp"
#include "svlib/witness.hpp"

namespace svlib {

struct SessionOptions {
  /// Set from the command line; takes precedence over set-option in the script.
  std::optional<bool> produce_witnesses;
  SolverConfig solver = SolverConfig::from_environment();
  int parallelism = 4;
  std::uint64_t fuel = 1'000'000;
  std::vector<std::string> input_files;
};

struct Response {
  enum class Kind { Success, Silent, Correct, Incorrect, Unknown, Unsupported, Error, Witness };
  Kind kind = Kind::Success;
  std::string text;  // error message or witness text
  std::vector<std::string> diagnostics;

  /// The text written to the regular output channel (empty for Silent).
  std::string render() const;
  static Response error(std::string msg);
};

struct VerdictRecord {
  Response::Kind verdict = Response::Kind::Unknown;
  std::optional<Witness> witness;
  std::string export_error;  // set when no witness can be produced
};

class Session {
public:
  explicit Session(SessionOptions options = {});

  Response execute(const Command& cmd);
  /// Parses `text` and executes each command; malformed commands get an Error response.
  std::vector<Response> execute_text(std::string_view text);

  const Script& script() const { return script_; }
  bool trace_mode() const { return trace_mode_; }
  const std::optional<VerdictRecord>& last_verdict() const { return last_; }
  std::optional<SExpr> option(const std::string& keyword) const;
  bool produce_witnesses() const;

private:
  SessionOptions opt_;
  Script script_;
  std::map<std::string, SExpr> options_;
  std::vector<Trace> pending_;
  bool trace_mode_ = false;
  std::optional<VerdictRecord> last_;

  Response success() const;
  Response append(const Command& cmd);
  Response smt(const Command& cmd);
  Response verify(const Command& cmd);
  Response replay(std::size_t index, const Trace& trace);
  Response prove(std::size_t index);
  Response get_witness();
  Response conclude(VerdictRecord rec, std::vector<std::string> diagnostics = {});
  WitnessMeta meta() const;
};

/// Inserts the witness commands immediately before the verify-call number
/// `which` (counting from zero; default the last). Throws std::invalid_argument
/// when the task has no such verify-call.
Script combine(const Script& task, const Witness& witness, std::optional<std::size_t> which = std::nullopt);

/// The commands a witness contributes to a script.
std::vector<Command> witness_commands(const Witness& w);

}  // namespace svlib
