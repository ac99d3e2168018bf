#pragma once

#include <atomic>
#include <iosfwd>
#include <optional>
#include <string>

#include "svlib/session.hpp"

namespace svlib {

/// Cuts a character stream into top-level S-expressions, respecting string
/// literals, quoted symbols and comments.
class CommandSplitter {
public:
  /// Feeds one chunk; returns the completed command texts.
  std::vector<std::string> feed(std::string_view chunk);
  /// Leftover text after the input ended, if it is not blank.
  std::optional<std::string> finish();

private:
  std::string buf_;
  int depth_ = 0;
  enum class Mode { Plain, String, Quoted, Comment, Atom } mode_ = Mode::Plain;
  bool started_ = false;
};

enum class DiagnosticFormat { Text, Sexpr };

struct DialogueChannels {
  std::ostream* out = nullptr;      // responses
  std::ostream* diag = nullptr;     // diagnostics, may be null
  std::ostream* witness = nullptr;  // get-witness output, defaults to `out`
  DiagnosticFormat format = DiagnosticFormat::Text;
};

/// Runs commands from `in` until end of input (or until `stop` becomes true),
/// answering each one as soon as it is complete. Returns true if any response
/// was an error.
bool run_dialogue(Session& session, std::istream& in, const DialogueChannels& ch,
                  const std::atomic<bool>* stop = nullptr);

}  // namespace svlib
