#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "svlib/corpus.hpp"
#include "svlib/parser.hpp"
#include "svlib/session.hpp"

namespace support {

inline std::filesystem::path fixtures() { return SVLIB_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline svlib::Script parse_ok(std::string_view text) {
  svlib::ParseResult r = svlib::parse_script_text(text);
  if (!r.ok()) throw std::runtime_error("parse error: " + r.errors.front().message);
  return std::move(r.script);
}

inline std::size_t last_verify(const svlib::Script& s) {
  for (std::size_t i = s.commands.size(); i-- > 0;)
    if (s.commands[i].kind == svlib::CmdKind::VerifyCall) return i;
  throw std::runtime_error("no verify-call");
}

/// The task of a corpus entry with its witness spliced in, when it has one.
inline svlib::Script validation_task(const svlib::corpus::CorpusEntry& e) {
  svlib::Script task = parse_ok(e.task);
  if (!e.witness) return task;
  return svlib::combine(task, svlib::parse_witness_text(*e.witness));
}

/// Add from the loop-add corpus entry without any annotation commands.
inline const char* kAddProc = R"((define-proc add ((x0 Int) (y0 Int)) ((x Int)) ((y Int))
  (! (sequence
       (assign (x x0) (y y0))
       (! (while (> y 0)
            (assign (x (+ x 1)) (y (- y 1))))
          :tag while-loop))
     :tag proc-add))
)";

}  // namespace support
