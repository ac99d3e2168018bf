#include "svlib/dialogue.hpp"

#include <cctype>
#include <istream>
#include <ostream>

#include "svlib/sexpr.hpp"

namespace svlib {

std::vector<std::string> CommandSplitter::feed(std::string_view chunk) {
  std::vector<std::string> done;
  auto flush = [&] {
    done.push_back(buf_);
    buf_.clear();
    started_ = false;
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    char c = chunk[i];
    switch (mode_) {
      case Mode::Comment:
        if (c == '\n') mode_ = Mode::Plain;
        if (started_) buf_ += c;
        continue;
      case Mode::String:
        buf_ += c;
        // a doubled quote is an escaped quote; the closing one is decided on the next char
        if (c == '"') {
          if (i + 1 < chunk.size() && chunk[i + 1] == '"') {
            buf_ += chunk[++i];
          } else {
            mode_ = Mode::Plain;
            if (depth_ == 0) flush();
          }
        }
        continue;
      case Mode::Quoted:
        buf_ += c;
        if (c == '|') {
          mode_ = Mode::Plain;
          if (depth_ == 0) flush();
        }
        continue;
      case Mode::Atom:
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '"') {
          mode_ = Mode::Plain;
          flush();
          break;  // reprocess c as plain
        }
        buf_ += c;
        continue;
      case Mode::Plain:
        break;
    }
    if (c == ';') {
      mode_ = Mode::Comment;
      continue;
    }
    if (!started_ && std::isspace(static_cast<unsigned char>(c))) continue;
    started_ = true;
    buf_ += c;
    if (c == '"') {
      mode_ = Mode::String;
    } else if (c == '|') {
      mode_ = Mode::Quoted;
    } else if (c == '(') {
      ++depth_;
    } else if (c == ')') {
      if (depth_ > 0) --depth_;
      if (depth_ == 0) flush();
    } else if (depth_ == 0 && !std::isspace(static_cast<unsigned char>(c))) {
      mode_ = Mode::Atom;
    }
  }
  return done;
}

std::optional<std::string> CommandSplitter::finish() {
  std::string rest = std::move(buf_);
  buf_.clear();
  depth_ = 0;
  mode_ = Mode::Plain;
  started_ = false;
  for (char c : rest)
    if (!std::isspace(static_cast<unsigned char>(c))) return rest;
  return std::nullopt;
}

namespace {

bool respond(Session& s, const std::string& text, const DialogueChannels& ch) {
  bool error = false;
  for (const auto& r : s.execute_text(text)) {
    if (r.kind == Response::Kind::Error) error = true;
    std::string line = r.render();
    if (!line.empty()) {
      std::ostream& o = r.kind == Response::Kind::Witness && ch.witness ? *ch.witness : *ch.out;
      o << line << '\n';
      o.flush();
    }
    if (ch.diag) {
      for (const auto& d : r.diagnostics) {
        if (ch.format == DiagnosticFormat::Sexpr)
          *ch.diag << "(diagnostic " << write(SExpr::string_literal(d)) << ")\n";
        else
          *ch.diag << "diagnostic: " << d << '\n';
      }
      ch.diag->flush();
    }
  }
  return error;
}

}  // namespace

bool run_dialogue(Session& session, std::istream& in, const DialogueChannels& ch, const std::atomic<bool>* stop) {
  CommandSplitter split;
  bool error = false;
  std::string line;
  while (!(stop && *stop) && std::getline(in, line)) {
    line += '\n';
    for (const auto& cmd : split.feed(line)) {
      error |= respond(session, cmd, ch);
      if (stop && *stop) return error;
    }
  }
  if (auto rest = split.finish()) error |= respond(session, *rest, ch);
  return error;
}

}  // namespace svlib
