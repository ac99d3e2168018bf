#include "svlib/smt_client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "svlib/parser.hpp"

namespace svlib {

SolverConfig SolverConfig::from_command(const std::string& line, double timeout) {
  SolverConfig c;
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  if (!words.empty()) {
    c.command = words;
    auto slash = words[0].find_last_of('/');
    c.name = slash == std::string::npos ? words[0] : words[0].substr(slash + 1);
  }
  c.timeout = timeout;
  return c;
}

SolverConfig SolverConfig::from_environment() {
  const char* env = std::getenv("SVLIB_SOLVER");
  if (env && *env) return from_command(env);
  return SolverConfig{};
}

const char* solver_verdict_name(SolverVerdict v) {
  switch (v) {
    case SolverVerdict::Sat: return "sat";
    case SolverVerdict::Unsat: return "unsat";
    case SolverVerdict::Unknown: return "unknown";
    case SolverVerdict::SolverError: return "solver-error";
    case SolverVerdict::Skipped: return "skipped";
  }
  return "?";
}

namespace {

struct Verdict {
  bool found = false;
  SolverVerdict v = SolverVerdict::Unknown;
  std::size_t end = 0;  // offset just past the verdict line
  bool error = false;
};

Verdict scan(const std::string& out) {
  Verdict r;
  std::size_t pos = 0;
  while (pos < out.size()) {
    std::size_t nl = out.find('\n', pos);
    if (nl == std::string::npos) break;
    std::string line = out.substr(pos, nl - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    pos = nl + 1;
    if (line.rfind("(error", 0) == 0) r.error = true;
    if (line == "sat" || line == "unsat" || line == "unknown") {
      r.found = true;
      r.v = line == "sat" ? SolverVerdict::Sat : line == "unsat" ? SolverVerdict::Unsat : SolverVerdict::Unknown;
      r.end = pos;
      return r;
    }
  }
  return r;
}

std::vector<SExpr> parse_model(const std::string& text) {
  std::vector<SExpr> out;
  std::vector<SExpr> top;
  try {
    top = read_all(text);
  } catch (const LexError&) {
    return out;
  }
  auto is_def = [](const SExpr& e) { return e.is_list() && !e.empty() && e[0].is_symbol("define-fun"); };
  for (const auto& e : top) {
    if (is_def(e)) {
      out.push_back(e);
    } else if (e.is_list()) {
      std::size_t from = (!e.empty() && e[0].is_symbol("model")) ? 1 : 0;
      for (std::size_t i = from; i < e.size(); ++i)
        if (is_def(e[i])) out.push_back(e[i]);
    }
  }
  return out;
}

}  // namespace

SolverResult run_solver(const std::string& script, const SolverConfig& config, bool want_model) {
  using clock = std::chrono::steady_clock;
  SolverResult res;
  const auto start = clock::now();
  const auto deadline = start + std::chrono::milliseconds(static_cast<long>(config.timeout * 1000));
  auto finish = [&] {
    res.elapsed = std::chrono::duration<double>(clock::now() - start).count();
    return res;
  };
  if (config.command.empty()) {
    res.error = "empty solver command";
    return finish();
  }
  signal(SIGPIPE, SIG_IGN);
  int in[2], out[2];
  if (pipe(in) != 0) {
    res.error = std::string("pipe: ") + std::strerror(errno);
    return finish();
  }
  if (pipe(out) != 0) {
    close(in[0]);
    close(in[1]);
    res.error = std::string("pipe: ") + std::strerror(errno);
    return finish();
  }
  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in[0], in[1], out[0], out[1]}) close(fd);
    res.error = std::string("fork: ") + std::strerror(errno);
    return finish();
  }
  if (pid == 0) {
    dup2(in[0], 0);
    dup2(out[1], 1);
    dup2(out[1], 2);
    for (int fd : {in[0], in[1], out[0], out[1]}) close(fd);
    std::vector<char*> argv;
    for (const auto& a : config.command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  fcntl(in[1], F_SETFL, O_NONBLOCK);
  fcntl(out[0], F_SETFL, O_NONBLOCK);

  std::string pending = script;
  if (pending.empty() || pending.back() != '\n') pending += '\n';
  std::size_t written = 0;
  bool stdin_open = true, sent_tail = false, eof = false, timed_out = false;
  std::string output;
  Verdict v;
  while (!eof) {
    if (clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    if (!sent_tail && v.found) {
      pending += (v.v == SolverVerdict::Sat && want_model) ? "(get-model)\n(exit)\n" : "(exit)\n";
      sent_tail = true;
    }
    if (stdin_open && sent_tail && written == pending.size()) {
      close(in[1]);
      stdin_open = false;
    }
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {out[0], POLLIN, 0};
    if (stdin_open && written < pending.size()) fds[nfds++] = {in[1], POLLOUT, 0};
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    int rc = poll(fds, nfds, static_cast<int>(std::max<long>(1, std::min<long>(left, 1000))));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;
    if (nfds > 1 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = ::write(in[1], pending.data() + written, pending.size() - written);
      if (n > 0) written += static_cast<std::size_t>(n);
      else if (n < 0 && errno != EAGAIN) {
        close(in[1]);
        stdin_open = false;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buf[8192];
      ssize_t n = ::read(out[0], buf, sizeof buf);
      if (n > 0) {
        output.append(buf, static_cast<std::size_t>(n));
        if (!v.found) v = scan(output);
      } else if (n == 0 || (n < 0 && errno != EAGAIN)) {
        eof = true;
      }
    }
  }
  if (stdin_open) close(in[1]);
  close(out[0]);
  int status = 0;
  if (timed_out) kill(pid, SIGKILL);
  waitpid(pid, &status, 0);
  if (!v.found) v = scan(output);

  res.transcript = script + ";; ---- solver output\n" + output;
  if (timed_out && !v.found) {
    res.verdict = SolverVerdict::Unknown;
    res.error = "timeout";
    return finish();
  }
  if (!v.found) {
    res.verdict = SolverVerdict::SolverError;
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) res.error = "cannot start " + config.command[0];
    else res.error = "no verdict in solver output";
    return finish();
  }
  if (v.error) {
    res.verdict = SolverVerdict::SolverError;
    res.error = "solver reported an error";
    return finish();
  }
  res.verdict = v.v;
  if (v.v == SolverVerdict::Sat && want_model) res.model = parse_model(output.substr(v.end));
  return finish();
}

SolverResult discharge(const Obligation& ob, const SolverConfig& config) {
  return run_solver(emit_smt(ob), config, true);
}

std::vector<SolverResult> discharge_all(const std::vector<Obligation>& obs, const SolverConfig& config,
                                        int parallelism, bool early_exit) {
  std::vector<SolverResult> results(obs.size());
  for (auto& r : results) r.verdict = SolverVerdict::Skipped;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (;;) {
      if (early_exit && stop) return;
      std::size_t i = next++;
      if (i >= obs.size()) return;
      results[i] = discharge(obs[i], config);
      if (results[i].verdict != SolverVerdict::Unsat) stop = true;
    }
  };
  int n = std::max(1, std::min<int>(parallelism, static_cast<int>(obs.size())));
  std::vector<std::thread> threads;
  for (int k = 0; k < n; ++k) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

std::vector<SmtCommand> model_commands(const SolverResult& r) {
  std::vector<SmtCommand> out;
  for (const auto& e : r.model) {
    try {
      Command c = parse_command(e);
      if (c.kind == CmdKind::Smt && c.smt.kind == SmtKind::DefineFun) out.push_back(c.smt);
    } catch (const std::exception&) {
    }
  }
  return out;
}

}  // namespace svlib
