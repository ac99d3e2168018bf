#include "svlib/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "svlib/parser.hpp"

namespace svlib::corpus {

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> manifest(const std::filesystem::path& dir) {
  std::istringstream in(slurp(dir / "manifest.txt"));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f.size() != 5) throw std::runtime_error("malformed manifest line: " + line);
    rows.push_back(std::move(f));
  }
  return rows;
}

class Gen {
public:
  Gen(std::uint64_t seed, int size) : rng_(seed), size_(std::max(size, 1)) {}

  std::string script() {
    std::ostringstream o;
    o << "(set-logic LIA)\n";
    int globals = pick(3);
    for (int i = 0; i < globals; ++i) {
      o << "(declare-var g" << i << " Int)\n";
      globals_.push_back("g" + std::to_string(i));
    }
    int procs = 1 + pick(1 + size_ / 4);
    std::vector<std::pair<std::string, int>> defined;
    for (int p = 0; p < procs; ++p) {
      std::string name = "p" + std::to_string(p);
      int nin = pick(3), nout = 1 + pick(2), nloc = pick(3);
      inputs_.clear();
      writable_ = globals_;
      auto decl = [&](const char* prefix, int n, std::vector<std::string>* into) {
        std::string s = "(";
        for (int i = 0; i < n; ++i) {
          std::string v = prefix + std::to_string(i);
          s += (i ? " (" : "(") + v + " Int)";
          into->push_back(v);
        }
        return s + ")";
      };
      std::string in = decl("a", nin, &inputs_);
      std::string out = decl("r", nout, &writable_);
      std::string loc = decl("l", nloc, &writable_);
      budget_ = size_;
      o << "(define-proc " << name << " " << in << " " << out << " " << loc << "\n  " << stmt(0, 0) << ")\n";
      defined.emplace_back(name, nin);
    }
    for (const auto& t : tags_) {
      o << "(annotate-tag " << t << " :check-true " << cond() << ")\n";
    }
    const auto& [last, arity] = defined.back();
    o << "(verify-call " << last << " (";
    for (int i = 0; i < arity; ++i) o << (i ? " " : "") << pick(10);
    o << "))\n";
    return o.str();
  }

private:
  std::mt19937_64 rng_;
  int size_;
  int budget_ = 0;
  int tag_count_ = 0;
  std::vector<std::string> globals_, inputs_, writable_, tags_;

  int pick(int n) { return n <= 0 ? 0 : static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

  std::string readable() {
    std::size_t n = inputs_.size() + writable_.size();
    std::size_t k = static_cast<std::size_t>(pick(static_cast<int>(n)));
    return k < inputs_.size() ? inputs_[k] : writable_[k - inputs_.size()];
  }

  std::string term(int depth) {
    int c = pick(depth > 2 ? 2 : 5);
    if (c == 0) return std::to_string(pick(20));
    if (c == 1) return readable();
    if (c == 2) return "(+ " + term(depth + 1) + " " + term(depth + 1) + ")";
    if (c == 3) return "(- " + term(depth + 1) + " " + term(depth + 1) + ")";
    return "(* " + std::to_string(pick(4)) + " " + term(depth + 1) + ")";
  }

  std::string cond() {
    static const char* ops[] = {"<", "<=", ">", ">=", "="};
    int c = pick(6);
    if (c == 0) return "true";
    if (c == 1) return "(not " + cond() + ")";
    return std::string("(") + ops[pick(5)] + " " + term(1) + " " + term(1) + ")";
  }

  std::string stmt(int depth, int loops) {
    --budget_;
    int c = depth > 3 || budget_ <= 0 ? pick(3) : pick(10);
    switch (c) {
      case 0: {
        int n = 1 + pick(std::min<int>(2, static_cast<int>(writable_.size())));
        std::vector<std::string> pool = writable_;
        std::string s = "(assign";
        for (int i = 0; i < n; ++i) {
          std::size_t k = static_cast<std::size_t>(pick(static_cast<int>(pool.size())));
          s += " (" + pool[k] + " " + term(0) + ")";
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        }
        return s + ")";
      }
      case 1:
        return "(havoc " + writable_[static_cast<std::size_t>(pick(static_cast<int>(writable_.size())))] + ")";
      case 2:
        if (loops > 0 && pick(3) == 0) return pick(2) ? "(break)" : "(continue)";
        return "(assume " + cond() + ")";
      case 3:
      case 4: {
        std::string s = "(sequence";
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) s += " " + stmt(depth + 1, loops);
        return s + ")";
      }
      case 5:
        if (pick(2)) return "(if " + cond() + " " + stmt(depth + 1, loops) + ")";
        return "(if " + cond() + " " + stmt(depth + 1, loops) + " " + stmt(depth + 1, loops) + ")";
      case 6:
        return "(while " + cond() + " " + stmt(depth + 1, loops + 1) + ")";
      case 7: {
        std::string s = "(choice";
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) s += " " + stmt(depth + 1, loops);
        return s + ")";
      }
      default: {
        std::string tag = "t" + std::to_string(tag_count_++);
        tags_.push_back(tag);
        return "(! " + stmt(depth + 1, loops) + " :tag " + tag + ")";
      }
    }
  }
};

}  // namespace

std::filesystem::path default_dir() {
#ifdef SVLIB_CORPUS_DIR
  return SVLIB_CORPUS_DIR;
#else
  return "corpus";
#endif
}

std::vector<std::string> list(const std::filesystem::path& dir) {
  std::vector<std::string> ids;
  for (const auto& row : manifest(dir)) ids.push_back(row[0]);
  return ids;
}

CorpusEntry load(const std::string& id, const std::filesystem::path& dir) {
  for (const auto& row : manifest(dir)) {
    if (row[0] != id) continue;
    CorpusEntry e;
    e.id = id;
    e.task_file = dir / row[1];
    e.task = slurp(e.task_file);
    if (row[2] != "-") {
      e.witness_file = dir / row[2];
      e.witness = slurp(*e.witness_file);
    }
    e.expected_verdicts = split(row[3], ',');
    e.provenance = row[4];
    return e;
  }
  throw std::out_of_range("unknown corpus entry '" + id + "'");
}

Script generate_random_program(std::uint64_t seed, int size) {
  std::string text = Gen(seed, size).script();
  ParseResult r = parse_script_text(text);
  if (!r.errors.empty()) throw std::logic_error("generator produced unparsable text:\n" + text);
  return std::move(r.script);
}

}  // namespace svlib::corpus
