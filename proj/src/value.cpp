#include "svlib/value.hpp"

#include <algorithm>

#include "svlib/parser.hpp"
#include "svlib/printer.hpp"

namespace svlib {

Value Value::integer(mpz_class v) {
  Value x;
  x.kind = Kind::Int;
  x.i = std::move(v);
  return x;
}

Value Value::real(mpq_class v) {
  Value x;
  x.kind = Kind::Real;
  v.canonicalize();
  x.q = std::move(v);
  return x;
}

Value Value::boolean(bool v) {
  Value x;
  x.kind = Kind::Bool;
  x.b = v;
  return x;
}

Value Value::array(Value dflt, std::optional<Sort> sort) {
  Value x;
  x.kind = Kind::Array;
  x.args.push_back(std::move(dflt));
  x.sort = std::move(sort);
  return x;
}

Value Value::datatype(std::string ctor, std::vector<Value> args, std::optional<Sort> sort) {
  Value x;
  x.kind = Kind::Datatype;
  x.name = std::move(ctor);
  x.args = std::move(args);
  x.sort = std::move(sort);
  return x;
}

Value Value::opaque(std::string text) {
  Value x;
  x.kind = Kind::Opaque;
  x.name = std::move(text);
  return x;
}

Value Value::select(const Value& key) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), key,
                             [](const auto& e, const Value& k) { return compare(e.first, k) < 0; });
  if (it != entries.end() && compare(it->first, key) == 0) return it->second;
  return args.at(0);
}

Value Value::store(const Value& key, const Value& v) const {
  Value out = *this;
  auto it = std::lower_bound(out.entries.begin(), out.entries.end(), key,
                             [](const auto& e, const Value& k) { return compare(e.first, k) < 0; });
  bool present = it != out.entries.end() && compare(it->first, key) == 0;
  if (compare(v, out.args.at(0)) == 0) {
    if (present) out.entries.erase(it);
  } else if (present) {
    it->second = v;
  } else {
    out.entries.insert(it, {key, v});
  }
  return out;
}

int compare(const Value& a, const Value& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Value::Kind::Int: return cmp(a.i, b.i) < 0 ? -1 : cmp(a.i, b.i) > 0 ? 1 : 0;
    case Value::Kind::Real: return cmp(a.q, b.q) < 0 ? -1 : cmp(a.q, b.q) > 0 ? 1 : 0;
    case Value::Kind::Bool: return a.b == b.b ? 0 : a.b ? 1 : -1;
    case Value::Kind::Opaque: return a.name.compare(b.name) < 0 ? -1 : a.name == b.name ? 0 : 1;
    case Value::Kind::Datatype:
      if (a.name != b.name) return a.name < b.name ? -1 : 1;
      [[fallthrough]];
    case Value::Kind::Array: {
      if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
      for (std::size_t k = 0; k < a.args.size(); ++k)
        if (int c = compare(a.args[k], b.args[k])) return c;
      if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size() ? -1 : 1;
      for (std::size_t k = 0; k < a.entries.size(); ++k) {
        if (int c = compare(a.entries[k].first, b.entries[k].first)) return c;
        if (int c = compare(a.entries[k].second, b.entries[k].second)) return c;
      }
      return 0;
    }
  }
  return 0;
}

bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

namespace {

Term int_term(const mpz_class& v) {
  if (v >= 0) return Term::numeral(v.get_str());
  mpz_class m = -v;
  return Term::app("-", {Term::numeral(m.get_str())});
}

Term real_term(const mpq_class& v) {
  auto dec = [](const mpz_class& n) { return Term::constant(SExpr::atom(AtomKind::Decimal, n.get_str() + ".0")); };
  mpz_class num = abs(v.get_num());
  Term t = v.get_den() == 1 ? dec(num) : Term::app("/", {dec(num), dec(v.get_den())});
  return v < 0 ? Term::app("-", {t}) : t;
}

}  // namespace

Term to_term(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return int_term(v.i);
    case Value::Kind::Real: return real_term(v.q);
    case Value::Kind::Bool: return Term::boolean(v.b);
    case Value::Kind::Opaque: {
      auto exprs = read_all(v.name);
      if (exprs.size() == 1) {
        try {
          return parse_term(exprs[0]);
        } catch (const std::exception&) {
        }
      }
      return Term::var(v.name);
    }
    case Value::Kind::Datatype: {
      std::vector<Term> args;
      for (const auto& a : v.args) args.push_back(to_term(a));
      Term t = Term::app(v.name, std::move(args));
      if (t.args.empty() && v.sort && !v.sort->params.empty()) t.as_sort = v.sort;
      return t;
    }
    case Value::Kind::Array: {
      Term base = Term::app("const", {to_term(v.args.at(0))});
      if (v.sort) base.as_sort = v.sort;
      else base.as_sort = Sort::named("Array");
      for (const auto& [k, x] : v.entries) base = Term::app("store", {base, to_term(k), to_term(x)});
      return base;
    }
  }
  return Term::boolean(false);
}

std::string to_string(const Value& v) { return term_text(to_term(v)); }

}  // namespace svlib
