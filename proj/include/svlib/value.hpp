#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svlib/ast.hpp"

namespace svlib {

/// A concrete value. Arrays are a default plus finitely many overrides kept
/// sorted and canonical, so structural equality is extensional equality.
struct Value {
  enum class Kind { Int, Real, Bool, Array, Datatype, Opaque };
  Kind kind = Kind::Bool;
  mpz_class i;
  mpq_class q;
  bool b = false;
  std::string name;                            // constructor, or text of an opaque term
  std::vector<Value> args;                     // constructor arguments; array default at [0]
  std::vector<std::pair<Value, Value>> entries;  // array overrides
  std::optional<Sort> sort;                    // arrays and datatypes, when known

  static Value integer(mpz_class v);
  static Value integer(long v) { return integer(mpz_class(v)); }
  static Value real(mpq_class v);
  static Value boolean(bool v);
  static Value array(Value dflt, std::optional<Sort> sort = std::nullopt);
  static Value datatype(std::string ctor, std::vector<Value> args, std::optional<Sort> sort = std::nullopt);
  static Value opaque(std::string text);

  bool is_int() const { return kind == Kind::Int; }
  bool is_bool() const { return kind == Kind::Bool; }

  Value select(const Value& key) const;
  Value store(const Value& key, const Value& v) const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);
};

int compare(const Value& a, const Value& b);

/// SMT-LIB rendering of a value as a term.
Term to_term(const Value& v);
std::string to_string(const Value& v);

}  // namespace svlib
