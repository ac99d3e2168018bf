#pragma once

#include <string>

#include "svlib/ast.hpp"

namespace svlib {

SExpr to_sexpr(const Sort& s);
SExpr to_sexpr(const Term& t);
SExpr to_sexpr(const Statement& s);
SExpr to_sexpr(const SmtCommand& c);
SExpr to_sexpr(const Step& s);
SExpr to_sexpr(const Command& c);
/// Attribute as its keyword followed by an optional value.
std::vector<SExpr> to_sexprs(const Attribute& a);

std::string term_text(const Term& t);
std::string sort_text(const Sort& s);
std::string attrs_text(const std::vector<Attribute>& attrs);

/// Canonical layout: one command per line, nested statements indented by two
/// spaces, closing parentheses appended to the last line.
std::string print_script(const Script& s);
std::string print_command(const Command& c, int indent = 0);
std::string print_statement(const Statement& s, int indent = 0);
std::string print_witness(const Witness& w);

}  // namespace svlib
