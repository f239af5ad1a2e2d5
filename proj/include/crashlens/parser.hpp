#pragma once

#include <stdexcept>
#include <string>

#include "crashlens/ast.hpp"

namespace crashlens {

enum class ParseErrorKind {
  Syntax,
  ArityMismatch,
  DuplicatePatternCtor,
  DuplicateDef,
  UnboundName,
};

struct ParseError : std::runtime_error {
  ParseErrorKind kind;
  int line;
  int column;

  ParseError(ParseErrorKind kind, int line, int column, std::string const& message);
};

[[nodiscard]] std::string to_string(ParseErrorKind kind);

// Parses a whole program: `ctor C/n;` declarations, `let name = expr;`
// definitions, and an optional trailing expression (main). Arities come from
// declarations or first use and are checked globally. Every definition and
// main may reference earlier definitions only; those references are inlined,
// so the stored bodies are closed. Throws ParseError.
[[nodiscard]] Program parse_program(std::string const& source);

// Parses a bare expression fragment. Open terms are allowed; arities are
// still checked (and recorded into *alphabet when given).
[[nodiscard]] ExprPtr parse_expr_text(std::string const& source, Alphabet* alphabet = nullptr);

}  // namespace crashlens
