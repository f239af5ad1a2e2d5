#pragma once

#include <string>

#include "crashlens/ast.hpp"

namespace crashlens {

// Renders an expression in the concrete syntax with minimal parentheses;
// parse_expr_text(print_expr(e)) is alpha-equal to e.
[[nodiscard]] std::string print_expr(ExprPtr const& e);

// Renders a full program: ctor declarations for the alphabet, definitions,
// then main. Round-trips through parse_program.
[[nodiscard]] std::string print_program(Program const& program);

}  // namespace crashlens
