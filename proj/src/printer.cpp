#include "crashlens/printer.hpp"

#include <sstream>

namespace crashlens {

namespace {

// Precedence contexts, loosest to tightest.
enum class Pos { Top, AppFn, AppArg };

void print(std::ostream& os, Expr const& e, Pos pos) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          os << node.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          os << node.name;
        } else if constexpr (std::is_same_v<T, ErrExpr>) {
          os << "err";
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          // A bare nullary constructor next to a parenthesized expression
          // would read back as constructor arguments; parenthesize it in
          // application positions.
          bool const parens = node.args.empty() && pos != Pos::Top;
          if (parens) os << "(";
          os << node.ctor.name;
          if (parens) os << ")";
          if (!node.args.empty()) {
            os << "(";
            for (std::size_t i = 0; i < node.args.size(); ++i) {
              if (i > 0) os << ", ";
              print(os, *node.args[i], Pos::Top);
            }
            os << ")";
          }
        } else if constexpr (std::is_same_v<T, App>) {
          bool const parens = pos == Pos::AppArg;
          if (parens) os << "(";
          print(os, *node.fn, Pos::AppFn);
          os << " ";
          print(os, *node.arg, Pos::AppArg);
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, Rec>) {
          bool const parens = pos != Pos::Top;
          if (parens) os << "(";
          os << "rec " << node.fn_name << "(" << node.arg_name << ") -> ";
          print(os, *node.body, Pos::Top);
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, Match>) {
          bool const parens = pos != Pos::Top;
          if (parens) os << "(";
          os << "match ";
          print(os, *node.scrutinee, Pos::AppFn);
          os << " {";
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            os << (i == 0 ? " " : " | ") << node.arms[i].ctor.name;
            if (!node.arms[i].binders.empty()) {
              os << "(";
              for (std::size_t j = 0; j < node.arms[i].binders.size(); ++j) {
                if (j > 0) os << ", ";
                os << node.arms[i].binders[j];
              }
              os << ")";
            }
            os << " -> ";
            print(os, *node.arms[i].body, Pos::Top);
          }
          os << (node.arms.empty() ? "}" : " }");
          if (parens) os << ")";
        }
      },
      e.node);
}

}  // namespace

std::string print_expr(ExprPtr const& e) {
  std::ostringstream os;
  print(os, *e, Pos::Top);
  return os.str();
}

std::string print_program(Program const& program) {
  std::ostringstream os;
  for (auto const& c : program.alphabet.ctors) {
    os << "ctor " << c.name << "/" << c.arity << ";\n";
  }
  for (auto const& [name, body] : program.defs) {
    os << "let " << name << " = " << print_expr(body) << ";\n";
  }
  if (program.main) os << print_expr(program.main) << "\n";
  return os.str();
}

}  // namespace crashlens
