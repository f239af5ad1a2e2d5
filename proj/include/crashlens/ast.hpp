#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace crashlens {

struct CtorName {
  std::string name;
  int arity = 0;

  friend bool operator==(CtorName const& a, CtorName const& b) {
    return a.name == b.name && a.arity == b.arity;
  }
};

// Ordered constructor alphabet. Order is declaration/first-use order and is
// observable: witness enumeration walks constructors in this order.
struct Alphabet {
  std::vector<CtorName> ctors;

  [[nodiscard]] std::optional<int> arity_of(std::string const& name) const;
  // Returns false if `name` is already present with a different arity.
  bool record(std::string const& name, int arity);
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  std::int64_t value = 0;
};

struct Var {
  std::string name;
};

struct CtorExpr {
  CtorName ctor;
  std::vector<ExprPtr> args;
};

struct App {
  ExprPtr fn;
  ExprPtr arg;
};

struct Arm {
  CtorName ctor;
  std::vector<std::string> binders;
  ExprPtr body;
};

struct Match {
  ExprPtr scrutinee;
  std::vector<Arm> arms;
};

struct Rec {
  std::string fn_name;
  std::string arg_name;
  ExprPtr body;
};

struct ErrExpr {};

struct Expr {
  std::variant<IntLit, Var, CtorExpr, App, Match, Rec, ErrExpr> node;
};

ExprPtr mk_int(std::int64_t value);
ExprPtr mk_var(std::string name);
ExprPtr mk_ctor(CtorName ctor, std::vector<ExprPtr> args);
ExprPtr mk_app(ExprPtr fn, ExprPtr arg);
ExprPtr mk_match(ExprPtr scrutinee, std::vector<Arm> arms);
ExprPtr mk_rec(std::string fn_name, std::string arg_name, ExprPtr body);
ExprPtr mk_err();

// Err is a value; a constructor with a direct Err argument is not (it still
// steps). Deeper Errs sit inside non-value arguments.
[[nodiscard]] bool is_value(Expr const& e);
[[nodiscard]] bool is_value(ExprPtr const& e);
// Non-function values w: integers and constructor values. Excludes rec and err.
[[nodiscard]] bool is_nonfun_value(Expr const& e);

[[nodiscard]] std::set<std::string> free_vars(ExprPtr const& e);

// Substitutes the closed value v for free occurrences of x. Binders shadow;
// with v closed no capture can occur.
[[nodiscard]] ExprPtr subst_value(ExprPtr const& e, std::string const& x, ExprPtr const& v);

[[nodiscard]] bool alpha_equal_expr(ExprPtr const& a, ExprPtr const& b);

[[nodiscard]] std::size_t expr_size(ExprPtr const& e);

struct Program {
  // Definitions with earlier names already inlined; every stored body is closed.
  std::vector<std::pair<std::string, ExprPtr>> defs;
  ExprPtr main;  // null when the program has no trailing expression
  Alphabet alphabet;
};

}  // namespace crashlens
