#include "crashlens/ast.hpp"

#include <algorithm>

namespace crashlens {

std::optional<int> Alphabet::arity_of(std::string const& name) const {
  for (auto const& c : ctors) {
    if (c.name == name) return c.arity;
  }
  return std::nullopt;
}

bool Alphabet::record(std::string const& name, int arity) {
  if (auto known = arity_of(name)) return *known == arity;
  ctors.push_back(CtorName{name, arity});
  return true;
}

ExprPtr mk_int(std::int64_t value) { return std::make_shared<Expr>(Expr{IntLit{value}}); }

ExprPtr mk_var(std::string name) { return std::make_shared<Expr>(Expr{Var{std::move(name)}}); }

ExprPtr mk_ctor(CtorName ctor, std::vector<ExprPtr> args) {
  return std::make_shared<Expr>(Expr{CtorExpr{std::move(ctor), std::move(args)}});
}

ExprPtr mk_app(ExprPtr fn, ExprPtr arg) {
  return std::make_shared<Expr>(Expr{App{std::move(fn), std::move(arg)}});
}

ExprPtr mk_match(ExprPtr scrutinee, std::vector<Arm> arms) {
  return std::make_shared<Expr>(Expr{Match{std::move(scrutinee), std::move(arms)}});
}

ExprPtr mk_rec(std::string fn_name, std::string arg_name, ExprPtr body) {
  return std::make_shared<Expr>(Expr{Rec{std::move(fn_name), std::move(arg_name), std::move(body)}});
}

ExprPtr mk_err() {
  static ExprPtr const instance = std::make_shared<Expr>(Expr{ErrExpr{}});
  return instance;
}

bool is_value(Expr const& e) {
  return std::visit(
      [](auto const& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, Rec> ||
                      std::is_same_v<T, ErrExpr>) {
          return true;
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          return std::all_of(node.args.begin(), node.args.end(), [](ExprPtr const& a) {
            return is_value(*a) && !std::holds_alternative<ErrExpr>(a->node);
          });
        } else {
          return false;
        }
      },
      e.node);
}

bool is_value(ExprPtr const& e) { return is_value(*e); }

bool is_nonfun_value(Expr const& e) {
  if (std::holds_alternative<Rec>(e.node) || std::holds_alternative<ErrExpr>(e.node)) return false;
  return is_value(e);
}

namespace {

void collect_free(Expr const& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Var>) {
          if (std::find(bound.begin(), bound.end(), node.name) == bound.end()) {
            out.insert(node.name);
          }
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          for (auto const& a : node.args) collect_free(*a, bound, out);
        } else if constexpr (std::is_same_v<T, App>) {
          collect_free(*node.fn, bound, out);
          collect_free(*node.arg, bound, out);
        } else if constexpr (std::is_same_v<T, Match>) {
          collect_free(*node.scrutinee, bound, out);
          for (auto const& arm : node.arms) {
            auto const base = bound.size();
            bound.insert(bound.end(), arm.binders.begin(), arm.binders.end());
            collect_free(*arm.body, bound, out);
            bound.resize(base);
          }
        } else if constexpr (std::is_same_v<T, Rec>) {
          auto const base = bound.size();
          bound.push_back(node.fn_name);
          bound.push_back(node.arg_name);
          collect_free(*node.body, bound, out);
          bound.resize(base);
        }
      },
      e.node);
}

}  // namespace

std::set<std::string> free_vars(ExprPtr const& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(*e, bound, out);
  return out;
}

ExprPtr subst_value(ExprPtr const& e, std::string const& x, ExprPtr const& v) {
  return std::visit(
      [&](auto const& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Var>) {
          return node.name == x ? v : e;
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          std::vector<ExprPtr> args;
          args.reserve(node.args.size());
          bool changed = false;
          for (auto const& a : node.args) {
            args.push_back(subst_value(a, x, v));
            changed = changed || args.back() != a;
          }
          return changed ? mk_ctor(node.ctor, std::move(args)) : e;
        } else if constexpr (std::is_same_v<T, App>) {
          auto fn = subst_value(node.fn, x, v);
          auto arg = subst_value(node.arg, x, v);
          return (fn == node.fn && arg == node.arg) ? e : mk_app(std::move(fn), std::move(arg));
        } else if constexpr (std::is_same_v<T, Match>) {
          auto scrutinee = subst_value(node.scrutinee, x, v);
          std::vector<Arm> arms;
          arms.reserve(node.arms.size());
          bool changed = scrutinee != node.scrutinee;
          for (auto const& arm : node.arms) {
            bool const shadowed =
                std::find(arm.binders.begin(), arm.binders.end(), x) != arm.binders.end();
            auto body = shadowed ? arm.body : subst_value(arm.body, x, v);
            changed = changed || body != arm.body;
            arms.push_back(Arm{arm.ctor, arm.binders, std::move(body)});
          }
          return changed ? mk_match(std::move(scrutinee), std::move(arms)) : e;
        } else if constexpr (std::is_same_v<T, Rec>) {
          if (node.fn_name == x || node.arg_name == x) return e;
          auto body = subst_value(node.body, x, v);
          return body == node.body ? e : mk_rec(node.fn_name, node.arg_name, std::move(body));
        } else {
          return e;
        }
      },
      e->node);
}

namespace {

// Pairs of corresponding binder names along the current path.
using BinderMap = std::vector<std::pair<std::string, std::string>>;

bool var_matches(BinderMap const& binders, std::string const& a, std::string const& b) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

bool alpha_eq(Expr const& a, Expr const& b, BinderMap& binders) {
  if (a.node.index() != b.node.index()) return false;
  if (auto const* va = std::get_if<Var>(&a.node)) {
    return var_matches(binders, va->name, std::get<Var>(b.node).name);
  }
  if (auto const* ia = std::get_if<IntLit>(&a.node)) {
    return ia->value == std::get<IntLit>(b.node).value;
  }
  if (auto const* ca = std::get_if<CtorExpr>(&a.node)) {
    auto const& cb = std::get<CtorExpr>(b.node);
    if (!(ca->ctor == cb.ctor)) return false;
    for (std::size_t i = 0; i < ca->args.size(); ++i) {
      if (!alpha_eq(*ca->args[i], *cb.args[i], binders)) return false;
    }
    return true;
  }
  if (auto const* aa = std::get_if<App>(&a.node)) {
    auto const& ab = std::get<App>(b.node);
    return alpha_eq(*aa->fn, *ab.fn, binders) && alpha_eq(*aa->arg, *ab.arg, binders);
  }
  if (auto const* ma = std::get_if<Match>(&a.node)) {
    auto const& mb = std::get<Match>(b.node);
    if (ma->arms.size() != mb.arms.size()) return false;
    if (!alpha_eq(*ma->scrutinee, *mb.scrutinee, binders)) return false;
    for (std::size_t i = 0; i < ma->arms.size(); ++i) {
      auto const& arm_a = ma->arms[i];
      auto const& arm_b = mb.arms[i];
      if (!(arm_a.ctor == arm_b.ctor)) return false;
      auto const base = binders.size();
      for (std::size_t j = 0; j < arm_a.binders.size(); ++j) {
        binders.emplace_back(arm_a.binders[j], arm_b.binders[j]);
      }
      bool const ok = alpha_eq(*arm_a.body, *arm_b.body, binders);
      binders.resize(base);
      if (!ok) return false;
    }
    return true;
  }
  if (auto const* ra = std::get_if<Rec>(&a.node)) {
    auto const& rb = std::get<Rec>(b.node);
    auto const base = binders.size();
    binders.emplace_back(ra->fn_name, rb.fn_name);
    binders.emplace_back(ra->arg_name, rb.arg_name);
    bool const ok = alpha_eq(*ra->body, *rb.body, binders);
    binders.resize(base);
    return ok;
  }
  return true;  // ErrExpr
}

}  // namespace

bool alpha_equal_expr(ExprPtr const& a, ExprPtr const& b) {
  BinderMap binders;
  return alpha_eq(*a, *b, binders);
}

std::size_t expr_size(ExprPtr const& e) {
  return std::visit(
      [&](auto const& node) -> std::size_t {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorExpr>) {
          std::size_t n = 1;
          for (auto const& a : node.args) n += expr_size(a);
          return n;
        } else if constexpr (std::is_same_v<T, App>) {
          return 1 + expr_size(node.fn) + expr_size(node.arg);
        } else if constexpr (std::is_same_v<T, Match>) {
          std::size_t n = 1 + expr_size(node.scrutinee);
          for (auto const& arm : node.arms) n += 1 + expr_size(arm.body);
          return n;
        } else if constexpr (std::is_same_v<T, Rec>) {
          return 1 + expr_size(node.body);
        } else {
          return 1;
        }
      },
      e->node);
}

}  // namespace crashlens
