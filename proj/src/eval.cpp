#include "crashlens/eval.hpp"

#include <stdexcept>

namespace crashlens {

namespace {

bool is_err(ExprPtr const& e) { return std::holds_alternative<ErrExpr>(e->node); }

ExprPtr apply_rec(Rec const& rec, ExprPtr const& self, ExprPtr const& arg) {
  // e[x -> v, f -> rec f(x) e]; both replacements are closed, so sequential
  // substitution equals the simultaneous one.
  auto body = subst_value(rec.body, rec.arg_name, arg);
  return subst_value(body, rec.fn_name, self);
}

}  // namespace

StepResult step(ExprPtr const& e) {
  if (is_value(*e)) return Done{e};
  return std::visit(
      [&](auto const& node) -> StepResult {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Var>) {
          return Stuck{"free variable " + node.name};
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          // Leftmost argument that is not a plain (err-free) value.
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            auto const& a = node.args[i];
            if (is_err(a)) return Stepped{mk_err()};  // SCtorErr
            if (is_value(*a)) continue;
            auto inner = step(a);
            if (auto const* s = std::get_if<Stepped>(&inner)) {
              auto args = node.args;
              args[i] = s->expr;
              return Stepped{mk_ctor(node.ctor, std::move(args))};
            }
            return inner;  // Stuck propagates
          }
          return Stuck{"constructor with no reducible argument"};
        } else if constexpr (std::is_same_v<T, App>) {
          if (!is_value(*node.fn)) {
            auto inner = step(node.fn);
            if (auto const* s = std::get_if<Stepped>(&inner)) {
              return Stepped{mk_app(s->expr, node.arg)};
            }
            return inner;
          }
          if (!is_value(*node.arg)) {
            auto inner = step(node.arg);
            if (auto const* s = std::get_if<Stepped>(&inner)) {
              return Stepped{mk_app(node.fn, s->expr)};
            }
            return inner;
          }
          if (auto const* rec = std::get_if<Rec>(&node.fn->node)) {
            if (is_err(node.arg)) return Stepped{mk_err()};  // SAppErr2
            return Stepped{apply_rec(*rec, node.fn, node.arg)};  // SApp
          }
          // SAppErr1, extended to err in function position.
          return Stepped{mk_err()};
        } else if constexpr (std::is_same_v<T, Match>) {
          if (!is_value(*node.scrutinee)) {
            auto inner = step(node.scrutinee);
            if (auto const* s = std::get_if<Stepped>(&inner)) {
              return Stepped{mk_match(s->expr, node.arms)};
            }
            return inner;
          }
          if (is_err(node.scrutinee)) return Stepped{mk_err()};  // SMatchErr
          if (node.arms.empty()) return Stepped{mk_err()};       // SMatchNextErr
          auto const& arm = node.arms.front();
          auto const* ctor = std::get_if<CtorExpr>(&node.scrutinee->node);
          if (ctor != nullptr && ctor->ctor.name == arm.ctor.name &&
              ctor->args.size() == arm.binders.size()) {
            // SMatch. Arities agree by the global alphabet.
            auto body = arm.body;
            for (std::size_t i = 0; i < arm.binders.size(); ++i) {
              body = subst_value(body, arm.binders[i], ctor->args[i]);
            }
            return Stepped{std::move(body)};
          }
          // SMatchNext; integer and function scrutinees fall through every arm.
          std::vector<Arm> rest(node.arms.begin() + 1, node.arms.end());
          return Stepped{mk_match(node.scrutinee, std::move(rest))};
        } else {
          return Stuck{"unexpected non-value"};
        }
      },
      e->node);
}

EvalOutcome evaluate(ExprPtr const& e, EvalConfig const& config) {
  ExprPtr current = e;
  long long work = 0;
  for (long long used = 0; used < config.fuel; ++used) {
    auto result = step(current);
    if (auto const* done = std::get_if<Done>(&result)) {
      bool const is_error = std::holds_alternative<ErrExpr>(done->value->node);
      return EvalOutcome{is_error ? EvalStatus::Error : EvalStatus::Value, done->value, used};
    }
    if (auto const* stuck = std::get_if<Stuck>(&result)) {
      throw std::logic_error("stuck term: " + stuck->reason);
    }
    current = std::get<Stepped>(result).expr;
    auto const size = expr_size(current);
    work += static_cast<long long>(size);
    if (size > config.max_nodes || work > config.max_work) {
      return EvalOutcome{EvalStatus::FuelExhausted, current, used + 1};
    }
  }
  if (is_value(*current)) {
    bool const is_error = std::holds_alternative<ErrExpr>(current->node);
    return EvalOutcome{is_error ? EvalStatus::Error : EvalStatus::Value, current, config.fuel};
  }
  return EvalOutcome{EvalStatus::FuelExhausted, current, config.fuel};
}

}  // namespace crashlens
