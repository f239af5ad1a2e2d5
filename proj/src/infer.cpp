#include "crashlens/infer.hpp"

#include <span>

namespace crashlens {

namespace {

class Inferencer {
 public:
  Typing infer(TypeEnv const& env, ExprPtr const& e) {
    return std::visit(
        [&](auto const& node) -> Typing {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return Typing{int_type(), cond_false()};
          } else if constexpr (std::is_same_v<T, Var>) {
            auto it = env.find(node.name);
            if (it == env.end()) throw UnboundVariableError(node.name);
            return Typing{it->second, cond_false()};
          } else if constexpr (std::is_same_v<T, ErrExpr>) {
            return Typing{bot_type(), cond_true()};
          } else if constexpr (std::is_same_v<T, CtorExpr>) {
            std::vector<TypePtr> args;
            args.reserve(node.args.size());
            CondPtr crash = cond_false();
            for (auto const& a : node.args) {
              auto t = infer(env, a);
              args.push_back(t.type);
              crash = cond_or(crash, t.crash);
            }
            return Typing{ctor_type(node.ctor, std::move(args)), crash};
          } else if constexpr (std::is_same_v<T, App>) {
            auto fn = infer(env, node.fn);
            auto arg = infer(env, node.arg);
            auto crash = cond_or(
                cond_or(cond_or(op_ccapp(fn.type, arg.type), fn.crash), arg.crash),
                not_fun(fn.type));
            return Typing{op_tapp(fn.type, arg.type), crash};
          } else if constexpr (std::is_same_v<T, Match>) {
            auto scrutinee = infer(env, node.scrutinee);
            auto arms = patterns(env, cond_true(), scrutinee.type, node.arms);
            return Typing{arms.type, cond_or(scrutinee.crash, arms.crash)};
          } else {
            static_assert(std::is_same_v<T, Rec>);
            TypeVarId const arg_var = fresh(VarKind::Arg);
            TypeVarId const self_var = fresh(VarKind::Self);
            TypeEnv inner = env;
            inner[node.arg_name] = tvar(arg_var);
            inner[node.fn_name] = tvar(self_var);
            auto body = infer(inner, node.body);
            return Typing{fun_type(arg_var, self_var, body.type, body.crash), cond_false()};
          }
        },
        e->node);
  }

  Typing patterns(TypeEnv const& env, CondPtr const& accum, TypePtr const& scrutinee,
                  std::span<Arm const> arms) {
    if (arms.empty()) return Typing{bot_type(), accum};
    auto const& arm = arms.front();
    TypeEnv inner = env;
    for (std::size_t i = 0; i < arm.binders.size(); ++i) {
      inner[arm.binders[i]] = op_proj(scrutinee, arm.ctor, static_cast<int>(i) + 1);
    }
    auto body = infer(inner, arm.body);
    auto rest = patterns(env, cond_and(accum, has_no_ctor(arm.ctor, scrutinee)), scrutinee,
                         arms.subspan(1));
    auto crash = cond_or(
        cond_and(cond_and(accum, has_ctor(arm.ctor, scrutinee)), body.crash), rest.crash);
    return Typing{union_type(rest.type, body.type), crash};
  }

 private:
  TypeVarId fresh(VarKind kind) {
    int& counter = kind == VarKind::Arg ? next_arg_ : next_self_;
    return TypeVarId{kind, counter++};
  }

  int next_arg_ = 0;
  int next_self_ = 0;
};

}  // namespace

Typing infer(TypeEnv const& env, ExprPtr const& e) {
  Inferencer inferencer;
  return inferencer.infer(env, e);
}

Typing infer_patterns(TypeEnv const& env, CondPtr const& accum, TypePtr const& scrutinee,
                      std::vector<Arm> const& arms) {
  Inferencer inferencer;
  return inferencer.patterns(env, accum, scrutinee, arms);
}

}  // namespace crashlens
