#include "crashlens/types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "crashlens/solver.hpp"

namespace crashlens {

std::string to_string(TruthValue v) {
  switch (v) {
    case TruthValue::False: return "false";
    case TruthValue::Unknown: return "unknown";
    case TruthValue::True: return "true";
  }
  return "unknown";
}

namespace {

template <typename Node>
TypePtr make_type(Node node) {
  return std::make_shared<Type>(Type{std::move(node)});
}

template <typename Node>
CondPtr make_cond(Node node) {
  return std::make_shared<CrashCond>(CrashCond{std::move(node)});
}

bool is_bot(TypePtr const& t) { return std::holds_alternative<BotType>(t->node); }
bool is_tt(CondPtr const& c) { return std::holds_alternative<CondTrue>(c->node); }
bool is_ff(CondPtr const& c) { return std::holds_alternative<CondFalse>(c->node); }

void collect_free(TypePtr const& t, std::vector<TypeVarId>& bound, std::set<TypeVarId>& out);
void collect_free(CondPtr const& c, std::vector<TypeVarId>& bound, std::set<TypeVarId>& out);

void collect_free(TypePtr const& t, std::vector<TypeVarId>& bound, std::set<TypeVarId>& out) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TVar>) {
          if (std::find(bound.begin(), bound.end(), node.id) == bound.end()) out.insert(node.id);
        } else if constexpr (std::is_same_v<T, FunType>) {
          auto const base = bound.size();
          bound.push_back(node.arg_var);
          bound.push_back(node.self_var);
          collect_free(node.ret, bound, out);
          collect_free(node.crash, bound, out);
          bound.resize(base);
        } else if constexpr (std::is_same_v<T, CtorType>) {
          for (auto const& a : node.args) collect_free(a, bound, out);
        } else if constexpr (std::is_same_v<T, UnionType>) {
          collect_free(node.lhs, bound, out);
          collect_free(node.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          collect_free(node.head, bound, out);
          collect_free(node.arg, bound, out);
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          collect_free(node.head, bound, out);
        }
      },
      t->node);
}

void collect_free(CondPtr const& c, std::vector<TypeVarId>& bound, std::set<TypeVarId>& out) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr> || std::is_same_v<T, CondAnd>) {
          collect_free(node.lhs, bound, out);
          collect_free(node.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, CondHasCtor> || std::is_same_v<T, CondHasNoCtor>) {
          collect_free(node.type, bound, out);
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          collect_free(node.type, bound, out);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          collect_free(node.head, bound, out);
          collect_free(node.arg, bound, out);
        }
      },
      c->node);
}

bool contains_fun_node(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FunType>) {
          return true;
        } else if constexpr (std::is_same_v<T, CtorType>) {
          return std::any_of(node.args.begin(), node.args.end(), contains_fun_node);
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return contains_fun_node(node.lhs) || contains_fun_node(node.rhs);
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return contains_fun_node(node.head) || contains_fun_node(node.arg);
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return contains_fun_node(node.head);
        } else {
          return false;
        }
      },
      t->node);
}

// A beta step performed at construction time must provably terminate: the
// substituted component may not mention the function's self variable, and the
// argument may not contain a function type. Each such step then strictly
// decreases the total number of Fun nodes.
bool safe_beta(FunType const& fun, TypePtr const& part_holder_free_check_target,
               TypePtr const& arg) {
  std::set<TypeVarId> free;
  std::vector<TypeVarId> bound;
  collect_free(part_holder_free_check_target, bound, free);
  return free.find(fun.self_var) == free.end() && !contains_fun_node(arg);
}

bool safe_beta_cond(FunType const& fun, CondPtr const& part, TypePtr const& arg) {
  std::set<TypeVarId> free;
  std::vector<TypeVarId> bound;
  collect_free(part, bound, free);
  return free.find(fun.self_var) == free.end() && !contains_fun_node(arg);
}

}  // namespace

TypePtr tvar(TypeVarId id) { return make_type(TVar{id}); }

TypePtr fun_type(TypeVarId arg_var, TypeVarId self_var, TypePtr ret, CondPtr crash) {
  return make_type(FunType{arg_var, self_var, std::move(ret), std::move(crash)});
}

TypePtr ctor_type(CtorName ctor, std::vector<TypePtr> args) {
  for (auto const& a : args) {
    if (is_bot(a)) return bot_type();
  }
  return make_type(CtorType{std::move(ctor), std::move(args)});
}

TypePtr union_type(TypePtr lhs, TypePtr rhs) {
  if (is_bot(lhs)) return rhs;
  if (is_bot(rhs)) return lhs;
  return make_type(UnionType{std::move(lhs), std::move(rhs)});
}

TypePtr int_type() {
  static TypePtr const instance = make_type(IntType{});
  return instance;
}

TypePtr bot_type() {
  static TypePtr const instance = make_type(BotType{});
  return instance;
}

TypePtr type_app(TypePtr head, TypePtr arg) {
  if (is_bot(arg)) return bot_type();
  if (auto const* u = std::get_if<UnionType>(&head->node)) {
    return union_type(type_app(u->lhs, arg), type_app(u->rhs, arg));
  }
  if (std::holds_alternative<CtorType>(head->node) || std::holds_alternative<IntType>(head->node) ||
      std::holds_alternative<BotType>(head->node)) {
    return bot_type();
  }
  if (auto const* f = std::get_if<FunType>(&head->node)) {
    if (safe_beta(*f, f->ret, arg)) {
      return subst_tvar(f->ret, f->arg_var, arg);
    }
  }
  return make_type(TypeApp{std::move(head), std::move(arg)});
}

TypePtr type_proj(TypePtr head, CtorName const& ctor, int index) {
  if (auto const* c = std::get_if<CtorType>(&head->node)) {
    if (c->ctor.name == ctor.name && index >= 1 &&
        index <= static_cast<int>(c->args.size())) {
      return c->args[static_cast<std::size_t>(index - 1)];
    }
    return bot_type();
  }
  if (auto const* u = std::get_if<UnionType>(&head->node)) {
    return union_type(type_proj(u->lhs, ctor, index), type_proj(u->rhs, ctor, index));
  }
  if (std::holds_alternative<IntType>(head->node) || std::holds_alternative<BotType>(head->node) ||
      std::holds_alternative<FunType>(head->node)) {
    return bot_type();
  }
  return make_type(TypeProj{std::move(head), ctor, index});
}

CondPtr cond_true() {
  static CondPtr const instance = make_cond(CondTrue{});
  return instance;
}

CondPtr cond_false() {
  static CondPtr const instance = make_cond(CondFalse{});
  return instance;
}

namespace {

void conjuncts_of(CondPtr const& c, std::vector<CondPtr>& out) {
  if (auto const* a = std::get_if<CondAnd>(&c->node)) {
    conjuncts_of(a->lhs, out);
    conjuncts_of(a->rhs, out);
  } else {
    out.push_back(c);
  }
}

CondPtr and_chain(std::vector<CondPtr> const& cs) {
  CondPtr acc = cond_true();
  for (auto const& c : cs) acc = cond_and(acc, c);
  return acc;
}

}  // namespace

CondPtr cond_and(CondPtr lhs, CondPtr rhs) {
  if (is_ff(lhs) || is_ff(rhs)) return cond_false();
  if (is_tt(lhs)) return rhs;
  if (is_tt(rhs)) return lhs;
  if (structural_equal(lhs, rhs)) return lhs;
  return make_cond(CondAnd{std::move(lhs), std::move(rhs)});
}

CondPtr cond_or(CondPtr lhs, CondPtr rhs) {
  if (is_tt(lhs) || is_tt(rhs)) return cond_true();
  if (is_ff(lhs)) return rhs;
  if (is_ff(rhs)) return lhs;

  // (a /\ b) \/ (a /\ c) = a /\ (b \/ c); also covers idempotence and
  // absorption. Common conjuncts are matched structurally, left order kept.
  std::vector<CondPtr> ls;
  std::vector<CondPtr> rs;
  conjuncts_of(lhs, ls);
  conjuncts_of(rhs, rs);
  std::vector<CondPtr> common;
  std::vector<bool> rs_used(rs.size(), false);
  std::vector<CondPtr> rest_l;
  for (auto const& l : ls) {
    bool matched = false;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (!rs_used[i] && structural_equal(l, rs[i])) {
        rs_used[i] = true;
        matched = true;
        break;
      }
    }
    if (matched) {
      common.push_back(l);
    } else {
      rest_l.push_back(l);
    }
  }
  if (!common.empty()) {
    std::vector<CondPtr> rest_r;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (!rs_used[i]) rest_r.push_back(rs[i]);
    }
    if (rest_l.empty() || rest_r.empty()) return and_chain(common);
    auto tail = make_cond(CondOr{and_chain(rest_l), and_chain(rest_r)});
    return cond_and(and_chain(common), std::move(tail));
  }
  return make_cond(CondOr{std::move(lhs), std::move(rhs)});
}

CondPtr has_ctor(CtorName const& ctor, TypePtr type) {
  return make_cond(CondHasCtor{ctor, std::move(type)});
}

CondPtr has_no_ctor(CtorName const& ctor, TypePtr type) {
  return make_cond(CondHasNoCtor{ctor, std::move(type)});
}

CondPtr not_fun(TypePtr type) {
  if (std::holds_alternative<FunType>(type->node)) return cond_false();
  if (auto const* v = std::get_if<TVar>(&type->node)) {
    // The self variable always denotes a function type.
    if (v->id.kind == VarKind::Self) return cond_false();
  }
  return make_cond(CondNotFun{std::move(type)});
}

namespace {

// True when every value the head can denote is a non-function (constructor
// tree or integer), so applying it crashes no matter which member is real.
// Union members must agree; a union that mixes functions with other values
// stays symbolic, since collapsing it would commit to one member's fate.
bool definitely_not_callable(TypePtr const& head) {
  if (auto const* u = std::get_if<UnionType>(&head->node)) {
    return definitely_not_callable(u->lhs) && definitely_not_callable(u->rhs);
  }
  return std::holds_alternative<CtorType>(head->node) ||
         std::holds_alternative<IntType>(head->node) ||
         std::holds_alternative<BotType>(head->node);
}

}  // namespace

CondPtr cond_app(TypePtr head, TypePtr arg) {
  if (definitely_not_callable(head)) return cond_true();
  if (auto const* f = std::get_if<FunType>(&head->node)) {
    if (safe_beta_cond(*f, f->crash, arg)) {
      return subst_tvar(f->crash, f->arg_var, arg);
    }
  }
  return make_cond(CondApp{std::move(head), std::move(arg)});
}

TypePtr op_tapp(TypePtr const& fn, TypePtr const& arg) {
  if (is_bot(arg)) return bot_type();
  if (auto const* f = std::get_if<FunType>(&fn->node)) {
    TypeSubst subst{{f->arg_var, arg}, {f->self_var, fn}};
    return subst_tvar(f->ret, subst);
  }
  if (auto const* u = std::get_if<UnionType>(&fn->node)) {
    return union_type(op_tapp(u->lhs, arg), op_tapp(u->rhs, arg));
  }
  if (std::holds_alternative<CtorType>(fn->node) || std::holds_alternative<IntType>(fn->node) ||
      std::holds_alternative<BotType>(fn->node)) {
    return bot_type();
  }
  return type_app(fn, arg);
}

TypePtr op_proj(TypePtr const& t, CtorName const& ctor, int index) {
  return type_proj(t, ctor, index);
}

CondPtr op_ccapp(TypePtr const& fn, TypePtr const& arg) {
  if (auto const* f = std::get_if<FunType>(&fn->node)) {
    TypeSubst subst{{f->arg_var, arg}, {f->self_var, fn}};
    return subst_tvar(f->crash, subst);
  }
  return cond_app(fn, arg);
}

namespace {

void collect_all_nums(TypePtr const& t, int& max_num);
void collect_all_nums(CondPtr const& c, int& max_num);

void collect_all_nums(TypePtr const& t, int& max_num) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TVar>) {
          max_num = std::max(max_num, node.id.num);
        } else if constexpr (std::is_same_v<T, FunType>) {
          max_num = std::max({max_num, node.arg_var.num, node.self_var.num});
          collect_all_nums(node.ret, max_num);
          collect_all_nums(node.crash, max_num);
        } else if constexpr (std::is_same_v<T, CtorType>) {
          for (auto const& a : node.args) collect_all_nums(a, max_num);
        } else if constexpr (std::is_same_v<T, UnionType>) {
          collect_all_nums(node.lhs, max_num);
          collect_all_nums(node.rhs, max_num);
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          collect_all_nums(node.head, max_num);
          collect_all_nums(node.arg, max_num);
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          collect_all_nums(node.head, max_num);
        }
      },
      t->node);
}

void collect_all_nums(CondPtr const& c, int& max_num) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr> || std::is_same_v<T, CondAnd>) {
          collect_all_nums(node.lhs, max_num);
          collect_all_nums(node.rhs, max_num);
        } else if constexpr (std::is_same_v<T, CondHasCtor> ||
                             std::is_same_v<T, CondHasNoCtor> ||
                             std::is_same_v<T, CondNotFun>) {
          collect_all_nums(node.type, max_num);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          collect_all_nums(node.head, max_num);
          collect_all_nums(node.arg, max_num);
        }
      },
      c->node);
}

}  // namespace

TypePtr subst_tvar(TypePtr const& t, TypeSubst const& subst) {
  if (subst.empty()) return t;
  return std::visit(
      [&](auto const& node) -> TypePtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TVar>) {
          auto it = subst.find(node.id);
          return it == subst.end() ? t : it->second;
        } else if constexpr (std::is_same_v<T, FunType>) {
          TypeSubst inner;
          bool collide = false;
          for (auto const& [var, replacement] : subst) {
            if (var == node.arg_var || var == node.self_var) continue;
            auto free = free_tvars(replacement);
            collide |= free.count(node.arg_var) != 0 || free.count(node.self_var) != 0;
            inner.emplace(var, replacement);
          }
          if (inner.empty()) return t;
          if (!collide) {
            return fun_type(node.arg_var, node.self_var, subst_tvar(node.ret, inner),
                            subst_tvar(node.crash, inner));
          }
          // A replacement mentions one of this function's binders; rename the
          // binders to globally unused ids so the capture cannot happen.
          int max_num = std::max(node.arg_var.num, node.self_var.num);
          collect_all_nums(node.ret, max_num);
          collect_all_nums(node.crash, max_num);
          for (auto const& [var, replacement] : inner) collect_all_nums(replacement, max_num);
          TypeVarId const fresh_arg{VarKind::Arg, max_num + 1};
          TypeVarId const fresh_self{VarKind::Self, max_num + 2};
          TypeSubst rename{{node.arg_var, tvar(fresh_arg)}, {node.self_var, tvar(fresh_self)}};
          return fun_type(fresh_arg, fresh_self, subst_tvar(subst_tvar(node.ret, rename), inner),
                          subst_tvar(subst_tvar(node.crash, rename), inner));
        } else if constexpr (std::is_same_v<T, CtorType>) {
          std::vector<TypePtr> args;
          args.reserve(node.args.size());
          for (auto const& a : node.args) args.push_back(subst_tvar(a, subst));
          return ctor_type(node.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return union_type(subst_tvar(node.lhs, subst), subst_tvar(node.rhs, subst));
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return type_app(subst_tvar(node.head, subst), subst_tvar(node.arg, subst));
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return type_proj(subst_tvar(node.head, subst), node.ctor, node.index);
        } else {
          return t;
        }
      },
      t->node);
}

CondPtr subst_tvar(CondPtr const& c, TypeSubst const& subst) {
  if (subst.empty()) return c;
  return std::visit(
      [&](auto const& node) -> CondPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr>) {
          return cond_or(subst_tvar(node.lhs, subst), subst_tvar(node.rhs, subst));
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return cond_and(subst_tvar(node.lhs, subst), subst_tvar(node.rhs, subst));
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          return has_ctor(node.ctor, subst_tvar(node.type, subst));
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          return has_no_ctor(node.ctor, subst_tvar(node.type, subst));
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          return not_fun(subst_tvar(node.type, subst));
        } else if constexpr (std::is_same_v<T, CondApp>) {
          return cond_app(subst_tvar(node.head, subst), subst_tvar(node.arg, subst));
        } else {
          return c;
        }
      },
      c->node);
}

TypePtr subst_tvar(TypePtr const& t, TypeVarId var, TypePtr const& replacement) {
  return subst_tvar(t, TypeSubst{{var, replacement}});
}

CondPtr subst_tvar(CondPtr const& c, TypeVarId var, TypePtr const& replacement) {
  return subst_tvar(c, TypeSubst{{var, replacement}});
}

std::set<TypeVarId> free_tvars(TypePtr const& t) {
  std::set<TypeVarId> out;
  std::vector<TypeVarId> bound;
  collect_free(t, bound, out);
  return out;
}

std::set<TypeVarId> free_tvars(CondPtr const& c) {
  std::set<TypeVarId> out;
  std::vector<TypeVarId> bound;
  collect_free(c, bound, out);
  return out;
}

namespace {

void union_members_of(TypePtr const& t, std::vector<TypePtr>& out) {
  if (auto const* u = std::get_if<UnionType>(&t->node)) {
    union_members_of(u->lhs, out);
    union_members_of(u->rhs, out);
  } else if (!is_bot(t)) {
    out.push_back(t);
  }
}

}  // namespace

TypePtr normalize(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> TypePtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FunType>) {
          return fun_type(node.arg_var, node.self_var, normalize(node.ret),
                          normalize(node.crash));
        } else if constexpr (std::is_same_v<T, CtorType>) {
          std::vector<TypePtr> args;
          args.reserve(node.args.size());
          for (auto const& a : node.args) args.push_back(normalize(a));
          return ctor_type(node.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, UnionType>) {
          std::vector<TypePtr> members;
          union_members_of(normalize(node.lhs), members);
          union_members_of(normalize(node.rhs), members);
          std::vector<TypePtr> unique;
          for (auto const& m : members) {
            bool dup = std::any_of(unique.begin(), unique.end(),
                                   [&](TypePtr const& u) { return alpha_equal(u, m, 0); });
            if (!dup) unique.push_back(m);
          }
          TypePtr acc = bot_type();
          for (auto const& m : unique) acc = union_type(acc, m);
          return acc;
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return type_app(normalize(node.head), normalize(node.arg));
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return type_proj(normalize(node.head), node.ctor, node.index);
        } else {
          return t;
        }
      },
      t->node);
}

CondPtr normalize(CondPtr const& c) {
  return std::visit(
      [&](auto const& node) -> CondPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr>) {
          return cond_or(normalize(node.lhs), normalize(node.rhs));
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return cond_and(normalize(node.lhs), normalize(node.rhs));
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          return has_ctor(node.ctor, normalize(node.type));
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          return has_no_ctor(node.ctor, normalize(node.type));
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          return not_fun(normalize(node.type));
        } else if constexpr (std::is_same_v<T, CondApp>) {
          return cond_app(normalize(node.head), normalize(node.arg));
        } else {
          return c;
        }
      },
      c->node);
}

namespace {

using VarBij = std::vector<std::pair<TypeVarId, TypeVarId>>;

bool var_corresponds(VarBij const& bij, TypeVarId a, TypeVarId b) {
  for (auto it = bij.rbegin(); it != bij.rend(); ++it) {
    if (it->first == a || it->second == b) return it->first == a && it->second == b;
  }
  return a == b;
}

bool contains_pending(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TypeApp> || std::is_same_v<T, TypeProj>) {
          return true;
        } else if constexpr (std::is_same_v<T, CtorType>) {
          return std::any_of(node.args.begin(), node.args.end(), contains_pending);
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return contains_pending(node.lhs) || contains_pending(node.rhs);
        } else {
          return false;
        }
      },
      t->node);
}

bool contains_pending_cond(CondPtr const& c) {
  return std::visit(
      [&](auto const& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondApp>) {
          return true;
        } else if constexpr (std::is_same_v<T, CondOr> || std::is_same_v<T, CondAnd>) {
          return contains_pending_cond(node.lhs) || contains_pending_cond(node.rhs);
        } else if constexpr (std::is_same_v<T, CondHasCtor> || std::is_same_v<T, CondHasNoCtor> ||
                             std::is_same_v<T, CondNotFun>) {
          return contains_pending(node.type);
        } else {
          return false;
        }
      },
      c->node);
}

bool alpha_type(TypePtr const& a, TypePtr const& b, VarBij& bij, int& budget);
bool alpha_cond(CondPtr const& a, CondPtr const& b, VarBij& bij, int& budget);

bool alpha_type_structural(TypePtr const& a, TypePtr const& b, VarBij& bij, int& budget) {
  if (a->node.index() != b->node.index()) return false;
  if (auto const* va = std::get_if<TVar>(&a->node)) {
    return var_corresponds(bij, va->id, std::get<TVar>(b->node).id);
  }
  if (auto const* fa = std::get_if<FunType>(&a->node)) {
    auto const& fb = std::get<FunType>(b->node);
    auto const base = bij.size();
    bij.emplace_back(fa->arg_var, fb.arg_var);
    bij.emplace_back(fa->self_var, fb.self_var);
    bool const ok =
        alpha_type(fa->ret, fb.ret, bij, budget) && alpha_cond(fa->crash, fb.crash, bij, budget);
    bij.resize(base);
    return ok;
  }
  if (auto const* ca = std::get_if<CtorType>(&a->node)) {
    auto const& cb = std::get<CtorType>(b->node);
    if (!(ca->ctor == cb.ctor) || ca->args.size() != cb.args.size()) return false;
    for (std::size_t i = 0; i < ca->args.size(); ++i) {
      if (!alpha_type(ca->args[i], cb.args[i], bij, budget)) return false;
    }
    return true;
  }
  if (std::holds_alternative<UnionType>(a->node)) {
    std::vector<TypePtr> ms_a;
    std::vector<TypePtr> ms_b;
    union_members_of(a, ms_a);
    union_members_of(b, ms_b);
    if (ms_a.size() != ms_b.size()) return false;
    std::vector<bool> used(ms_b.size(), false);
    for (auto const& m : ms_a) {
      bool matched = false;
      for (std::size_t i = 0; i < ms_b.size(); ++i) {
        int zero = 0;
        if (!used[i] && alpha_type(m, ms_b[i], bij, zero)) {
          used[i] = true;
          matched = true;
          break;
        }
      }
      if (!matched) return false;
    }
    return true;
  }
  if (auto const* pa = std::get_if<TypeApp>(&a->node)) {
    auto const& pb = std::get<TypeApp>(b->node);
    return alpha_type(pa->head, pb.head, bij, budget) && alpha_type(pa->arg, pb.arg, bij, budget);
  }
  if (auto const* ja = std::get_if<TypeProj>(&a->node)) {
    auto const& jb = std::get<TypeProj>(b->node);
    return ja->ctor == jb.ctor && ja->index == jb.index &&
           alpha_type(ja->head, jb.head, bij, budget);
  }
  return true;  // IntType, BotType
}

bool alpha_type(TypePtr const& a, TypePtr const& b, VarBij& bij, int& budget) {
  if (alpha_type_structural(a, b, bij, budget)) return true;
  if (budget > 0 && contains_pending(a)) {
    auto [a2, changed] = unfold_type_once(a);
    if (changed) {
      --budget;
      return alpha_type(a2, b, bij, budget);
    }
  }
  if (budget > 0 && contains_pending(b)) {
    auto [b2, changed] = unfold_type_once(b);
    if (changed) {
      --budget;
      return alpha_type(a, b2, bij, budget);
    }
  }
  return false;
}

bool alpha_cond_structural(CondPtr const& a, CondPtr const& b, VarBij& bij, int& budget) {
  if (a->node.index() != b->node.index()) return false;
  if (auto const* oa = std::get_if<CondOr>(&a->node)) {
    auto const& ob = std::get<CondOr>(b->node);
    return alpha_cond(oa->lhs, ob.lhs, bij, budget) && alpha_cond(oa->rhs, ob.rhs, bij, budget);
  }
  if (auto const* aa = std::get_if<CondAnd>(&a->node)) {
    auto const& ab = std::get<CondAnd>(b->node);
    return alpha_cond(aa->lhs, ab.lhs, bij, budget) && alpha_cond(aa->rhs, ab.rhs, bij, budget);
  }
  if (auto const* ha = std::get_if<CondHasCtor>(&a->node)) {
    auto const& hb = std::get<CondHasCtor>(b->node);
    return ha->ctor == hb.ctor && alpha_type(ha->type, hb.type, bij, budget);
  }
  if (auto const* na = std::get_if<CondHasNoCtor>(&a->node)) {
    auto const& nb = std::get<CondHasNoCtor>(b->node);
    return na->ctor == nb.ctor && alpha_type(na->type, nb.type, bij, budget);
  }
  if (auto const* fa = std::get_if<CondNotFun>(&a->node)) {
    return alpha_type(fa->type, std::get<CondNotFun>(b->node).type, bij, budget);
  }
  if (auto const* ca = std::get_if<CondApp>(&a->node)) {
    auto const& cb = std::get<CondApp>(b->node);
    return alpha_type(ca->head, cb.head, bij, budget) && alpha_type(ca->arg, cb.arg, bij, budget);
  }
  return true;  // CondTrue, CondFalse
}

bool alpha_cond(CondPtr const& a, CondPtr const& b, VarBij& bij, int& budget) {
  if (alpha_cond_structural(a, b, bij, budget)) return true;
  if (budget > 0 && contains_pending_cond(a)) {
    auto [a2, changed] = unfold_cond_once(a);
    if (changed) {
      --budget;
      return alpha_cond(a2, b, bij, budget);
    }
  }
  if (budget > 0 && contains_pending_cond(b)) {
    auto [b2, changed] = unfold_cond_once(b);
    if (changed) {
      --budget;
      return alpha_cond(a, b2, bij, budget);
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(TypePtr const& a, TypePtr const& b, int unfold_budget) {
  VarBij bij;
  int budget = unfold_budget;
  return alpha_type(normalize(a), normalize(b), bij, budget);
}

bool alpha_equal(CondPtr const& a, CondPtr const& b, int unfold_budget) {
  VarBij bij;
  int budget = unfold_budget;
  return alpha_cond(normalize(a), normalize(b), bij, budget);
}

bool structural_equal(TypePtr const& a, TypePtr const& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](auto const& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        auto const& nb = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, TVar>) {
          return na.id == nb.id;
        } else if constexpr (std::is_same_v<T, FunType>) {
          return na.arg_var == nb.arg_var && na.self_var == nb.self_var &&
                 structural_equal(na.ret, nb.ret) && structural_equal(na.crash, nb.crash);
        } else if constexpr (std::is_same_v<T, CtorType>) {
          if (!(na.ctor == nb.ctor) || na.args.size() != nb.args.size()) return false;
          for (std::size_t i = 0; i < na.args.size(); ++i) {
            if (!structural_equal(na.args[i], nb.args[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return structural_equal(na.lhs, nb.lhs) && structural_equal(na.rhs, nb.rhs);
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return structural_equal(na.head, nb.head) && structural_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return na.ctor == nb.ctor && na.index == nb.index && structural_equal(na.head, nb.head);
        } else {
          return true;
        }
      },
      a->node);
}

bool structural_equal(CondPtr const& a, CondPtr const& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](auto const& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        auto const& nb = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, CondOr> || std::is_same_v<T, CondAnd>) {
          return structural_equal(na.lhs, nb.lhs) && structural_equal(na.rhs, nb.rhs);
        } else if constexpr (std::is_same_v<T, CondHasCtor> || std::is_same_v<T, CondHasNoCtor>) {
          return na.ctor == nb.ctor && structural_equal(na.type, nb.type);
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          return structural_equal(na.type, nb.type);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          return structural_equal(na.head, nb.head) && structural_equal(na.arg, nb.arg);
        } else {
          return true;
        }
      },
      a->node);
}

std::size_t type_size(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> std::size_t {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FunType>) {
          return 1 + type_size(node.ret) + cond_size(node.crash);
        } else if constexpr (std::is_same_v<T, CtorType>) {
          std::size_t n = 1;
          for (auto const& a : node.args) n += type_size(a);
          return n;
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return 1 + type_size(node.lhs) + type_size(node.rhs);
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return 1 + type_size(node.head) + type_size(node.arg);
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return 1 + type_size(node.head);
        } else {
          return 1;
        }
      },
      t->node);
}

std::size_t cond_size(CondPtr const& c) {
  return std::visit(
      [&](auto const& node) -> std::size_t {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr> || std::is_same_v<T, CondAnd>) {
          return 1 + cond_size(node.lhs) + cond_size(node.rhs);
        } else if constexpr (std::is_same_v<T, CondHasCtor> || std::is_same_v<T, CondHasNoCtor> ||
                             std::is_same_v<T, CondNotFun>) {
          return 1 + type_size(node.type);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          return 1 + type_size(node.head) + type_size(node.arg);
        } else {
          return 1;
        }
      },
      c->node);
}

bool contains_fun(TypePtr const& t) { return contains_fun_node(t); }

std::string render_tvar(TypeVarId id) {
  return (id.kind == VarKind::Arg ? "a" : "X") + std::to_string(id.num);
}

namespace {

// Type precedence: 0 top/union, 1 union member, 2 postfix/atom.
void render(std::ostream& os, TypePtr const& t, int prec);
// Condition precedence: 0 top/or, 1 or member, 2 atom.
void render(std::ostream& os, CondPtr const& c, int prec);

void render(std::ostream& os, TypePtr const& t, int prec) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, TVar>) {
          os << render_tvar(node.id);
        } else if constexpr (std::is_same_v<T, IntType>) {
          os << "int";
        } else if constexpr (std::is_same_v<T, BotType>) {
          os << "bot";
        } else if constexpr (std::is_same_v<T, CtorType>) {
          os << node.ctor.name;
          if (!node.args.empty()) {
            os << "(";
            for (std::size_t i = 0; i < node.args.size(); ++i) {
              if (i > 0) os << ", ";
              render(os, node.args[i], 0);
            }
            os << ")";
          }
        } else if constexpr (std::is_same_v<T, UnionType>) {
          bool const parens = prec > 0;
          if (parens) os << "(";
          std::vector<TypePtr> members;
          union_members_of(t, members);
          if (members.empty()) {
            os << "bot";
          } else {
            for (std::size_t i = 0; i < members.size(); ++i) {
              if (i > 0) os << " | ";
              render(os, members[i], 1);
            }
          }
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, FunType>) {
          bool const parens = prec > 0;
          if (parens) os << "(";
          os << "[" << render_tvar(node.arg_var) << "]";
          render(os, node.ret, 0);
          os << " & ";
          render(os, node.crash, 0);
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          render(os, node.head, 2);
          os << "<";
          render(os, node.arg, 0);
          os << ">";
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          os << node.ctor.name << "." << node.index << "(";
          render(os, node.head, 0);
          os << ")";
        }
      },
      t->node);
}

void or_members_of(CondPtr const& c, std::vector<CondPtr>& out) {
  if (auto const* o = std::get_if<CondOr>(&c->node)) {
    or_members_of(o->lhs, out);
    or_members_of(o->rhs, out);
  } else {
    out.push_back(c);
  }
}

void render(std::ostream& os, CondPtr const& c, int prec) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          os << "tt";
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          os << "ff";
        } else if constexpr (std::is_same_v<T, CondOr>) {
          bool const parens = prec > 0;
          if (parens) os << "(";
          std::vector<CondPtr> members;
          or_members_of(c, members);
          for (std::size_t i = 0; i < members.size(); ++i) {
            if (i > 0) os << " \\/ ";
            render(os, members[i], 1);
          }
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          bool const parens = prec > 1;
          if (parens) os << "(";
          std::vector<CondPtr> members;
          conjuncts_of(c, members);
          for (std::size_t i = 0; i < members.size(); ++i) {
            if (i > 0) os << " /\\ ";
            render(os, members[i], 2);
          }
          if (parens) os << ")";
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          os << node.ctor.name << " in ";
          render(os, node.type, 2);
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          os << node.ctor.name << " notin ";
          render(os, node.type, 2);
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          os << "nofun ";
          render(os, node.type, 2);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          os << "cc(";
          render(os, node.head, 0);
          os << ", ";
          render(os, node.arg, 0);
          os << ")";
        }
      },
      c->node);
}

}  // namespace

std::string render_type(TypePtr const& t) {
  std::ostringstream os;
  render(os, t, 0);
  return os.str();
}

std::string render_cond(CondPtr const& c) {
  std::ostringstream os;
  render(os, c, 0);
  return os.str();
}

}  // namespace crashlens
