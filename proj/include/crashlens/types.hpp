#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "crashlens/ast.hpp"

namespace crashlens {

enum class VarKind { Arg, Self };

struct TypeVarId {
  VarKind kind = VarKind::Arg;
  int num = 0;

  auto operator<=>(TypeVarId const&) const = default;
};

struct Type;
using TypePtr = std::shared_ptr<const Type>;
struct CrashCond;
using CondPtr = std::shared_ptr<const CrashCond>;

struct TVar {
  TypeVarId id;
};

// Equi-recursive function type [arg_var](ret & crash); self_var names the
// function type itself inside ret and crash.
struct FunType {
  TypeVarId arg_var;
  TypeVarId self_var;
  TypePtr ret;
  CondPtr crash;
};

struct CtorType {
  CtorName ctor;
  std::vector<TypePtr> args;
};

struct UnionType {
  TypePtr lhs;
  TypePtr rhs;
};

struct IntType {};
struct BotType {};

// Symbolic application/projection; kept pending while the head may still
// unfold to a function (type variable, TypeApp, TypeProj or recursive FunType).
struct TypeApp {
  TypePtr head;
  TypePtr arg;
};

struct TypeProj {
  TypePtr head;
  CtorName ctor;
  int index;  // 1-based component index
};

struct Type {
  std::variant<TVar, FunType, CtorType, UnionType, IntType, BotType, TypeApp, TypeProj> node;
};

struct CondTrue {};
struct CondFalse {};
struct CondOr {
  CondPtr lhs;
  CondPtr rhs;
};
struct CondAnd {
  CondPtr lhs;
  CondPtr rhs;
};
struct CondHasCtor {
  CtorName ctor;
  TypePtr type;
};
struct CondHasNoCtor {
  CtorName ctor;
  TypePtr type;
};
struct CondNotFun {
  TypePtr type;
};
// Symbolic crash condition of applying head to arg.
struct CondApp {
  TypePtr head;
  TypePtr arg;
};

struct CrashCond {
  std::variant<CondTrue, CondFalse, CondOr, CondAnd, CondHasCtor, CondHasNoCtor, CondNotFun,
               CondApp>
      node;
};

enum class TruthValue { False, Unknown, True };

[[nodiscard]] std::string to_string(TruthValue v);

// --- Constructors. These normalize:
//   * Union drops Bot sides.
//   * CtorType with a Bot component collapses to Bot (empty interpretation).
//   * type_app / type_proj / cond_app reduce resolved non-function heads
//     (CtorType, IntType, Bot) immediately and distribute over unions;
//     function heads are beta-reduced only when that provably terminates
//     (self variable unused in the substituted part, argument function-free),
//     otherwise the node stays symbolic for the solver's bounded unfolding.
//   * cond_and / cond_or apply unit laws; cond_or additionally factors
//     conjuncts common to both disjuncts: (a && b) || (a && c) = a && (b || c).
//   * not_fun collapses to ff on function types and self variables.
TypePtr tvar(TypeVarId id);
TypePtr fun_type(TypeVarId arg_var, TypeVarId self_var, TypePtr ret, CondPtr crash);
TypePtr ctor_type(CtorName ctor, std::vector<TypePtr> args);
TypePtr union_type(TypePtr lhs, TypePtr rhs);
TypePtr int_type();
TypePtr bot_type();
TypePtr type_app(TypePtr head, TypePtr arg);
TypePtr type_proj(TypePtr head, CtorName const& ctor, int index);

CondPtr cond_true();
CondPtr cond_false();
CondPtr cond_or(CondPtr lhs, CondPtr rhs);
CondPtr cond_and(CondPtr lhs, CondPtr rhs);
CondPtr has_ctor(CtorName const& ctor, TypePtr type);
CondPtr has_no_ctor(CtorName const& ctor, TypePtr type);
CondPtr not_fun(TypePtr type);
CondPtr cond_app(TypePtr head, TypePtr arg);

// --- Operators from the analysis rules. Unlike the node constructors these
// always beta-reduce a function head once (the rules apply them exactly once
// per syntax node, so this terminates).
[[nodiscard]] TypePtr op_tapp(TypePtr const& fn, TypePtr const& arg);
[[nodiscard]] TypePtr op_proj(TypePtr const& t, CtorName const& ctor, int index);
[[nodiscard]] CondPtr op_ccapp(TypePtr const& fn, TypePtr const& arg);

// --- Substitution of type variables. Fun binders shadow; when a replacement
// mentions a binder id, the binders are renamed to unused ids first, so free
// variables of replacements are never captured.
using TypeSubst = std::map<TypeVarId, TypePtr>;
[[nodiscard]] TypePtr subst_tvar(TypePtr const& t, TypeSubst const& subst);
[[nodiscard]] CondPtr subst_tvar(CondPtr const& c, TypeSubst const& subst);
[[nodiscard]] TypePtr subst_tvar(TypePtr const& t, TypeVarId var, TypePtr const& replacement);
[[nodiscard]] CondPtr subst_tvar(CondPtr const& c, TypeVarId var, TypePtr const& replacement);

[[nodiscard]] std::set<TypeVarId> free_tvars(TypePtr const& t);
[[nodiscard]] std::set<TypeVarId> free_tvars(CondPtr const& c);

// Flattens and dedupes unions, drops empty members, reapplies the
// constructor-level reductions bottom-up (including inside Fun bodies and
// predicate arguments). Idempotent.
[[nodiscard]] TypePtr normalize(TypePtr const& t);
[[nodiscard]] CondPtr normalize(CondPtr const& c);

// Equality up to Fun binder renaming and union reordering, checked after
// normalize. With unfold_budget > 0, mismatching positions may additionally
// spend budget to unfold pending applications on either side, giving a
// bounded equi-recursive comparison. Boolean structure of crash conditions is
// compared literally.
[[nodiscard]] bool alpha_equal(TypePtr const& a, TypePtr const& b, int unfold_budget = 0);
[[nodiscard]] bool alpha_equal(CondPtr const& a, CondPtr const& b, int unfold_budget = 0);

// Exact structural equality, binder ids included.
[[nodiscard]] bool structural_equal(TypePtr const& a, TypePtr const& b);
[[nodiscard]] bool structural_equal(CondPtr const& a, CondPtr const& b);

[[nodiscard]] std::size_t type_size(TypePtr const& t);
[[nodiscard]] std::size_t cond_size(CondPtr const& c);

[[nodiscard]] bool contains_fun(TypePtr const& t);

// Canonical rendering:
//   types:      a0, X0, int, bot, Cons(t1, t2), t1 | t2, t1<t2>, C.i(t),
//               [a0]ret & crash
//   conditions: tt, ff, c1 /\ c2, c1 \/ c2, C in t, C notin t, nofun t,
//               cc(t1, t2)
// Union binds loosest in types, then Fun (its crash extends right), then
// postfix application. /\ binds tighter than \/.
[[nodiscard]] std::string render_type(TypePtr const& t);
[[nodiscard]] std::string render_cond(CondPtr const& c);
[[nodiscard]] std::string render_tvar(TypeVarId id);

}  // namespace crashlens
