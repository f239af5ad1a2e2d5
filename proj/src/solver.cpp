#include "crashlens/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace crashlens {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::DefiniteCrashOrDiverge: return "crash";
    case VerdictKind::NoCrashAtBound: return "no_crash_at_bound";
    case VerdictKind::Unknown: return "unknown";
  }
  return "unknown";
}

TypePtr apply_interp(Interpretation const& interp, TypePtr const& t) {
  return subst_tvar(t, interp);
}

CondPtr apply_interp(Interpretation const& interp, CondPtr const& c) {
  return subst_tvar(c, interp);
}

namespace {

void members_of(TypePtr const& t, std::vector<TypePtr>& out) {
  if (auto const* u = std::get_if<UnionType>(&t->node)) {
    members_of(u->lhs, out);
    members_of(u->rhs, out);
  } else if (!std::holds_alternative<BotType>(t->node)) {
    out.push_back(t);
  }
}

std::vector<TypePtr> members_of(TypePtr const& t) {
  std::vector<TypePtr> out;
  members_of(t, out);
  return out;
}

// Member classification for the free (no-unfolding) predicate evaluation.
struct MemberFacts {
  bool any_symbolic = false;  // free variable or pending application
  bool any_fun = false;       // function type (self variables denote functions)
  bool any_nonfun_value = false;
  std::vector<CtorName> ctors;
};

MemberFacts classify(TypePtr const& t) {
  MemberFacts facts;
  for (auto const& m : members_of(t)) {
    std::visit(
        [&](auto const& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, CtorType>) {
            facts.ctors.push_back(node.ctor);
            facts.any_nonfun_value = true;
          } else if constexpr (std::is_same_v<T, IntType>) {
            facts.any_nonfun_value = true;
          } else if constexpr (std::is_same_v<T, FunType>) {
            facts.any_fun = true;
          } else if constexpr (std::is_same_v<T, TVar>) {
            if (node.id.kind == VarKind::Self) {
              facts.any_fun = true;
            } else {
              facts.any_symbolic = true;
            }
          } else {
            facts.any_symbolic = true;
          }
        },
        m->node);
  }
  return facts;
}

TruthValue kleene_and(TruthValue a, TruthValue b) {
  if (a == TruthValue::False || b == TruthValue::False) return TruthValue::False;
  if (a == TruthValue::True && b == TruthValue::True) return TruthValue::True;
  return TruthValue::Unknown;
}

TruthValue kleene_or(TruthValue a, TruthValue b) {
  if (a == TruthValue::True || b == TruthValue::True) return TruthValue::True;
  if (a == TruthValue::False && b == TruthValue::False) return TruthValue::False;
  return TruthValue::Unknown;
}

// A union type stands for one unknown value drawn from its members, so a
// predicate resolves only when every member agrees; a mix of outcomes stays
// Unknown until the case split below separates the hypotheses.
TruthValue eval_ctor_test(CtorName const& ctor, TypePtr const& t) {
  bool named = false;
  bool other = false;
  bool symbolic = false;
  for (auto const& m : members_of(t)) {
    std::visit(
        [&](auto const& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, CtorType>) {
            (node.ctor.name == ctor.name ? named : other) = true;
          } else if constexpr (std::is_same_v<T, IntType> || std::is_same_v<T, FunType>) {
            other = true;
          } else if constexpr (std::is_same_v<T, TVar>) {
            (node.id.kind == VarKind::Self ? other : symbolic) = true;
          } else {
            symbolic = true;
          }
        },
        m->node);
  }
  if (!named && !symbolic) return TruthValue::False;
  if (named && !other && !symbolic) return TruthValue::True;
  return TruthValue::Unknown;
}

TruthValue negate(TruthValue v) {
  if (v == TruthValue::True) return TruthValue::False;
  if (v == TruthValue::False) return TruthValue::True;
  return TruthValue::Unknown;
}

TruthValue try_eval(CondPtr const& c) {
  return std::visit(
      [&](auto const& node) -> TruthValue {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondTrue>) {
          return TruthValue::True;
        } else if constexpr (std::is_same_v<T, CondFalse>) {
          return TruthValue::False;
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          return kleene_and(try_eval(node.lhs), try_eval(node.rhs));
        } else if constexpr (std::is_same_v<T, CondOr>) {
          return kleene_or(try_eval(node.lhs), try_eval(node.rhs));
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          return eval_ctor_test(node.ctor, node.type);
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          return negate(eval_ctor_test(node.ctor, node.type));
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          auto facts = classify(node.type);
          if (!facts.any_fun && !facts.any_symbolic) return TruthValue::True;
          if (facts.any_fun && !facts.any_nonfun_value && !facts.any_symbolic) {
            return TruthValue::False;
          }
          return TruthValue::Unknown;
        } else {
          static_assert(std::is_same_v<T, CondApp>);
          // Applying crashes for sure only when no member can be a function;
          // an empty head means the function expression itself goes wrong.
          auto facts = classify(node.head);
          if (!facts.any_fun && !facts.any_symbolic) return TruthValue::True;
          return TruthValue::Unknown;
        }
      },
      c->node);
}

bool reducible_head(TypePtr const& h) {
  if (std::holds_alternative<BotType>(h->node)) return true;
  for (auto const& m : members_of(h)) {
    if (std::holds_alternative<FunType>(m->node) || std::holds_alternative<CtorType>(m->node) ||
        std::holds_alternative<IntType>(m->node)) {
      return true;
    }
  }
  return false;
}

// A crash-condition application reduces only once the head commits to a
// single outcome: one function (beta) or no possible function at all
// (definite crash). A union mixing functions with other members must wait
// for the case split; collapsing it early would pick one member's fate.
bool ccapp_reducible(TypePtr const& h) {
  if (std::holds_alternative<FunType>(h->node)) return true;
  auto facts = classify(h);
  return !facts.any_fun && !facts.any_symbolic;
}

TypePtr unfold_type(TypePtr const& t, bool& changed) {
  return std::visit(
      [&](auto const& node) -> TypePtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorType>) {
          std::vector<TypePtr> args;
          args.reserve(node.args.size());
          bool any = false;
          for (auto const& a : node.args) {
            args.push_back(unfold_type(a, any));
          }
          if (!any) return t;
          changed = true;
          return ctor_type(node.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, UnionType>) {
          bool any = false;
          auto lhs = unfold_type(node.lhs, any);
          auto rhs = unfold_type(node.rhs, any);
          if (!any) return t;
          changed = true;
          return union_type(std::move(lhs), std::move(rhs));
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          bool any = false;
          auto head = unfold_type(node.head, any);
          auto arg = unfold_type(node.arg, any);
          if (reducible_head(head) || std::holds_alternative<BotType>(arg->node)) {
            changed = true;
            return op_tapp(head, arg);
          }
          if (!any) return t;
          changed = true;
          return type_app(std::move(head), std::move(arg));
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          bool any = false;
          auto head = unfold_type(node.head, any);
          if (reducible_head(head)) {
            changed = true;
            return op_proj(head, node.ctor, node.index);
          }
          if (!any) return t;
          changed = true;
          return type_proj(std::move(head), node.ctor, node.index);
        } else {
          // Variables, Int, Bot; Fun interiors only matter after a beta step.
          return t;
        }
      },
      t->node);
}

CondPtr unfold_cond(CondPtr const& c, bool& changed) {
  return std::visit(
      [&](auto const& node) -> CondPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondOr>) {
          bool any = false;
          auto lhs = unfold_cond(node.lhs, any);
          auto rhs = unfold_cond(node.rhs, any);
          if (!any) return c;
          changed = true;
          return cond_or(std::move(lhs), std::move(rhs));
        } else if constexpr (std::is_same_v<T, CondAnd>) {
          bool any = false;
          auto lhs = unfold_cond(node.lhs, any);
          auto rhs = unfold_cond(node.rhs, any);
          if (!any) return c;
          changed = true;
          return cond_and(std::move(lhs), std::move(rhs));
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          bool any = false;
          auto type = unfold_type(node.type, any);
          if (!any) return c;
          changed = true;
          return has_ctor(node.ctor, std::move(type));
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          bool any = false;
          auto type = unfold_type(node.type, any);
          if (!any) return c;
          changed = true;
          return has_no_ctor(node.ctor, std::move(type));
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          bool any = false;
          auto type = unfold_type(node.type, any);
          if (!any) return c;
          changed = true;
          return not_fun(std::move(type));
        } else if constexpr (std::is_same_v<T, CondApp>) {
          bool any = false;
          auto head = unfold_type(node.head, any);
          auto arg = unfold_type(node.arg, any);
          if (ccapp_reducible(head)) {
            changed = true;
            return op_ccapp(head, arg);
          }
          if (!any) return c;
          changed = true;
          return cond_app(std::move(head), std::move(arg));
        } else {
          return c;
        }
      },
      c->node);
}

// Case split over union members. All occurrences of one union subterm stand
// for the same unknown value (evaluation is deterministic and effect-free),
// so the condition may be evaluated once per member, substituted at every
// occurrence, and the verdict trusted only when the hypotheses are unanimous.

TypePtr replace_type(TypePtr const& t, TypePtr const& from, TypePtr const& to) {
  if (structural_equal(t, from)) return to;
  return std::visit(
      [&](auto const& node) -> TypePtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorType>) {
          std::vector<TypePtr> args;
          args.reserve(node.args.size());
          for (auto const& a : node.args) args.push_back(replace_type(a, from, to));
          return ctor_type(node.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return union_type(replace_type(node.lhs, from, to), replace_type(node.rhs, from, to));
        } else if constexpr (std::is_same_v<T, TypeApp>) {
          return type_app(replace_type(node.head, from, to), replace_type(node.arg, from, to));
        } else if constexpr (std::is_same_v<T, TypeProj>) {
          return type_proj(replace_type(node.head, from, to), node.ctor, node.index);
        } else {
          // Variables, Int, Bot; function interiors only matter after a beta
          // step, which re-exposes any occurrences at the top level.
          return t;
        }
      },
      t->node);
}

CondPtr replace_type(CondPtr const& c, TypePtr const& from, TypePtr const& to) {
  return std::visit(
      [&](auto const& node) -> CondPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondAnd>) {
          return cond_and(replace_type(node.lhs, from, to), replace_type(node.rhs, from, to));
        } else if constexpr (std::is_same_v<T, CondOr>) {
          return cond_or(replace_type(node.lhs, from, to), replace_type(node.rhs, from, to));
        } else if constexpr (std::is_same_v<T, CondHasCtor>) {
          return has_ctor(node.ctor, replace_type(node.type, from, to));
        } else if constexpr (std::is_same_v<T, CondHasNoCtor>) {
          return has_no_ctor(node.ctor, replace_type(node.type, from, to));
        } else if constexpr (std::is_same_v<T, CondNotFun>) {
          return not_fun(replace_type(node.type, from, to));
        } else if constexpr (std::is_same_v<T, CondApp>) {
          return cond_app(replace_type(node.head, from, to), replace_type(node.arg, from, to));
        } else {
          return c;
        }
      },
      c->node);
}

void push_candidate(TypePtr const& t, std::vector<TypePtr>& out) {
  if (!std::holds_alternative<UnionType>(t->node)) return;
  for (auto const& seen : out) {
    if (structural_equal(seen, t)) return;
  }
  out.push_back(t);
}

void split_candidates(CondPtr const& c, std::vector<TypePtr>& out) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CondAnd> || std::is_same_v<T, CondOr>) {
          split_candidates(node.lhs, out);
          split_candidates(node.rhs, out);
        } else if constexpr (std::is_same_v<T, CondHasCtor> ||
                             std::is_same_v<T, CondHasNoCtor> ||
                             std::is_same_v<T, CondNotFun>) {
          push_candidate(node.type, out);
        } else if constexpr (std::is_same_v<T, CondApp>) {
          push_candidate(node.head, out);
        }
      },
      c->node);
}

constexpr int kSplitDepth = 8;
constexpr int kSplitFuel = 2000;
// Degenerate inputs can double the condition every unfolding round; beyond
// these sizes the bounded answer is honestly Unknown.
constexpr std::size_t kMaxSplitNodes = 4000;
constexpr std::size_t kMaxCondNodes = 20000;

TruthValue eval_with_split(CondPtr const& c, int depth, int& fuel) {
  if (fuel-- <= 0) return TruthValue::Unknown;
  TruthValue v = try_eval(c);
  if (v != TruthValue::Unknown || depth <= 0) return v;
  std::vector<TypePtr> candidates;
  split_candidates(c, candidates);
  for (auto const& u : candidates) {
    auto members = members_of(u);
    if (members.size() < 2) continue;
    TruthValue agreed = TruthValue::Unknown;
    bool unanimous = true;
    for (auto const& m : members) {
      auto vm = eval_with_split(replace_type(c, u, m), depth - 1, fuel);
      if (vm == TruthValue::Unknown || (agreed != TruthValue::Unknown && vm != agreed)) {
        unanimous = false;
        break;
      }
      agreed = vm;
    }
    if (unanimous && agreed != TruthValue::Unknown) return agreed;
  }
  return TruthValue::Unknown;
}

}  // namespace

std::pair<TypePtr, bool> unfold_type_once(TypePtr const& t) {
  bool changed = false;
  auto out = unfold_type(t, changed);
  return {std::move(out), changed};
}

std::pair<CondPtr, bool> unfold_cond_once(CondPtr const& c) {
  bool changed = false;
  auto out = unfold_cond(c, changed);
  return {std::move(out), changed};
}

TruthValue eval_cc(CondPtr const& c, int k) {
  CondPtr current = c;
  for (int round = 0;; ++round) {
    auto size = cond_size(current);
    if (size > kMaxCondNodes) return TruthValue::Unknown;
    TruthValue v;
    if (size > kMaxSplitNodes) {
      v = try_eval(current);
    } else {
      int fuel = kSplitFuel;
      v = eval_with_split(current, kSplitDepth, fuel);
    }
    if (v != TruthValue::Unknown || round >= k) return v;
    auto [next, changed] = unfold_cond_once(current);
    if (!changed) return TruthValue::Unknown;
    current = std::move(next);
  }
}

TruthValue entails(Interpretation const& interp, CondPtr const& c, int k) {
  return eval_cc(apply_interp(interp, c), k);
}

Verdict decide(ExprPtr const& e, TypeEnv const& env, int k) {
  auto typing = infer(env, e);
  auto truth = eval_cc(typing.crash, k);
  Verdict verdict;
  verdict.truth = truth;
  verdict.k = k;
  verdict.evidence = render_cond(typing.crash);
  switch (truth) {
    case TruthValue::True: verdict.kind = VerdictKind::DefiniteCrashOrDiverge; break;
    case TruthValue::False: verdict.kind = VerdictKind::NoCrashAtBound; break;
    case TruthValue::Unknown: verdict.kind = VerdictKind::Unknown; break;
  }
  return verdict;
}

namespace {

// All tuples over `pool` whose maximum level equals `want`, lexicographic by
// pool index.
void tuples_at(std::vector<std::pair<TypePtr, int>> const& pool, int arity, int want,
               std::vector<TypePtr>& tuple, int max_seen,
               std::vector<std::vector<TypePtr>>& out) {
  if (arity == 0) {
    if (max_seen == want) out.push_back(tuple);
    return;
  }
  for (auto const& [t, level] : pool) {
    tuple.push_back(t);
    tuples_at(pool, arity - 1, want, tuple, std::max(max_seen, level), out);
    tuple.pop_back();
  }
}

}  // namespace

std::vector<TypePtr> enumerate_ground_types(Alphabet const& alphabet, int max_depth) {
  std::vector<TypePtr> result;
  std::vector<std::pair<TypePtr, int>> pool;  // type with its depth
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<TypePtr> level;
    if (depth == 1) {
      for (auto const& ctor : alphabet.ctors) {
        if (ctor.arity == 0) level.push_back(ctor_type(ctor, {}));
      }
      level.push_back(int_type());
    } else {
      for (auto const& ctor : alphabet.ctors) {
        if (ctor.arity == 0) continue;
        std::vector<std::vector<TypePtr>> tuples;
        std::vector<TypePtr> tuple;
        tuples_at(pool, ctor.arity, depth - 1, tuple, 0, tuples);
        for (auto& args : tuples) level.push_back(ctor_type(ctor, std::move(args)));
      }
    }
    for (auto const& t : level) pool.emplace_back(t, depth);
    result.insert(result.end(), level.begin(), level.end());
  }
  return result;
}

std::vector<TypePtr> find_crashing_inputs(TypePtr const& fun, Alphabet const& alphabet,
                                          int max_depth, int k) {
  std::vector<TypePtr> witnesses;
  for (auto const& candidate : enumerate_ground_types(alphabet, max_depth)) {
    if (eval_cc(op_ccapp(fun, candidate), k) == TruthValue::True) {
      witnesses.push_back(candidate);
    }
  }
  return witnesses;
}

ExprPtr inhabit(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorType>) {
          std::vector<ExprPtr> args;
          args.reserve(node.args.size());
          for (auto const& a : node.args) args.push_back(inhabit(a));
          return mk_ctor(node.ctor, std::move(args));
        } else if constexpr (std::is_same_v<T, IntType>) {
          return mk_int(0);
        } else {
          throw std::logic_error("inhabit: ground constructor-tree types only");
        }
      },
      t->node);
}

bool fixpoint_probe(CondPtr const& c, int k1, int k2) {
  return eval_cc(c, k1) == eval_cc(c, k2);
}

}  // namespace crashlens
