#include "crashlens/infer.hpp"
#include "crashlens/solver.hpp"

#include <stdexcept>

namespace crashlens {

namespace {

// A rigid type is a finite constructor tree (constructors, int, bot, unions);
// only rigid-vs-rigid comparisons may refute subtyping outright.
bool is_rigid(TypePtr const& t) {
  return std::visit(
      [&](auto const& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorType>) {
          for (auto const& a : node.args) {
            if (!is_rigid(a)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, UnionType>) {
          return is_rigid(node.lhs) && is_rigid(node.rhs);
        } else {
          return std::is_same_v<T, IntType> || std::is_same_v<T, BotType>;
        }
      },
      t->node);
}

void flatten(TypePtr const& t, std::vector<TypePtr>& out) {
  if (auto const* u = std::get_if<UnionType>(&t->node)) {
    flatten(u->lhs, out);
    flatten(u->rhs, out);
  } else if (!std::holds_alternative<BotType>(t->node)) {
    out.push_back(t);
  }
}

// Exact inclusion between rigid trees.
bool rigid_included(TypePtr const& sub, TypePtr const& super);

bool rigid_member_included(TypePtr const& m, std::vector<TypePtr> const& supers) {
  for (auto const& s : supers) {
    if (std::holds_alternative<IntType>(m->node) && std::holds_alternative<IntType>(s->node)) {
      return true;
    }
    auto const* mc = std::get_if<CtorType>(&m->node);
    auto const* sc = std::get_if<CtorType>(&s->node);
    if (mc && sc && mc->ctor.name == sc->ctor.name && mc->args.size() == sc->args.size()) {
      bool all = true;
      for (std::size_t i = 0; i < mc->args.size(); ++i) {
        if (!rigid_included(mc->args[i], sc->args[i])) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
  }
  return false;
}

bool rigid_included(TypePtr const& sub, TypePtr const& super) {
  std::vector<TypePtr> subs;
  std::vector<TypePtr> supers;
  flatten(sub, subs);
  flatten(super, supers);
  for (auto const& m : subs) {
    if (!rigid_member_included(m, supers)) return false;
  }
  return true;
}

TruthValue optimistic_and(TruthValue a, TruthValue b) {
  if (a == TruthValue::True && b == TruthValue::True) return TruthValue::True;
  return TruthValue::Unknown;
}

// Does `lhs` entail `rhs`? Only cheaply recognizable implications count.
bool cond_implies(CondPtr const& lhs, CondPtr const& rhs) {
  if (std::holds_alternative<CondFalse>(lhs->node)) return true;
  if (std::holds_alternative<CondTrue>(rhs->node)) return true;
  return alpha_equal(lhs, rhs, 1);
}

// Union decomposition multiplies comparisons and every unfolding round can
// double both sides, so the walk is capped: once the visit budget or the
// unfolded size runs out the answer is honestly Unknown.
constexpr int kSubtypeFuel = 20000;
constexpr std::size_t kSubtypeMaxNodes = 6000;

TruthValue subtype_go(TypePtr const& sub, TypePtr const& super, int budget, int& fuel) {
  if (fuel-- <= 0) return TruthValue::Unknown;
  if (std::holds_alternative<BotType>(sub->node)) return TruthValue::True;
  if (alpha_equal(sub, super, budget > 0 ? 1 : 0)) return TruthValue::True;

  if (is_rigid(sub) && is_rigid(super)) {
    return rigid_included(sub, super) ? TruthValue::True : TruthValue::False;
  }

  if (std::holds_alternative<UnionType>(sub->node)) {
    std::vector<TypePtr> subs;
    flatten(sub, subs);
    TruthValue acc = TruthValue::True;
    for (auto const& m : subs) {
      acc = optimistic_and(acc, subtype_go(m, super, budget, fuel));
    }
    if (acc == TruthValue::True) return acc;
  } else if (std::holds_alternative<UnionType>(super->node)) {
    std::vector<TypePtr> supers;
    flatten(super, supers);
    for (auto const& s : supers) {
      if (subtype_go(sub, s, budget, fuel) == TruthValue::True) return TruthValue::True;
    }
  } else {
    auto const* subc = std::get_if<CtorType>(&sub->node);
    auto const* supc = std::get_if<CtorType>(&super->node);
    if (subc && supc && subc->ctor.name == supc->ctor.name &&
        subc->args.size() == supc->args.size()) {
      TruthValue acc = TruthValue::True;
      for (std::size_t i = 0; i < subc->args.size(); ++i) {
        acc = optimistic_and(acc, subtype_go(subc->args[i], supc->args[i], budget, fuel));
      }
      if (acc == TruthValue::True) return acc;
    }
    auto const* subf = std::get_if<FunType>(&sub->node);
    auto const* supf = std::get_if<FunType>(&super->node);
    if (subf && supf) {
      // Rename the supertype's binders to the subtype's, then compare bodies:
      // return types covariantly, crash conditions by implication (a caller
      // relying on the supertype's crash description must not miss crashes
      // of the subtype).
      TypeSubst rename;
      if (!(supf->arg_var == subf->arg_var)) rename[supf->arg_var] = tvar(subf->arg_var);
      if (!(supf->self_var == subf->self_var)) rename[supf->self_var] = tvar(subf->self_var);
      auto sup_ret = subst_tvar(supf->ret, rename);
      auto sup_crash = subst_tvar(supf->crash, rename);
      if (subtype_go(subf->ret, sup_ret, budget, fuel) == TruthValue::True &&
          cond_implies(subf->crash, sup_crash)) {
        return TruthValue::True;
      }
    }
  }

  if (budget > 0) {
    auto [sub2, ch1] = unfold_type_once(sub);
    auto [super2, ch2] = unfold_type_once(super);
    if ((ch1 || ch2) && type_size(sub2) + type_size(super2) <= kSubtypeMaxNodes) {
      return subtype_go(sub2, super2, budget - 1, fuel);
    }
  }
  return TruthValue::Unknown;
}

}  // namespace

TruthValue subtype(TypePtr const& sub, TypePtr const& super, int budget) {
  auto nsub = normalize(sub);
  auto nsuper = normalize(super);
  if (type_size(nsub) + type_size(nsuper) > kSubtypeMaxNodes) return TruthValue::Unknown;
  int fuel = kSubtypeFuel;
  return subtype_go(nsub, nsuper, budget, fuel);
}

}  // namespace crashlens
