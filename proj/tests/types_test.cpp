#include "crashlens/types.hpp"

#include <gtest/gtest.h>

#include "crashlens/infer.hpp"
#include "crashlens/solver.hpp"
#include "crashlens/testkit.hpp"
#include "test_support.hpp"

namespace crashlens {
namespace {

using test_support::make_length_crash;
using test_support::make_length_type;

CtorName const kNil{"Nil", 0};
CtorName const kZero{"Zero", 0};
CtorName const kSucc{"Succ", 1};
CtorName const kCons{"Cons", 2};

TypePtr raw_union(TypePtr lhs, TypePtr rhs) {
  return std::make_shared<const Type>(Type{UnionType{std::move(lhs), std::move(rhs)}});
}

TypePtr identity_fun() {
  TypeVarId a{VarKind::Arg, 0};
  return fun_type(a, {VarKind::Self, 0}, tvar(a), cond_false());
}

TEST(SmartCtors, UnionDropsBot) {
  EXPECT_TRUE(structural_equal(union_type(bot_type(), int_type()), int_type()));
  EXPECT_TRUE(structural_equal(union_type(int_type(), bot_type()), int_type()));
}

TEST(SmartCtors, EmptyComponentCollapsesCtor) {
  EXPECT_TRUE(structural_equal(ctor_type(kCons, {int_type(), bot_type()}), bot_type()));
  EXPECT_FALSE(structural_equal(ctor_type(kCons, {int_type(), int_type()}), bot_type()));
}

TEST(SmartCtors, CondUnitLaws) {
  auto c = has_ctor(kNil, tvar({VarKind::Arg, 0}));
  EXPECT_TRUE(structural_equal(cond_and(cond_true(), c), c));
  EXPECT_TRUE(structural_equal(cond_and(c, cond_false()), cond_false()));
  EXPECT_TRUE(structural_equal(cond_or(cond_false(), c), c));
  EXPECT_TRUE(structural_equal(cond_or(c, cond_true()), cond_true()));
}

TEST(SmartCtors, OrFactorsCommonConjunct) {
  auto hole = tvar({VarKind::Arg, 0});
  auto a = has_ctor(kNil, hole);
  auto b = has_ctor(kCons, hole);
  auto c = has_no_ctor(kZero, hole);
  EXPECT_TRUE(structural_equal(cond_or(cond_and(a, b), cond_and(a, c)),
                               cond_and(a, cond_or(b, c))));
}

TEST(SmartCtors, NotFunCollapsesOnFunctions) {
  EXPECT_TRUE(structural_equal(not_fun(identity_fun()), cond_false()));
  EXPECT_TRUE(structural_equal(not_fun(tvar({VarKind::Self, 3})), cond_false()));
  EXPECT_TRUE(std::holds_alternative<CondNotFun>(not_fun(int_type())->node));
  EXPECT_TRUE(std::holds_alternative<CondNotFun>(not_fun(tvar({VarKind::Arg, 0}))->node));
}

TEST(SmartCtors, TypeAppReducesOnlyProvablyTerminatingBetas) {
  // Identity: self unused, argument function-free, so it reduces immediately.
  EXPECT_TRUE(structural_equal(type_app(identity_fun(), int_type()), int_type()));
  // Variable heads and recursive functions stay symbolic.
  EXPECT_TRUE(std::holds_alternative<TypeApp>(
      type_app(tvar({VarKind::Arg, 0}), int_type())->node));
  EXPECT_TRUE(std::holds_alternative<TypeApp>(
      type_app(make_length_type(), ctor_type(kNil, {}))->node));
}

TEST(Ops, ApplicationGoldens) {
  auto tau_len = make_length_type();
  EXPECT_TRUE(structural_equal(op_tapp(tau_len, ctor_type(kNil, {})), ctor_type(kZero, {})));
  // A non-list argument also maps to Zero at the type level: the Succ branch
  // collapses through the empty projection, only the crash condition tells
  // the two apart.
  EXPECT_TRUE(structural_equal(op_tapp(tau_len, ctor_type(kZero, {})), ctor_type(kZero, {})));
  EXPECT_TRUE(structural_equal(op_tapp(tau_len, bot_type()), bot_type()));
  EXPECT_TRUE(structural_equal(op_tapp(identity_fun(), int_type()), int_type()));
  EXPECT_TRUE(structural_equal(op_tapp(int_type(), int_type()), bot_type()));
  EXPECT_TRUE(structural_equal(op_ccapp(identity_fun(), int_type()), cond_false()));
  EXPECT_TRUE(structural_equal(op_ccapp(int_type(), int_type()), cond_true()));
}

TEST(Ops, ProjectionGoldens) {
  auto pair = ctor_type(kCons, {int_type(), ctor_type(kNil, {})});
  EXPECT_TRUE(structural_equal(op_proj(pair, kCons, 2), ctor_type(kNil, {})));
  EXPECT_TRUE(structural_equal(op_proj(int_type(), kCons, 1), bot_type()));
  EXPECT_TRUE(structural_equal(op_proj(raw_union(pair, int_type()), kCons, 1), int_type()));
  // Distribution drops the branch whose projection is empty.
  auto raw_pair =
      std::make_shared<const Type>(Type{CtorType{kCons, {int_type(), bot_type()}}});
  EXPECT_TRUE(
      structural_equal(op_proj(raw_union(raw_pair, int_type()), kCons, 1), int_type()));
}

TEST(Ops, CrashApplicationSubstitutesSelf) {
  auto tau_len = make_length_type();
  TypeVarId beta{VarKind::Arg, 7};
  auto tail = type_proj(tvar(beta), kCons, 2);
  auto expected = cond_and(
      has_no_ctor(kNil, tvar(beta)),
      cond_or(cond_and(has_ctor(kCons, tvar(beta)), cond_app(tau_len, tail)),
              has_no_ctor(kCons, tvar(beta))));
  EXPECT_TRUE(structural_equal(op_ccapp(tau_len, tvar(beta)), expected));
}

TEST(Subst, Examples) {
  TypeVarId hole{VarKind::Arg, 0};
  EXPECT_TRUE(structural_equal(subst_tvar(tvar(hole), hole, int_type()), int_type()));
  // The Fun binder shadows its own argument variable.
  auto fun = fun_type(hole, {VarKind::Self, 0}, tvar(hole), cond_false());
  EXPECT_TRUE(structural_equal(subst_tvar(fun, hole, int_type()), fun));
  auto pred = has_ctor(kNil, tvar(hole));
  EXPECT_TRUE(structural_equal(subst_tvar(pred, hole, ctor_type(kNil, {})),
                               has_ctor(kNil, ctor_type(kNil, {}))));
}

TEST(Subst, RenamesCollidingBinders) {
  TypeVarId a1{VarKind::Arg, 1};
  TypeVarId a2{VarKind::Arg, 2};
  auto fun = fun_type(a1, {VarKind::Self, 1}, union_type(tvar(a1), tvar(a2)), cond_false());
  auto out = subst_tvar(fun, a2, ctor_type(kSucc, {tvar(a1)}));
  EXPECT_EQ(render_type(out), "[a3]a3 | Succ(a1) & ff");
  EXPECT_EQ(free_tvars(out), (std::set<TypeVarId>{a1}));
  TypeVarId b{VarKind::Arg, 9};
  auto expected =
      fun_type(b, {VarKind::Self, 9},
               union_type(tvar(b), ctor_type(kSucc, {tvar(a1)})), cond_false());
  EXPECT_TRUE(alpha_equal(out, expected));
}

TEST(Subst, FreeVarAccounting) {
  GenConfig cfg;
  Rng rng{4};
  TypeVarId hole{VarKind::Arg, 50};
  auto with_hole = union_type(ctor_type(kSucc, {tvar(hole)}), int_type());
  for (int i = 0; i < 200; ++i) {
    auto ground = gen_ground_type(cfg, rng, 3);
    auto out = subst_tvar(with_hole, hole, ground);
    EXPECT_TRUE(free_tvars(out).empty()) << render_type(out);
  }
}

TEST(FreeTvars, Examples) {
  auto tau_len = make_length_type();
  EXPECT_TRUE(free_tvars(tau_len).empty());
  EXPECT_EQ(free_tvars(make_length_crash({VarKind::Arg, 0}, {VarKind::Self, 0})),
            (std::set<TypeVarId>{{VarKind::Arg, 0}, {VarKind::Self, 0}}));
}

TEST(Normalize, CleansRawNodes) {
  EXPECT_TRUE(structural_equal(normalize(raw_union(bot_type(), int_type())), int_type()));
  EXPECT_TRUE(structural_equal(normalize(raw_union(int_type(), int_type())), int_type()));
  auto nested = raw_union(raw_union(int_type(), bot_type()), raw_union(int_type(), int_type()));
  EXPECT_TRUE(structural_equal(normalize(nested), int_type()));
  auto app = std::make_shared<const Type>(Type{TypeApp{identity_fun(), int_type()}});
  EXPECT_TRUE(structural_equal(normalize(app), int_type()));
}

TEST(Normalize, AlreadyNormalFixpoints) {
  auto tau_len = make_length_type();
  EXPECT_TRUE(structural_equal(normalize(tau_len), tau_len));
  auto c_len = make_length_crash({VarKind::Arg, 0}, {VarKind::Self, 0});
  EXPECT_TRUE(structural_equal(normalize(c_len), c_len));
}

TEST(AlphaEqual, BindersAndUnions) {
  TypeVarId a{VarKind::Arg, 0};
  TypeVarId b{VarKind::Arg, 7};
  auto fa = fun_type(a, {VarKind::Self, 0}, tvar(a), cond_false());
  auto fb = fun_type(b, {VarKind::Self, 4}, tvar(b), cond_false());
  EXPECT_TRUE(alpha_equal(fa, fb));
  EXPECT_FALSE(structural_equal(fa, fb));
  EXPECT_TRUE(alpha_equal(union_type(int_type(), ctor_type(kZero, {})),
                          union_type(ctor_type(kZero, {}), int_type())));
  EXPECT_FALSE(alpha_equal(int_type(), bot_type()));
  EXPECT_FALSE(alpha_equal(fa, fun_type(b, {VarKind::Self, 4}, int_type(), cond_false())));
}

TEST(AlphaEqual, BudgetUnfoldsPendingApplications) {
  auto pending = type_app(make_length_type(), ctor_type(kNil, {}));
  EXPECT_FALSE(alpha_equal(pending, ctor_type(kZero, {}), 0));
  EXPECT_TRUE(alpha_equal(pending, ctor_type(kZero, {}), 2));
}

TEST(AlphaEqual, IsAnEquivalenceOnRandomTypes) {
  GenConfig cfg;
  Rng rng{12};
  for (int i = 0; i < 500; ++i) {
    auto t = gen_ground_type(cfg, rng, 3);
    auto u = gen_ground_type(cfg, rng, 3);
    EXPECT_TRUE(alpha_equal(t, t));
    EXPECT_EQ(alpha_equal(t, u), alpha_equal(u, t)) << render_type(t) << " / " << render_type(u);
  }
}

TEST(Render, Goldens) {
  EXPECT_EQ(render_tvar({VarKind::Arg, 0}), "a0");
  EXPECT_EQ(render_tvar({VarKind::Self, 0}), "X0");
  EXPECT_EQ(render_type(make_length_type()),
            "[a0]Succ(X0<Cons.2(a0)>) | Zero"
            " & Nil notin a0 /\\ (Cons in a0 /\\ cc(X0, Cons.2(a0)) \\/ Cons notin a0)");
  EXPECT_EQ(render_cond(cond_true()), "tt");
  EXPECT_EQ(render_cond(cond_false()), "ff");
  EXPECT_EQ(render_type(bot_type()), "bot");
  EXPECT_EQ(render_type(union_type(int_type(), ctor_type(kZero, {}))), "int | Zero");
  EXPECT_EQ(render_cond(not_fun(int_type())), "nofun int");
}

TEST(Sizes, CountNodes) {
  EXPECT_EQ(type_size(int_type()), 1u);
  EXPECT_EQ(type_size(union_type(int_type(), ctor_type(kZero, {}))), 3u);
  EXPECT_EQ(cond_size(cond_true()), 1u);
  EXPECT_GT(type_size(make_length_type()), 10u);
}

TEST(ContainsFun, Examples) {
  EXPECT_TRUE(contains_fun(make_length_type()));
  EXPECT_TRUE(contains_fun(ctor_type(kSucc, {identity_fun()})));
  EXPECT_FALSE(contains_fun(union_type(int_type(), ctor_type(kZero, {}))));
}

TEST(TruthValue, ToString) {
  EXPECT_EQ(to_string(TruthValue::True), "true");
  EXPECT_EQ(to_string(TruthValue::False), "false");
  EXPECT_EQ(to_string(TruthValue::Unknown), "unknown");
}

// --- Substitution/operator commutation. Substituting a ground type first can
// collapse empty types earlier than substituting into the symbolic result, so
// the two orders agree exactly only when no pending application/projection is
// involved; in general substitute-first refines substitute-later and the two
// crash conditions never reach contradictory verdicts.

class CommutationFixture : public ::testing::Test {
 protected:
  TypeVarId hole{VarKind::Arg, 50};
  TypePtr tau_len = make_length_type();
  GenConfig cfg;
  Rng rng{99};

  TypePtr plain_type(int depth) {
    switch (rng.below(6)) {
      case 0: return tvar(hole);
      case 1: return int_type();
      case 2: return ctor_type(kZero, {});
      case 3:
        if (depth > 0) return ctor_type(kCons, {plain_type(depth - 1), plain_type(depth - 1)});
        return tvar(hole);
      case 4:
        if (depth > 0) return union_type(plain_type(depth - 1), plain_type(depth - 1));
        return int_type();
      default: return tau_len;
    }
  }

  TypePtr symbolic_type(int depth) {
    switch (rng.below(8)) {
      case 6:
        if (depth > 0) return type_app(symbolic_type(depth - 1), symbolic_type(depth - 1));
        return tvar(hole);
      case 7:
        if (depth > 0) {
          return type_proj(symbolic_type(depth - 1), kCons, 1 + static_cast<int>(rng.below(2)));
        }
        return ctor_type(kNil, {});
      default: return plain_type(depth);
    }
  }
};

TEST_F(CommutationFixture, ExactOnPlainTypes) {
  for (int i = 0; i < 2000; ++i) {
    auto t1 = plain_type(2);
    auto t2 = plain_type(2);
    auto repl = gen_ground_type(cfg, rng, 2);
    auto subst_later = subst_tvar(op_tapp(t1, t2), hole, repl);
    auto subst_first = op_tapp(subst_tvar(t1, hole, repl), subst_tvar(t2, hole, repl));
    EXPECT_TRUE(alpha_equal(subst_later, subst_first, 4))
        << render_type(t1) << " applied to " << render_type(t2) << " under "
        << render_type(repl);
  }
}

TEST_F(CommutationFixture, SubstituteFirstRefinesSubstituteLater) {
  for (int i = 0; i < 2000; ++i) {
    auto t1 = symbolic_type(2);
    auto t2 = symbolic_type(2);
    auto repl = gen_ground_type(cfg, rng, 2);
    auto app_later = subst_tvar(op_tapp(t1, t2), hole, repl);
    auto app_first = op_tapp(subst_tvar(t1, hole, repl), subst_tvar(t2, hole, repl));
    EXPECT_NE(subtype(app_first, app_later, 5), TruthValue::False)
        << render_type(app_first) << " vs " << render_type(app_later);
    auto proj_later = subst_tvar(op_proj(t1, kCons, 2), hole, repl);
    auto proj_first = op_proj(subst_tvar(t1, hole, repl), kCons, 2);
    EXPECT_NE(subtype(proj_first, proj_later, 5), TruthValue::False)
        << render_type(proj_first) << " vs " << render_type(proj_later);
  }
}

TEST_F(CommutationFixture, CrashConditionsNeverContradict) {
  for (int i = 0; i < 2000; ++i) {
    auto t1 = symbolic_type(2);
    auto t2 = symbolic_type(2);
    auto repl = gen_ground_type(cfg, rng, 2);
    auto cc_later = subst_tvar(op_ccapp(t1, t2), hole, repl);
    auto cc_first = op_ccapp(subst_tvar(t1, hole, repl), subst_tvar(t2, hole, repl));
    for (int k = 0; k <= 3; ++k) {
      auto a = eval_cc(cc_later, k);
      auto b = eval_cc(cc_first, k);
      bool contradictory = (a == TruthValue::True && b == TruthValue::False) ||
                           (a == TruthValue::False && b == TruthValue::True);
      EXPECT_FALSE(contradictory) << "k=" << k << ": " << render_cond(cc_later) << " vs "
                                  << render_cond(cc_first);
    }
  }
}

}  // namespace
}  // namespace crashlens
