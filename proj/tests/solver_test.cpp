#include "crashlens/solver.hpp"

#include <gtest/gtest.h>

#include "crashlens/eval.hpp"
#include "crashlens/printer.hpp"
#include "crashlens/testkit.hpp"
#include "test_support.hpp"

namespace crashlens {
namespace {

using test_support::make_length_crash;
using test_support::make_length_type;
using test_support::parse_corpus;

CtorName const kNil{"Nil", 0};
CtorName const kZero{"Zero", 0};
CtorName const kSucc{"Succ", 1};
CtorName const kCons{"Cons", 2};

Alphabet list_alphabet() {
  Alphabet alphabet;
  alphabet.record("Nil", 0);
  alphabet.record("Zero", 0);
  alphabet.record("Succ", 1);
  alphabet.record("Cons", 2);
  return alphabet;
}

std::vector<std::string> rendered(std::vector<TypePtr> const& types) {
  std::vector<std::string> out;
  out.reserve(types.size());
  for (auto const& t : types) out.push_back(render_type(t));
  return out;
}

TEST(ApplyInterp, SubstitutesFreeVarsOnly) {
  TypeVarId a{VarKind::Arg, 0};
  Interpretation interp{{a, int_type()}};
  EXPECT_TRUE(structural_equal(apply_interp(interp, tvar(a)), int_type()));
  auto fun = fun_type(a, {VarKind::Self, 0}, tvar(a), cond_false());
  EXPECT_TRUE(structural_equal(apply_interp(interp, fun), fun));
  EXPECT_TRUE(structural_equal(apply_interp({}, tvar(a)), tvar(a)));
}

TEST(Unfold, OneParallelRound) {
  auto tau_len = make_length_type();
  auto pending = type_app(tau_len, ctor_type(kNil, {}));
  auto [unfolded, changed] = unfold_type_once(pending);
  EXPECT_TRUE(changed);
  EXPECT_TRUE(structural_equal(normalize(unfolded), ctor_type(kZero, {})));
  auto [same, changed_again] = unfold_type_once(tvar({VarKind::Arg, 0}));
  EXPECT_FALSE(changed_again);
  EXPECT_TRUE(structural_equal(same, tvar({VarKind::Arg, 0})));
  auto [cond, cond_changed] = unfold_cond_once(cond_app(tau_len, ctor_type(kZero, {})));
  EXPECT_TRUE(cond_changed);
  EXPECT_EQ(eval_cc(cond, 1), TruthValue::True);
}

TEST(EvalCc, GroundVerdicts) {
  EXPECT_EQ(eval_cc(cond_true(), 0), TruthValue::True);
  EXPECT_EQ(eval_cc(cond_false(), 0), TruthValue::False);
  EXPECT_EQ(eval_cc(has_ctor(kNil, ctor_type(kNil, {})), 0), TruthValue::True);
  EXPECT_EQ(eval_cc(has_ctor(kNil, ctor_type(kZero, {})), 0), TruthValue::False);
  EXPECT_EQ(eval_cc(has_ctor(kNil, tvar({VarKind::Arg, 0})), 0), TruthValue::Unknown);
  EXPECT_EQ(eval_cc(not_fun(int_type()), 0), TruthValue::True);
  EXPECT_EQ(eval_cc(not_fun(make_length_type()), 0), TruthValue::False);
}

TEST(EvalCc, DefiniteReadingsOnUnions) {
  // On a union every member must agree before a predicate resolves.
  auto mixed = union_type(ctor_type(kNil, {}), ctor_type(kZero, {}));
  EXPECT_EQ(eval_cc(has_ctor(kNil, mixed), 0), TruthValue::Unknown);
  EXPECT_EQ(eval_cc(has_ctor(kCons, mixed), 0), TruthValue::False);
  EXPECT_EQ(eval_cc(has_no_ctor(kCons, mixed), 0), TruthValue::True);
  EXPECT_EQ(eval_cc(not_fun(union_type(int_type(), make_length_type())), 0),
            TruthValue::Unknown);
}

TEST(EvalCc, LengthApplications) {
  auto tau_len = make_length_type();
  EXPECT_EQ(eval_cc(op_ccapp(tau_len, ctor_type(kZero, {})), 2), TruthValue::True);
  EXPECT_EQ(eval_cc(op_ccapp(tau_len, ctor_type(kNil, {})), 2), TruthValue::False);
  auto two_list =
      ctor_type(kCons, {ctor_type(kZero, {}),
                        ctor_type(kCons, {ctor_type(kZero, {}), ctor_type(kNil, {})})});
  auto cc = op_ccapp(tau_len, two_list);
  EXPECT_EQ(eval_cc(cc, 0), TruthValue::Unknown);
  EXPECT_EQ(eval_cc(cc, 1), TruthValue::Unknown);
  EXPECT_EQ(eval_cc(cc, 2), TruthValue::False);
  EXPECT_EQ(eval_cc(cc, 3), TruthValue::False);
}

TEST(EvalCc, SupervaluationSplitsUnions) {
  // Both members crash on Nil, so the split yields a unanimous True even
  // though neither branch dominates syntactically.
  TypeVarId a1{VarKind::Arg, 1};
  TypeVarId a2{VarKind::Arg, 2};
  auto f1 = fun_type(a1, {VarKind::Self, 1}, int_type(), cond_true());
  auto f2 = fun_type(a2, {VarKind::Self, 2}, ctor_type(kNil, {}), cond_true());
  auto both = cond_app(union_type(f1, f2), ctor_type(kNil, {}));
  EXPECT_EQ(eval_cc(both, 0), TruthValue::True);
  // A function member and a non-function member still agree: applying the
  // non-function crashes outright.
  auto mixed = cond_app(union_type(f1, ctor_type(kZero, {})), ctor_type(kNil, {}));
  EXPECT_EQ(eval_cc(mixed, 1), TruthValue::True);
  // Members that disagree stay Unknown.
  auto safe = fun_type(a1, {VarKind::Self, 1}, int_type(), cond_false());
  auto split = cond_app(union_type(safe, ctor_type(kZero, {})), ctor_type(kNil, {}));
  EXPECT_EQ(eval_cc(split, 1), TruthValue::Unknown);
}

TEST(EvalCc, KleeneConnectives) {
  GenConfig cfg;
  Rng rng{5};
  auto ground_cond = [&](TypePtr const& t) {
    switch (rng.below(3)) {
      case 0: return has_ctor(kCons, t);
      case 1: return has_no_ctor(kCons, t);
      default: return not_fun(t);
    }
  };
  for (int i = 0; i < 500; ++i) {
    auto t1 = gen_ground_type(cfg, rng, 3);
    auto t2 = gen_ground_type(cfg, rng, 3);
    auto c1 = ground_cond(t1);
    auto c2 = ground_cond(t2);
    EXPECT_EQ(eval_cc(cond_and(c1, c2), 0), eval_cc(cond_and(c2, c1), 0));
    EXPECT_EQ(eval_cc(cond_or(c1, c2), 0), eval_cc(cond_or(c2, c1), 0));
    // has_no_ctor is the pointwise negation of has_ctor on ground types.
    auto pos = eval_cc(has_ctor(kSucc, t1), 0);
    auto neg = eval_cc(has_no_ctor(kSucc, t1), 0);
    EXPECT_EQ(pos == TruthValue::True, neg == TruthValue::False) << render_type(t1);
    EXPECT_EQ(pos == TruthValue::False, neg == TruthValue::True) << render_type(t1);
  }
}

TEST(Entails, Examples) {
  auto c_len = make_length_crash({VarKind::Arg, 0}, {VarKind::Self, 0});
  Interpretation crash_interp{{{VarKind::Arg, 0}, ctor_type(kZero, {})},
                              {{VarKind::Self, 0}, make_length_type()}};
  EXPECT_EQ(entails(crash_interp, c_len, 2), TruthValue::True);
  Interpretation safe_interp{{{VarKind::Arg, 0}, ctor_type(kNil, {})},
                             {{VarKind::Self, 0}, make_length_type()}};
  EXPECT_EQ(entails(safe_interp, c_len, 2), TruthValue::False);
  EXPECT_EQ(entails({}, cond_false(), 3), TruthValue::False);
  TypeVarId a{VarKind::Arg, 0};
  Interpretation fun_interp{{a, make_length_type()}};
  EXPECT_EQ(entails(fun_interp, not_fun(tvar(a)), 0), TruthValue::False);
}

TEST(Decide, Verdicts) {
  auto crash = decide(mk_app(mk_int(5), mk_int(3)), {}, 0);
  EXPECT_EQ(crash.kind, VerdictKind::DefiniteCrashOrDiverge);
  EXPECT_EQ(crash.truth, TruthValue::True);
  EXPECT_EQ(crash.k, 0);
  auto safe = decide(mk_int(7), {}, 0);
  EXPECT_EQ(safe.kind, VerdictKind::NoCrashAtBound);
  EXPECT_EQ(safe.truth, TruthValue::False);
  auto program = parse_corpus("length.lc");
  auto applied = mk_app(program.defs[0].second, mk_ctor(kZero, {}));
  auto verdict = decide(applied, {}, 2);
  EXPECT_EQ(verdict.kind, VerdictKind::DefiniteCrashOrDiverge);
  EXPECT_FALSE(verdict.evidence.empty());
}

TEST(Decide, DivergenceSatisfiesACrashVerdict) {
  // The verdict promises crash-or-diverge: here the outer application is
  // doomed but the looping argument exhausts fuel first.
  auto loop =
      mk_app(mk_rec("g", "x", mk_app(mk_var("g"), mk_var("x"))), mk_ctor(kNil, {}));
  auto doomed = mk_app(mk_int(5), loop);
  auto verdict = decide(doomed, {}, 0);
  EXPECT_EQ(verdict.kind, VerdictKind::DefiniteCrashOrDiverge);
  EvalConfig config;
  config.fuel = 200;
  EXPECT_EQ(evaluate(doomed, config).status, EvalStatus::FuelExhausted);
}

TEST(Decide, ToStringGoldens) {
  EXPECT_EQ(to_string(VerdictKind::DefiniteCrashOrDiverge), "crash");
  EXPECT_EQ(to_string(VerdictKind::NoCrashAtBound), "no_crash_at_bound");
  EXPECT_EQ(to_string(VerdictKind::Unknown), "unknown");
}

TEST(Enumerate, DepthOneGolden) {
  auto types = enumerate_ground_types(list_alphabet(), 1);
  EXPECT_EQ(rendered(types), (std::vector<std::string>{"Nil", "Zero", "int"}));
}

TEST(Enumerate, DepthTwoGolden) {
  auto types = enumerate_ground_types(list_alphabet(), 2);
  EXPECT_EQ(rendered(types),
            (std::vector<std::string>{
                "Nil", "Zero", "int", "Succ(Nil)", "Succ(Zero)", "Succ(int)", "Cons(Nil, Nil)",
                "Cons(Nil, Zero)", "Cons(Nil, int)", "Cons(Zero, Nil)", "Cons(Zero, Zero)",
                "Cons(Zero, int)", "Cons(int, Nil)", "Cons(int, Zero)", "Cons(int, int)"}));
}

TEST(Witnesses, LengthDepthOne) {
  auto witnesses = find_crashing_inputs(make_length_type(), list_alphabet(), 1, 2);
  EXPECT_EQ(rendered(witnesses), (std::vector<std::string>{"Zero", "int"}));
}

TEST(Witnesses, LengthDepthTwoExcludesLists) {
  auto witnesses = find_crashing_inputs(make_length_type(), list_alphabet(), 2, 3);
  EXPECT_EQ(rendered(witnesses),
            (std::vector<std::string>{"Zero", "int", "Succ(Nil)", "Succ(Zero)", "Succ(int)",
                                      "Cons(Nil, Zero)", "Cons(Nil, int)", "Cons(Zero, Zero)",
                                      "Cons(Zero, int)", "Cons(int, Zero)", "Cons(int, int)"}));
}

TEST(Witnesses, CrashFreeFunctionHasNone) {
  TypeVarId a{VarKind::Arg, 0};
  auto safe = fun_type(a, {VarKind::Self, 0}, tvar(a), cond_false());
  EXPECT_TRUE(find_crashing_inputs(safe, list_alphabet(), 2, 3).empty());
}

TEST(Inhabit, BuildsValues) {
  EXPECT_TRUE(alpha_equal_expr(inhabit(int_type()), mk_int(0)));
  auto t = ctor_type(kCons, {ctor_type(kZero, {}), int_type()});
  EXPECT_TRUE(alpha_equal_expr(inhabit(t), mk_ctor(kCons, {mk_ctor(kZero, {}), mk_int(0)})));
  EXPECT_THROW((void)inhabit(make_length_type()), std::logic_error);
}

TEST(Inhabit, WitnessesActuallyCrash) {
  auto program = parse_corpus("length.lc");
  auto len = program.defs[0].second;
  for (auto const& t : find_crashing_inputs(make_length_type(), list_alphabet(), 2, 3)) {
    auto outcome = evaluate(mk_app(len, inhabit(t)));
    EXPECT_EQ(outcome.status, EvalStatus::Error) << render_type(t);
  }
}

TEST(FixpointProbe, DetectsStabilization) {
  EXPECT_TRUE(fixpoint_probe(cond_true(), 0, 5));
  auto two_list =
      ctor_type(kCons, {ctor_type(kZero, {}),
                        ctor_type(kCons, {ctor_type(kZero, {}), ctor_type(kNil, {})})});
  // Still Unknown at k=1 but resolved at k=5, so the probe reports movement.
  EXPECT_FALSE(fixpoint_probe(op_ccapp(make_length_type(), two_list), 1, 5));
  EXPECT_TRUE(fixpoint_probe(op_ccapp(make_length_type(), two_list), 2, 5));
}

TEST(FixpointProbe, SelfReproducingGenerator) {
  auto program = parse_corpus("generator.lc");
  ASSERT_TRUE(program.main != nullptr);
  auto typing = infer({}, program.main);
  EXPECT_TRUE(fixpoint_probe(typing.crash, 1, 2));
  EXPECT_EQ(eval_cc(typing.crash, 0), TruthValue::Unknown);
  EXPECT_EQ(eval_cc(typing.crash, 5), TruthValue::Unknown);
}

TEST(EvalCc, UnknownStaysSoundOnDivergencelikeConditions) {
  // This program evaluates to a value, so no k may ever report True.
  Alphabet alphabet = list_alphabet();
  auto e = parse_expr_text("(match Zero { Nil -> 0 | Zero -> rec f2(x1) -> x1 }) Nil", &alphabet);
  auto typing = infer({}, e);
  for (int k = 0; k <= 6; ++k) {
    EXPECT_EQ(eval_cc(typing.crash, k), TruthValue::Unknown) << "k=" << k;
  }
  EXPECT_EQ(evaluate(e).status, EvalStatus::Value);
}

TEST(EvalCc, MonotoneInK) {
  GenConfig cfg;
  cfg.seed = 14;
  Rng rng{cfg.seed};
  for (int i = 0; i < 1500; ++i) {
    auto e = gen_expr(cfg, rng);
    auto typing = infer({}, e);
    auto resolved = TruthValue::Unknown;
    for (int k = 0; k <= 5; ++k) {
      auto v = eval_cc(typing.crash, k);
      if (resolved == TruthValue::Unknown) {
        resolved = v;
      } else {
        EXPECT_EQ(v, resolved) << print_expr(e) << " at k=" << k;
      }
    }
  }
}

}  // namespace
}  // namespace crashlens
