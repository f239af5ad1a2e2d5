#include "crashlens/testkit.hpp"

#include <gtest/gtest.h>

#include <map>

#include "crashlens/printer.hpp"

namespace crashlens {
namespace {

void count_variants(ExprPtr const& e, std::map<std::string, int>& counts) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          ++counts["int"];
        } else if constexpr (std::is_same_v<T, Var>) {
          ++counts["var"];
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          ++counts["ctor"];
          for (auto const& a : node.args) count_variants(a, counts);
        } else if constexpr (std::is_same_v<T, App>) {
          ++counts["app"];
          count_variants(node.fn, counts);
          count_variants(node.arg, counts);
        } else if constexpr (std::is_same_v<T, Match>) {
          ++counts["match"];
          count_variants(node.scrutinee, counts);
          for (auto const& arm : node.arms) count_variants(arm.body, counts);
        } else if constexpr (std::is_same_v<T, Rec>) {
          ++counts["rec"];
          count_variants(node.body, counts);
        } else {
          ++counts["err"];
        }
      },
      e->node);
}

// Structural well-formedness the generator promises: declared arities, arms
// with distinct constructors, distinct rec binders.
void expect_well_formed(ExprPtr const& e, GenConfig const& cfg) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          EXPECT_GE(node.value, cfg.int_range.first);
          EXPECT_LE(node.value, cfg.int_range.second);
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          EXPECT_EQ(static_cast<int>(node.args.size()), node.ctor.arity);
          bool known = false;
          for (auto const& c : cfg.alphabet) known = known || c == node.ctor;
          EXPECT_TRUE(known) << node.ctor.name;
          for (auto const& a : node.args) expect_well_formed(a, cfg);
        } else if constexpr (std::is_same_v<T, App>) {
          expect_well_formed(node.fn, cfg);
          expect_well_formed(node.arg, cfg);
        } else if constexpr (std::is_same_v<T, Match>) {
          expect_well_formed(node.scrutinee, cfg);
          std::set<std::string> seen;
          for (auto const& arm : node.arms) {
            EXPECT_TRUE(seen.insert(arm.ctor.name).second) << arm.ctor.name;
            EXPECT_EQ(static_cast<int>(arm.binders.size()), arm.ctor.arity);
            expect_well_formed(arm.body, cfg);
          }
        } else if constexpr (std::is_same_v<T, Rec>) {
          EXPECT_NE(node.fn_name, node.arg_name);
          expect_well_formed(node.body, cfg);
        }
      },
      e->node);
}

int type_depth(TypePtr const& t) {
  if (auto const* c = std::get_if<CtorType>(&t->node)) {
    int deepest = 0;
    for (auto const& a : c->args) deepest = std::max(deepest, type_depth(a));
    return 1 + deepest;
  }
  return 1;
}

TEST(Rng, DeterministicAndBounded) {
  Rng a{42};
  Rng b{42};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c{43};
  EXPECT_NE(Rng{42}.next(), c.next());
  Rng d{7};
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(d.below(13), 13u);
    auto v = d.in_range(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
  }
}

TEST(GenExpr, DeterministicPerSeed) {
  GenConfig cfg;
  cfg.seed = 77;
  EXPECT_TRUE(alpha_equal_expr(gen_expr(cfg), gen_expr(cfg)));
  Rng r1{5};
  Rng r2{5};
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(print_expr(gen_expr(cfg, r1)), print_expr(gen_expr(cfg, r2)));
  }
}

TEST(GenExpr, DepthOneYieldsOnlyLeaves) {
  GenConfig cfg;
  cfg.max_depth = 1;
  Rng rng{3};
  for (int i = 0; i < 2000; ++i) {
    auto e = gen_expr(cfg, rng);
    bool const leaf =
        std::holds_alternative<IntLit>(e->node) || std::holds_alternative<ErrExpr>(e->node) ||
        (std::holds_alternative<CtorExpr>(e->node) &&
         std::get<CtorExpr>(e->node).args.empty());
    EXPECT_TRUE(leaf) << print_expr(e);
  }
}

TEST(GenExpr, EveryVariantHasPositiveProbability) {
  GenConfig cfg;
  cfg.seed = 42;
  Rng rng{cfg.seed};
  std::map<std::string, int> counts;
  for (int i = 0; i < 10000; ++i) count_variants(gen_expr(cfg, rng), counts);
  for (auto const& variant : {"int", "var", "ctor", "app", "match", "rec", "err"}) {
    EXPECT_GE(counts[variant], 100) << variant;
  }
}

TEST(GenExpr, WellFormedAndClosed) {
  GenConfig cfg;
  Rng rng{8};
  for (int i = 0; i < 2000; ++i) {
    auto e = gen_expr(cfg, rng);
    expect_well_formed(e, cfg);
    EXPECT_TRUE(free_vars(e).empty()) << print_expr(e);
  }
}

TEST(GenExpr, OpenModeLeavesFreeVariables) {
  GenConfig cfg;
  cfg.closed_only = false;
  Rng rng{6};
  int open_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    if (!free_vars(gen_expr(cfg, rng)).empty()) ++open_seen;
  }
  EXPECT_GT(open_seen, 100);
}

TEST(GenGroundType, GroundAndDepthBounded) {
  GenConfig cfg;
  Rng rng{9};
  for (int i = 0; i < 2000; ++i) {
    auto t = gen_ground_type(cfg, rng, 3);
    EXPECT_TRUE(free_tvars(t).empty()) << render_type(t);
    EXPECT_FALSE(contains_fun(t)) << render_type(t);
    EXPECT_LE(type_depth(t), 3) << render_type(t);
  }
}

TEST(Shrink, FindsSmallerFailingTerm) {
  auto original = mk_ctor({"Cons", 2}, {mk_app(mk_int(1), mk_int(2)), mk_int(3)});
  auto contains_app = [](ExprPtr const& e) {
    auto self = [](auto&& rec, ExprPtr const& cur) -> bool {
      if (std::holds_alternative<App>(cur->node)) return true;
      if (auto const* c = std::get_if<CtorExpr>(&cur->node)) {
        for (auto const& a : c->args) {
          if (rec(rec, a)) return true;
        }
      }
      return false;
    };
    return self(self, e);
  };
  auto shrunk = shrink(original, contains_app);
  EXPECT_TRUE(contains_app(shrunk));
  EXPECT_LT(expr_size(shrunk), expr_size(original));
  EXPECT_TRUE(alpha_equal_expr(shrunk, mk_app(mk_int(1), mk_int(2))));
}

TEST(Shrink, MinimalTermsAreFixpoints) {
  auto zero = mk_int(0);
  auto always = [](ExprPtr const&) { return true; };
  EXPECT_TRUE(alpha_equal_expr(shrink(zero, always), zero));
}

TEST(Properties, SmokeRunsAreClean) {
  GenConfig cfg;
  cfg.seed = 1;
  auto failure = check_failure(cfg, 300, EvalConfig{}, 5);
  EXPECT_TRUE(failure.ok()) << summarize(failure);
  EXPECT_EQ(failure.cases, 300);
  auto preservation = check_preservation(cfg, 200, 50, 5);
  EXPECT_TRUE(preservation.ok()) << summarize(preservation);
  auto lemmas = check_substitution_lemmas(cfg, 300);
  EXPECT_TRUE(lemmas.ok()) << summarize(lemmas);
  auto roundtrip = check_roundtrip(cfg, 300);
  EXPECT_TRUE(roundtrip.ok()) << summarize(roundtrip);
  auto monotonicity = check_cc_monotonicity(cfg, 300, 0, 5);
  EXPECT_TRUE(monotonicity.ok()) << summarize(monotonicity);
}

TEST(Properties, SummarizeFormat) {
  GenConfig cfg;
  auto report = check_roundtrip(cfg, 10);
  EXPECT_EQ(summarize(report), "print-parse-roundtrip: 10 cases, 0 failures");
}

TEST(Properties, DefaultAlphabetGolden) {
  auto ctors = default_alphabet();
  ASSERT_EQ(ctors.size(), 4u);
  EXPECT_EQ(ctors[0], (CtorName{"Nil", 0}));
  EXPECT_EQ(ctors[1], (CtorName{"Zero", 0}));
  EXPECT_EQ(ctors[2], (CtorName{"Succ", 1}));
  EXPECT_EQ(ctors[3], (CtorName{"Cons", 2}));
}

}  // namespace
}  // namespace crashlens
