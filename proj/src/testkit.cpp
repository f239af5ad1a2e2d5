#include "crashlens/testkit.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "crashlens/infer.hpp"
#include "crashlens/parser.hpp"
#include "crashlens/printer.hpp"
#include "crashlens/solver.hpp"

namespace crashlens {

std::vector<CtorName> default_alphabet() {
  return {{"Nil", 0}, {"Zero", 0}, {"Succ", 1}, {"Cons", 2}};
}

std::uint64_t Rng::next() {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) { return next() % bound; }

std::int64_t Rng::in_range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

namespace {

struct Gen {
  GenConfig const& cfg;
  Rng& rng;
  std::vector<std::string> scope;

  ExprPtr leaf() {
    for (;;) {
      switch (rng.below(4)) {
        case 0: return mk_int(rng.in_range(cfg.int_range.first, cfg.int_range.second));
        case 1:
          if (!scope.empty()) return mk_var(scope[rng.below(scope.size())]);
          if (!cfg.closed_only) return mk_var("u" + std::to_string(rng.below(3)));
          break;
        case 2: return mk_err();
        default: {
          std::vector<CtorName> nullary;
          for (auto const& c : cfg.alphabet) {
            if (c.arity == 0) nullary.push_back(c);
          }
          if (!nullary.empty()) return mk_ctor(nullary[rng.below(nullary.size())], {});
          break;
        }
      }
    }
  }

  // depth bounds the tree height, so depth 1 admits only leaves.
  ExprPtr expr(int depth) {
    if (depth <= 1) return leaf();
    switch (rng.below(16)) {
      case 0:
      case 1:
      case 2:
      case 3:
      case 4: return leaf();
      case 5:
      case 6:
      case 7: {
        auto const& ctor = cfg.alphabet[rng.below(cfg.alphabet.size())];
        std::vector<ExprPtr> args;
        args.reserve(static_cast<std::size_t>(ctor.arity));
        for (int i = 0; i < ctor.arity; ++i) args.push_back(expr(depth - 1));
        return mk_ctor(ctor, std::move(args));
      }
      case 8:
      case 9:
      case 10: {
        auto fn = expr(depth - 1);
        auto arg = expr(depth - 1);
        return mk_app(std::move(fn), std::move(arg));
      }
      case 11:
      case 12:
      case 13: return match_expr(depth);
      default: {
        std::string fn_name = "f" + std::to_string(rng.below(3));
        std::string arg_name = "x" + std::to_string(rng.below(3));
        scope.push_back(fn_name);
        scope.push_back(arg_name);
        auto body = expr(depth - 1);
        scope.pop_back();
        scope.pop_back();
        return mk_rec(std::move(fn_name), std::move(arg_name), std::move(body));
      }
    }
  }

  ExprPtr match_expr(int depth) {
    auto scrutinee = expr(depth - 1);
    auto arm_count = std::min<std::uint64_t>(rng.below(4), cfg.alphabet.size());
    std::vector<std::size_t> indices(cfg.alphabet.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    // Partial shuffle picks distinct pattern constructors.
    for (std::uint64_t i = 0; i < arm_count; ++i) {
      std::swap(indices[i], indices[i + rng.below(indices.size() - i)]);
    }
    std::vector<Arm> arms;
    for (std::uint64_t i = 0; i < arm_count; ++i) {
      auto const& ctor = cfg.alphabet[indices[i]];
      std::vector<std::string> binders;
      for (int j = 0; j < ctor.arity; ++j) binders.push_back("b" + std::to_string(j));
      auto before = scope.size();
      scope.insert(scope.end(), binders.begin(), binders.end());
      auto body = expr(depth - 1);
      scope.resize(before);
      arms.push_back(Arm{ctor, std::move(binders), std::move(body)});
    }
    return mk_match(std::move(scrutinee), std::move(arms));
  }
};

Alphabet to_alphabet(std::vector<CtorName> const& ctors) {
  Alphabet alphabet;
  for (auto const& c : ctors) alphabet.record(c.name, c.arity);
  return alphabet;
}

void child_candidates(ExprPtr const& e, std::vector<ExprPtr>& out);

void whole_candidates(ExprPtr const& e, std::vector<ExprPtr>& out) {
  auto add_closed = [&](ExprPtr const& sub) {
    if (free_vars(sub).empty()) out.push_back(sub);
  };
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          if (node.value != 0) out.push_back(mk_int(0));
        } else if constexpr (std::is_same_v<T, CtorExpr>) {
          for (auto const& a : node.args) add_closed(a);
          out.push_back(mk_int(0));
        } else if constexpr (std::is_same_v<T, App>) {
          add_closed(node.fn);
          add_closed(node.arg);
          out.push_back(mk_int(0));
        } else if constexpr (std::is_same_v<T, Match>) {
          add_closed(node.scrutinee);
          for (auto const& arm : node.arms) add_closed(arm.body);
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            auto arms = node.arms;
            arms.erase(arms.begin() + static_cast<std::ptrdiff_t>(i));
            out.push_back(mk_match(node.scrutinee, std::move(arms)));
          }
          out.push_back(mk_int(0));
        } else if constexpr (std::is_same_v<T, Rec>) {
          add_closed(node.body);
          out.push_back(mk_int(0));
        } else if constexpr (!std::is_same_v<T, IntLit>) {
          out.push_back(mk_int(0));
        }
      },
      e->node);
  child_candidates(e, out);
}

void child_candidates(ExprPtr const& e, std::vector<ExprPtr>& out) {
  std::visit(
      [&](auto const& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CtorExpr>) {
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            std::vector<ExprPtr> subs;
            whole_candidates(node.args[i], subs);
            for (auto& s : subs) {
              auto args = node.args;
              args[i] = std::move(s);
              out.push_back(mk_ctor(node.ctor, std::move(args)));
            }
          }
        } else if constexpr (std::is_same_v<T, App>) {
          std::vector<ExprPtr> subs;
          whole_candidates(node.fn, subs);
          for (auto& s : subs) out.push_back(mk_app(std::move(s), node.arg));
          subs.clear();
          whole_candidates(node.arg, subs);
          for (auto& s : subs) out.push_back(mk_app(node.fn, std::move(s)));
        } else if constexpr (std::is_same_v<T, Match>) {
          std::vector<ExprPtr> subs;
          whole_candidates(node.scrutinee, subs);
          for (auto& s : subs) out.push_back(mk_match(std::move(s), node.arms));
          for (std::size_t i = 0; i < node.arms.size(); ++i) {
            subs.clear();
            whole_candidates(node.arms[i].body, subs);
            for (auto& s : subs) {
              auto arms = node.arms;
              arms[i].body = std::move(s);
              out.push_back(mk_match(node.scrutinee, std::move(arms)));
            }
          }
        } else if constexpr (std::is_same_v<T, Rec>) {
          std::vector<ExprPtr> subs;
          whole_candidates(node.body, subs);
          for (auto& s : subs) {
            out.push_back(mk_rec(node.fn_name, node.arg_name, std::move(s)));
          }
        }
      },
      e->node);
}

struct CaseRunner {
  GenConfig cfg;
  PropertyReport report;
  Rng seq;
  static constexpr int kExampleCap = 5;

  explicit CaseRunner(GenConfig config, std::string property) : cfg(std::move(config)) {
    report.property = std::move(property);
    seq.state = cfg.seed;
  }

  void fail(std::uint64_t seed, ExprPtr const& original, ExprPtr const& shrunk,
            std::string detail) {
    ++report.failures;
    if (static_cast<int>(report.examples.size()) < kExampleCap) {
      report.examples.push_back(PropertyFailure{seed, original, shrunk, std::move(detail)});
    }
  }
};

}  // namespace

ExprPtr gen_expr(GenConfig const& cfg) {
  Rng rng{cfg.seed};
  return gen_expr(cfg, rng);
}

ExprPtr gen_expr(GenConfig const& cfg, Rng& rng) {
  Gen gen{cfg, rng, {}};
  return gen.expr(cfg.max_depth);
}

TypePtr gen_ground_type(GenConfig const& cfg, Rng& rng, int max_depth) {
  std::vector<CtorName> leaves;
  std::vector<CtorName> branches;
  for (auto const& c : cfg.alphabet) {
    (c.arity == 0 ? leaves : branches).push_back(c);
  }
  if (max_depth <= 1 || branches.empty() || rng.below(3) == 0) {
    auto pick = rng.below(leaves.size() + 1);
    if (pick == leaves.size()) return int_type();
    return ctor_type(leaves[pick], {});
  }
  auto const& ctor = branches[rng.below(branches.size())];
  std::vector<TypePtr> args;
  args.reserve(static_cast<std::size_t>(ctor.arity));
  for (int i = 0; i < ctor.arity; ++i) args.push_back(gen_ground_type(cfg, rng, max_depth - 1));
  return ctor_type(ctor, std::move(args));
}

ExprPtr shrink(ExprPtr const& e, std::function<bool(ExprPtr const&)> const& still_fails) {
  ExprPtr current = e;
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<ExprPtr> candidates;
    whole_candidates(current, candidates);
    for (auto const& candidate : candidates) {
      if (expr_size(candidate) < expr_size(current) && still_fails(candidate)) {
        current = candidate;
        improved = true;
        break;
      }
    }
  }
  return current;
}

PropertyReport check_failure(GenConfig cfg, int cases, EvalConfig const& eval_cfg, int k) {
  cfg.closed_only = true;
  CaseRunner runner(cfg, "falsification-soundness");
  auto violation = [&](ExprPtr const& e) -> std::optional<std::string> {
    if (!free_vars(e).empty()) return std::nullopt;
    auto typing = infer({}, e);
    auto truth = eval_cc(typing.crash, k);
    auto outcome = evaluate(e, eval_cfg);
    if (truth == TruthValue::True && outcome.status == EvalStatus::Value) {
      return "crash condition True but evaluation produced a value";
    }
    if (truth == TruthValue::False && outcome.status == EvalStatus::Error) {
      return "crash condition False but evaluation crashed";
    }
    return std::nullopt;
  };
  for (int i = 0; i < cases; ++i) {
    auto case_seed = runner.seq.next();
    Rng rng{case_seed};
    auto e = gen_expr(cfg, rng);
    ++runner.report.cases;
    auto bad = violation(e);
    if (!bad) continue;
    auto shrunk = shrink(e, [&](ExprPtr const& c) { return violation(c).has_value(); });
    runner.fail(case_seed, e, shrunk, *bad);
  }
  return runner.report;
}

PropertyReport check_preservation(GenConfig cfg, int cases, int max_steps, int k) {
  cfg.closed_only = true;
  CaseRunner runner(cfg, "preservation");
  auto contradictory = [](TruthValue a, TruthValue b) {
    return (a == TruthValue::True && b == TruthValue::False) ||
           (a == TruthValue::False && b == TruthValue::True);
  };
  auto violation = [&](ExprPtr const& e) -> std::optional<std::string> {
    if (!free_vars(e).empty()) return std::nullopt;
    auto current = e;
    auto typing = infer({}, current);
    auto truth = eval_cc(typing.crash, k);
    for (int s = 0; s < max_steps; ++s) {
      if (expr_size(current) > 20000) break;
      auto result = step(current);
      if (std::holds_alternative<Done>(result)) break;
      if (std::holds_alternative<Stuck>(result)) return "closed expression got stuck";
      current = std::get<Stepped>(result).expr;
      auto next_typing = infer({}, current);
      if (subtype(next_typing.type, typing.type, 5) == TruthValue::False) {
        return "step result type refuted as subtype (step " + std::to_string(s) + ")";
      }
      auto next_truth = eval_cc(next_typing.crash, k);
      if (contradictory(truth, next_truth)) {
        return "crash verdict contradiction across a step (step " + std::to_string(s) + ")";
      }
      typing = std::move(next_typing);
      truth = next_truth;
    }
    return std::nullopt;
  };
  for (int i = 0; i < cases; ++i) {
    auto case_seed = runner.seq.next();
    Rng rng{case_seed};
    auto e = gen_expr(cfg, rng);
    ++runner.report.cases;
    auto bad = violation(e);
    if (!bad) continue;
    auto shrunk = shrink(e, [&](ExprPtr const& c) { return violation(c).has_value(); });
    runner.fail(case_seed, e, shrunk, *bad);
  }
  return runner.report;
}

PropertyReport check_substitution_lemmas(GenConfig cfg, int cases) {
  CaseRunner runner(cfg, "substitution-lemmas");
  TypeVarId const hole{VarKind::Arg, 1 << 20};
  TypeVarId const hole2{VarKind::Arg, (1 << 20) + 1};
  std::string const hole_name = "subst_target";

  for (int i = 0; i < cases; ++i) {
    auto case_seed = runner.seq.next();
    Rng rng{case_seed};
    ++runner.report.cases;

    GenConfig closed_cfg = cfg;
    closed_cfg.closed_only = true;
    auto closed_expr = gen_expr(closed_cfg, rng);

    Gen open_gen{closed_cfg, rng, {hole_name}};
    auto open_expr = open_gen.expr(cfg.max_depth);

    auto ground = gen_ground_type(cfg, rng, 3);

    std::optional<std::string> bad;
    ExprPtr witness = closed_expr;

    // Weakening: an unused binding changes nothing.
    auto plain = infer({}, closed_expr);
    auto widened = infer({{"unused_weakening", int_type()}}, closed_expr);
    if (!structural_equal(plain.type, widened.type) ||
        !structural_equal(plain.crash, widened.crash)) {
      bad = "weakening changed the inferred typing";
    }

    // Value substitution: when the variable is bound to the value's own
    // inferred type, substituting the value changes nothing.
    if (!bad) {
      auto value = inhabit(ground);
      auto value_typing = infer({}, value);
      auto open = infer({{hole_name, value_typing.type}}, open_expr);
      auto closed = infer({}, subst_value(open_expr, hole_name, value));
      if (!alpha_equal(open.type, closed.type, 8) ||
          !alpha_equal(open.crash, closed.crash, 8)) {
        bad = "value substitution disagrees with binding the value's type";
        witness = open_expr;
      }
    }

    // Type substitution, renaming instance: inference commutes exactly with
    // renaming the free type variable.
    if (!bad) {
      auto with_a = infer({{hole_name, tvar(hole)}}, open_expr);
      auto with_b = infer({{hole_name, tvar(hole2)}}, open_expr);
      if (!structural_equal(subst_tvar(with_a.type, hole, tvar(hole2)), with_b.type) ||
          !structural_equal(subst_tvar(with_a.crash, hole, tvar(hole2)), with_b.crash)) {
        bad = "renaming the free type variable changed the typing";
        witness = open_expr;
      }
    }

    // Type substitution, ground instance: instantiating the free variable
    // after inference may only be less precise than inferring with the ground
    // type bound directly, which collapses empty types earlier.
    if (!bad) {
      auto open = infer({{hole_name, tvar(hole)}}, open_expr);
      auto direct = infer({{hole_name, ground}}, open_expr);
      if (subtype(direct.type, subst_tvar(open.type, hole, ground), 5) == TruthValue::False) {
        bad = "direct inference does not refine the instantiated typing";
        witness = open_expr;
      }
    }

    // Unsatisfiability after matching: a pattern chain entered under an
    // unsatisfiable prefix never yields a definitely-true crash condition,
    // whatever the scrutinee variable stands for.
    if (!bad) {
      std::vector<Arm> arms;
      auto alphabet = cfg.alphabet;
      auto arm_count = 1 + rng.below(alphabet.size());
      for (std::size_t a = 0; a < arm_count; ++a) {
        auto pick = a + rng.below(alphabet.size() - a);
        std::swap(alphabet[a], alphabet[pick]);
        std::vector<std::string> binders;
        for (int j = 0; j < alphabet[a].arity; ++j) binders.push_back("p" + std::to_string(j));
        GenConfig body_cfg = cfg;
        body_cfg.closed_only = true;
        body_cfg.max_depth = 2;
        arms.push_back(Arm{alphabet[a], std::move(binders), gen_expr(body_cfg, rng)});
      }
      auto chain = infer_patterns({}, cond_false(), tvar(hole), arms);
      for (int s = 0; s < 3 && !bad; ++s) {
        Interpretation interp{{hole, gen_ground_type(cfg, rng, 2)}};
        if (entails(interp, chain.crash, 3) == TruthValue::True) {
          bad = "unsatisfiable pattern prefix produced a definitely-true condition";
          witness = mk_match(mk_int(0), arms);
        }
      }
    }

    // Exhaustive match: the residual crash condition resolves immediately and
    // agrees with evaluation (integers fall through, constructor values match).
    if (!bad) {
      std::vector<Arm> arms;
      for (auto const& ctor : cfg.alphabet) {
        std::vector<std::string> binders;
        for (int j = 0; j < ctor.arity; ++j) binders.push_back("m" + std::to_string(j));
        arms.push_back(Arm{ctor, std::move(binders), mk_int(0)});
      }
      auto scrutinee = inhabit(ground);
      auto full_match = mk_match(scrutinee, std::move(arms));
      auto typing = infer({}, full_match);
      bool is_int = std::holds_alternative<IntType>(ground->node);
      auto expected = is_int ? TruthValue::True : TruthValue::False;
      if (eval_cc(typing.crash, 0) != expected) {
        bad = "exhaustive-match residual condition did not resolve as expected";
        witness = full_match;
      } else {
        auto outcome = evaluate(full_match);
        auto expected_status = is_int ? EvalStatus::Error : EvalStatus::Value;
        if (outcome.status != expected_status) {
          bad = "exhaustive-match evaluation disagrees with the residual condition";
          witness = full_match;
        }
      }
    }

    if (bad) runner.fail(case_seed, witness, witness, *bad);
  }
  return runner.report;
}

PropertyReport check_roundtrip(GenConfig cfg, int cases) {
  CaseRunner runner(cfg, "print-parse-roundtrip");
  for (int i = 0; i < cases; ++i) {
    auto case_seed = runner.seq.next();
    Rng rng{case_seed};
    auto e = gen_expr(cfg, rng);
    ++runner.report.cases;
    auto source = print_expr(e);
    try {
      auto alphabet = to_alphabet(cfg.alphabet);
      auto parsed = parse_expr_text(source, &alphabet);
      if (!alpha_equal_expr(e, parsed)) {
        runner.fail(case_seed, e, e, "reparsed expression differs: " + source);
      }
    } catch (ParseError const& err) {
      runner.fail(case_seed, e, e, "printed form failed to parse: " + std::string(err.what()));
    }
  }
  return runner.report;
}

PropertyReport check_cc_monotonicity(GenConfig cfg, int cases, int k_lo, int k_hi) {
  cfg.closed_only = true;
  CaseRunner runner(cfg, "verdict-monotonicity");
  for (int i = 0; i < cases; ++i) {
    auto case_seed = runner.seq.next();
    Rng rng{case_seed};
    auto e = gen_expr(cfg, rng);
    ++runner.report.cases;
    auto typing = infer({}, e);
    std::optional<TruthValue> resolved;
    for (int k = k_lo; k <= k_hi; ++k) {
      auto v = eval_cc(typing.crash, k);
      if (resolved) {
        if (v != *resolved) {
          runner.fail(case_seed, e, e,
                      "verdict changed from " + to_string(*resolved) + " to " + to_string(v) +
                          " at k=" + std::to_string(k));
          break;
        }
      } else if (v != TruthValue::Unknown) {
        resolved = v;
      }
    }
  }
  return runner.report;
}

std::string summarize(PropertyReport const& report) {
  std::ostringstream out;
  out << report.property << ": " << report.cases << " cases, " << report.failures << " failures";
  for (auto const& ex : report.examples) {
    out << "\n  seed=" << ex.seed << " " << ex.detail;
    out << "\n    original: " << print_expr(ex.original);
    out << "\n    shrunk:   " << print_expr(ex.shrunk);
  }
  return out.str();
}

}  // namespace crashlens
