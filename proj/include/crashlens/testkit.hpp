#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "crashlens/ast.hpp"
#include "crashlens/eval.hpp"
#include "crashlens/types.hpp"

namespace crashlens {

[[nodiscard]] std::vector<CtorName> default_alphabet();

struct GenConfig {
  std::uint64_t seed = 0;
  int max_depth = 6;
  std::vector<CtorName> alphabet = default_alphabet();
  std::pair<std::int64_t, std::int64_t> int_range{0, 9};
  bool closed_only = true;
};

// Deterministic splitmix64; the standard distributions are implementation
// defined, this is not.
struct Rng {
  std::uint64_t state = 0;

  std::uint64_t next();
  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  std::int64_t in_range(std::int64_t lo, std::int64_t hi);
};

// Generates a well-formed expression: arity-correct, pattern constructors
// distinct per match, rec binders distinct, and closed when cfg.closed_only
// (otherwise free variables may remain). Every Expr variant has positive
// probability at depth >= 2.
[[nodiscard]] ExprPtr gen_expr(GenConfig const& cfg);
[[nodiscard]] ExprPtr gen_expr(GenConfig const& cfg, Rng& rng);

// Ground constructor-tree type (no variables, no functions); used for
// interpretations and substitution-lemma instances.
[[nodiscard]] TypePtr gen_ground_type(GenConfig const& cfg, Rng& rng, int max_depth);

struct PropertyFailure {
  std::uint64_t seed = 0;
  ExprPtr original;
  ExprPtr shrunk;
  std::string detail;
};

struct PropertyReport {
  std::string property;
  int cases = 0;
  int failures = 0;
  std::vector<PropertyFailure> examples;  // capped; one entry per failure up to the cap

  [[nodiscard]] bool ok() const { return failures == 0; }
};

// Greedy structural shrinking: repeatedly tries smaller candidates (subterms,
// dropped arms, leaf replacements) while still_fails holds, until a local
// minimum. still_fails must be deterministic.
[[nodiscard]] ExprPtr shrink(ExprPtr const& e,
                             std::function<bool(ExprPtr const&)> const& still_fails);

// Falsification soundness: DefiniteCrashOrDiverge at bound k implies the
// program does not evaluate to a value within the fuel.
[[nodiscard]] PropertyReport check_failure(GenConfig cfg, int cases, EvalConfig const& eval_cfg,
                                           int k);

// Along each step trace: the next type is never refuted as a subtype of the
// previous one, and the two crash conditions never evaluate to contradictory
// verdicts at bound k.
[[nodiscard]] PropertyReport check_preservation(GenConfig cfg, int cases, int max_steps, int k);

// Weakening, substitution of values, substitution of type variables, and
// unsatisfiability after matching, each on generated instances.
[[nodiscard]] PropertyReport check_substitution_lemmas(GenConfig cfg, int cases);

// print -> parse -> alpha-equal.
[[nodiscard]] PropertyReport check_roundtrip(GenConfig cfg, int cases);

// eval_cc verdicts of inferred crash conditions never flip between True and
// False as k grows from k_lo to k_hi.
[[nodiscard]] PropertyReport check_cc_monotonicity(GenConfig cfg, int cases, int k_lo, int k_hi);

[[nodiscard]] std::string summarize(PropertyReport const& report);

}  // namespace crashlens
