#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "crashlens/ast.hpp"

namespace crashlens {

struct Stepped {
  ExprPtr expr;
};
struct Done {
  ExprPtr value;
};
struct Stuck {
  std::string reason;
};
using StepResult = std::variant<Stepped, Done, Stuck>;

// One deterministic small step (leftmost-innermost call-by-value). Total on
// closed expressions: every closed non-value either steps by a computation
// rule or by one of the error rules. Stuck arises only on open terms.
[[nodiscard]] StepResult step(ExprPtr const& e);

enum class EvalStatus { Value, Error, FuelExhausted };

struct EvalOutcome {
  EvalStatus status = EvalStatus::Value;
  // Final value for Value, Err for Error, the last expression reached for
  // FuelExhausted.
  ExprPtr result;
  long long steps = 0;
};

struct EvalConfig {
  long long fuel = 10000;
  // Node-count ceiling; exceeding it reports FuelExhausted as well, so
  // self-duplicating programs stay bounded.
  std::size_t max_nodes = 1000000;
  // Cumulative ceiling on nodes visited across all steps: each step walks
  // the whole term, so growing programs cost quadratically in step count.
  long long max_work = 2000000;
};

// Runs step to quiescence. Throws std::logic_error on a stuck (open) term.
[[nodiscard]] EvalOutcome evaluate(ExprPtr const& e, EvalConfig const& config = {});

}  // namespace crashlens
