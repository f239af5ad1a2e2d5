#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crashlens/ast.hpp"
#include "crashlens/types.hpp"

namespace crashlens {

using TypeEnv = std::map<std::string, TypePtr>;

struct Typing {
  TypePtr type;
  CondPtr crash;
};

struct UnboundVariableError : std::logic_error {
  explicit UnboundVariableError(std::string const& name)
      : std::logic_error("unbound variable: " + name) {}
};

// Infers the over-approximating output type and exact crash condition of e
// under env. Total on well-formed expressions; throws UnboundVariableError on
// a variable missing from env. Fresh type variables are numbered from zero
// per top-level call, so inference is deterministic.
[[nodiscard]] Typing infer(TypeEnv const& env, ExprPtr const& e);

// Folds the pattern rules over the arm list: accum carries the conjunction of
// has-no-ctor facts for the arms already discarded.
[[nodiscard]] Typing infer_patterns(TypeEnv const& env, CondPtr const& accum,
                                    TypePtr const& scrutinee, std::vector<Arm> const& arms);

// Three-valued subtyping: True only when derivable (Bot, reflexivity, union
// introduction/elimination, componentwise constructors, function types with
// covariant return and crash-condition implication), False only when refuted
// on resolved structure, Unknown otherwise. budget bounds unfolding of
// pending applications.
[[nodiscard]] TruthValue subtype(TypePtr const& sub, TypePtr const& super, int budget);

}  // namespace crashlens
