#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crashlens/ast.hpp"
#include "crashlens/infer.hpp"
#include "crashlens/types.hpp"

namespace crashlens {

// Assignment of ground types to free type variables.
using Interpretation = std::map<TypeVarId, TypePtr>;

[[nodiscard]] TypePtr apply_interp(Interpretation const& interp, TypePtr const& t);
[[nodiscard]] CondPtr apply_interp(Interpretation const& interp, CondPtr const& c);

// One parallel unfolding round: every pending application whose head resolves
// to a function type is beta-reduced once; copies created by the round wait
// for the next round. The bool reports whether anything changed.
[[nodiscard]] std::pair<TypePtr, bool> unfold_type_once(TypePtr const& t);
[[nodiscard]] std::pair<CondPtr, bool> unfold_cond_once(CondPtr const& c);

// Three-valued bounded evaluation: predicates are decided on the resolved
// union members of their argument (free type variables and still-pending
// applications read as Unknown), connectives follow Kleene logic, and up to k
// unfolding rounds run in between. Monotone in k: a True/False verdict never
// changes for larger k.
[[nodiscard]] TruthValue eval_cc(CondPtr const& c, int k);

// eval_cc after substituting the interpretation into the condition.
[[nodiscard]] TruthValue entails(Interpretation const& interp, CondPtr const& c, int k);

enum class VerdictKind { DefiniteCrashOrDiverge, NoCrashAtBound, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  TruthValue truth = TruthValue::Unknown;
  int k = 0;
  std::string evidence;  // rendered crash condition the verdict was read from
};

[[nodiscard]] std::string to_string(VerdictKind kind);

// Infers e under env and evaluates its crash condition at bound k.
// DefiniteCrashOrDiverge only on True: by the falsification theorem the
// program then crashes or diverges.
[[nodiscard]] Verdict decide(ExprPtr const& e, TypeEnv const& env, int k);

// All ground constructor-tree types of depth <= max_depth, breadth-first by
// depth; constructors in alphabet order, IntType last at each level.
[[nodiscard]] std::vector<TypePtr> enumerate_ground_types(Alphabet const& alphabet,
                                                          int max_depth);

// Ground argument types t with eval_cc(ccapp(fun, t), k) == True, in
// enumeration order.
[[nodiscard]] std::vector<TypePtr> find_crashing_inputs(TypePtr const& fun,
                                                        Alphabet const& alphabet, int max_depth,
                                                        int k);

// A value inhabiting a ground constructor-tree type (IntType -> 0).
[[nodiscard]] ExprPtr inhabit(TypePtr const& t);

// True iff eval_cc(c, k1) == eval_cc(c, k2); detects conditions that have
// stabilized (e.g. self-reproducing unfoldings).
[[nodiscard]] bool fixpoint_probe(CondPtr const& c, int k1, int k2);

}  // namespace crashlens
