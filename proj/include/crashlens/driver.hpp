#pragma once

#include <string>
#include <vector>

#include "crashlens/ast.hpp"
#include "crashlens/solver.hpp"

namespace crashlens {

struct AnalyzeOptions {
  int k = 5;
  int witness_depth = 3;
};

struct DefReport {
  std::string name;  // definition name, or "main"
  TypePtr type;
  // For a function definition the function's own crash condition (over its
  // argument variable); otherwise the expression's crash condition.
  CondPtr crash;
  Verdict verdict;
  std::vector<TypePtr> witnesses;  // crashing inputs, function definitions only
};

[[nodiscard]] std::vector<DefReport> analyze_program(Program const& program,
                                                     AnalyzeOptions const& options);

[[nodiscard]] std::string render_reports_text(std::vector<DefReport> const& reports);

// One JSON object per definition, schema:
// {"def", "type", "crash_condition", "verdict", "k", "witnesses"}
// verdict is "crash" | "no_crash_at_bound" | "unknown". Byte-stable for a
// fixed input and option set.
[[nodiscard]] std::string render_reports_json(std::vector<DefReport> const& reports,
                                              AnalyzeOptions const& options);

}  // namespace crashlens
