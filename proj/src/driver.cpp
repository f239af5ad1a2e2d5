#include "crashlens/driver.hpp"

#include <sstream>

#include "json.hpp"

#include "crashlens/infer.hpp"

namespace crashlens {

namespace {

DefReport report_for(std::string name, ExprPtr const& body, Alphabet const& alphabet,
                     AnalyzeOptions const& options) {
  DefReport report;
  report.name = std::move(name);
  auto typing = infer({}, body);
  report.type = typing.type;
  report.verdict = decide(body, {}, options.k);
  if (auto const* fun = std::get_if<FunType>(&typing.type->node)) {
    report.crash = fun->crash;
    report.witnesses =
        find_crashing_inputs(typing.type, alphabet, options.witness_depth, options.k);
  } else {
    report.crash = typing.crash;
  }
  return report;
}

}  // namespace

std::vector<DefReport> analyze_program(Program const& program, AnalyzeOptions const& options) {
  std::vector<DefReport> reports;
  for (auto const& [name, body] : program.defs) {
    reports.push_back(report_for(name, body, program.alphabet, options));
  }
  if (program.main) {
    reports.push_back(report_for("main", program.main, program.alphabet, options));
  }
  return reports;
}

std::string render_reports_text(std::vector<DefReport> const& reports) {
  std::ostringstream out;
  for (auto const& report : reports) {
    out << report.name << ":\n";
    out << "  type: " << render_type(report.type) << "\n";
    out << "  crash: " << render_cond(report.crash) << "\n";
    out << "  verdict: " << to_string(report.verdict.kind) << " (k=" << report.verdict.k
        << ")\n";
    if (std::holds_alternative<FunType>(report.type->node)) {
      out << "  crashing inputs:";
      if (report.witnesses.empty()) {
        out << " none found";
      } else {
        for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
          out << (i == 0 ? " " : ", ") << render_type(report.witnesses[i]);
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string render_reports_json(std::vector<DefReport> const& reports,
                                AnalyzeOptions const& options) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (auto const& report : reports) {
    nlohmann::ordered_json obj;
    obj["def"] = report.name;
    obj["type"] = render_type(report.type);
    obj["crash_condition"] = render_cond(report.crash);
    obj["verdict"] = to_string(report.verdict.kind);
    obj["k"] = options.k;
    auto witnesses = nlohmann::ordered_json::array();
    for (auto const& w : report.witnesses) witnesses.push_back(render_type(w));
    obj["witnesses"] = std::move(witnesses);
    array.push_back(std::move(obj));
  }
  return array.dump(2) + "\n";
}

}  // namespace crashlens
