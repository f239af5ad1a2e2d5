#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crashlens/driver.hpp"
#include "crashlens/eval.hpp"
#include "crashlens/parser.hpp"
#include "crashlens/printer.hpp"
#include "crashlens/testkit.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitDefiniteError = 1;
constexpr int kExitParseError = 2;
constexpr int kExitRuntimeError = 3;
constexpr int kExitFuelExhausted = 4;
constexpr int kExitPropertyFailure = 5;

struct FileResult {
  std::string output;
  std::string error;  // empty on success
};

std::string format_parse_error(std::string const& path, crashlens::ParseError const& err) {
  std::ostringstream out;
  out << path << ":" << err.line << ":" << err.column << ": " << to_string(err.kind) << ": "
      << err.what();
  return out.str();
}

bool read_file(std::string const& path, std::string& content, std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = path + ": cannot open file";
    return false;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  content = buffer.str();
  return true;
}

FileResult analyze_file(std::string const& path, crashlens::AnalyzeOptions const& options,
                        bool json) {
  FileResult result;
  std::string source;
  if (!read_file(path, source, result.error)) return result;
  try {
    auto program = crashlens::parse_program(source);
    auto reports = crashlens::analyze_program(program, options);
    result.output = json ? crashlens::render_reports_json(reports, options)
                         : crashlens::render_reports_text(reports);
  } catch (crashlens::ParseError const& err) {
    result.error = format_parse_error(path, err);
  }
  return result;
}

int run_analyze(std::vector<std::string> const& files, crashlens::AnalyzeOptions const& options,
                bool json) {
  std::vector<std::future<FileResult>> futures;
  futures.reserve(files.size());
  for (auto const& path : files) {
    futures.push_back(std::async(std::launch::async, analyze_file, path, options, json));
  }
  bool any_error = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto result = futures[i].get();
    if (!result.error.empty()) {
      std::cerr << result.error << "\n";
      any_error = true;
      continue;
    }
    if (files.size() > 1 && !json) std::cout << "== " << files[i] << " ==\n";
    std::cout << result.output;
  }
  return any_error ? kExitParseError : kExitClean;
}

int run_eval(std::string const& path, long long fuel) {
  std::string source;
  std::string error;
  if (!read_file(path, source, error)) {
    std::cerr << error << "\n";
    return kExitParseError;
  }
  try {
    auto program = crashlens::parse_program(source);
    if (!program.main) {
      std::cerr << path << ": no main expression to evaluate\n";
      return kExitParseError;
    }
    crashlens::EvalConfig config;
    config.fuel = fuel;
    auto outcome = crashlens::evaluate(program.main, config);
    switch (outcome.status) {
      case crashlens::EvalStatus::Value:
        std::cout << crashlens::print_expr(outcome.result) << "\n";
        return kExitClean;
      case crashlens::EvalStatus::Error:
        std::cout << "err\n";
        return kExitRuntimeError;
      case crashlens::EvalStatus::FuelExhausted:
        std::cerr << path << ": fuel exhausted after " << outcome.steps << " steps\n";
        return kExitFuelExhausted;
    }
  } catch (crashlens::ParseError const& err) {
    std::cerr << format_parse_error(path, err) << "\n";
    return kExitParseError;
  }
  return kExitClean;
}

int run_check(std::string const& path, crashlens::AnalyzeOptions const& options) {
  std::string source;
  std::string error;
  if (!read_file(path, source, error)) {
    std::cerr << error << "\n";
    return kExitParseError;
  }
  try {
    auto program = crashlens::parse_program(source);
    auto reports = crashlens::analyze_program(program, options);
    bool definite = false;
    for (auto const& report : reports) {
      std::cout << report.name << ": " << to_string(report.verdict.kind)
                << " (k=" << report.verdict.k << ")\n";
      if (report.verdict.kind == crashlens::VerdictKind::DefiniteCrashOrDiverge) definite = true;
    }
    return definite ? kExitDefiniteError : kExitClean;
  } catch (crashlens::ParseError const& err) {
    std::cerr << format_parse_error(path, err) << "\n";
    return kExitParseError;
  }
}

int run_fuzz(std::string const& property, std::uint64_t seed, int cases, int max_depth, int k) {
  crashlens::GenConfig cfg;
  cfg.seed = seed;
  cfg.max_depth = max_depth;
  auto want = [&](std::string const& name) { return property == "all" || property == name; };
  std::vector<crashlens::PropertyReport> reports;
  if (want("failure")) {
    reports.push_back(crashlens::check_failure(cfg, cases, crashlens::EvalConfig{}, k));
  }
  if (want("preservation")) {
    reports.push_back(crashlens::check_preservation(cfg, cases, 50, k));
  }
  if (want("lemmas")) reports.push_back(crashlens::check_substitution_lemmas(cfg, cases));
  if (want("roundtrip")) reports.push_back(crashlens::check_roundtrip(cfg, cases));
  if (want("monotonicity")) {
    reports.push_back(crashlens::check_cc_monotonicity(cfg, cases, 0, k));
  }
  if (reports.empty()) {
    std::cerr << "unknown property: " << property << "\n";
    return kExitParseError;
  }
  bool failed = false;
  for (auto const& report : reports) {
    std::cout << summarize(report) << "\n";
    if (report.ok()) continue;
    failed = true;
    if (!report.examples.empty()) {
      auto repro_path = "crashlens-repro-" + report.property + ".lc";
      std::ofstream out(repro_path);
      out << crashlens::print_expr(report.examples.front().shrunk) << "\n";
      std::cerr << "wrote repro to " << repro_path << "\n";
    }
  }
  return failed ? kExitPropertyFailure : kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crashlens: crash-condition analysis for constructor programs"};
  app.require_subcommand(1);

  crashlens::AnalyzeOptions options;
  bool json = false;
  std::vector<std::string> files;
  long long fuel = 10000;
  std::string property = "all";
  std::uint64_t seed = 0;
  int cases = 1000;
  int max_depth = 6;
  int fuzz_k = 5;

  auto* analyze = app.add_subcommand("analyze", "Infer types and crash conditions");
  analyze->add_option("files", files, "program files")->required();
  analyze->add_option("-k", options.k, "unfolding bound")->envname("CRASHLENS_K");
  analyze->add_option("--witness-depth", options.witness_depth,
                      "max depth for crashing-input search");
  analyze->add_flag("--json", json, "machine-readable output");

  auto* eval = app.add_subcommand("eval", "Evaluate the main expression");
  eval->add_option("file", files, "program file")->required()->expected(1);
  eval->add_option("--fuel", fuel, "step budget");

  auto* check = app.add_subcommand("check", "Report definite-crash verdicts");
  check->add_option("file", files, "program file")->required()->expected(1);
  check->add_option("-k", options.k, "unfolding bound")->envname("CRASHLENS_K");

  auto* fuzz = app.add_subcommand("fuzz", "Run randomized property suites");
  fuzz->add_option("--property", property,
                   "failure | preservation | lemmas | roundtrip | monotonicity | all");
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--cases", cases, "cases per property");
  fuzz->add_option("--max-depth", max_depth, "generator depth bound");
  fuzz->add_option("-k", fuzz_k, "unfolding bound")->envname("CRASHLENS_K");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? kExitClean : kExitParseError;
  }

  if (analyze->parsed()) return run_analyze(files, options, json);
  if (eval->parsed()) return run_eval(files.front(), fuel);
  if (check->parsed()) return run_check(files.front(), options);
  if (fuzz->parsed()) return run_fuzz(property, seed, cases, max_depth, fuzz_k);
  return kExitClean;
}
