// mmaple - check, run and format MiniMaple programs.
//
// Exit codes: 0 success, 1 type or spec errors, 2 syntax errors, 3 runtime
// error or failed assertion/contract, 4 usage error. With several inputs the
// highest code wins.
#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minimaple/interpreter.hpp"
#include "minimaple/parser.hpp"
#include "minimaple/printer.hpp"
#include "minimaple/report.hpp"
#include "minimaple/typechecker.hpp"

namespace {

using namespace minimaple;
using nlohmann::json;

enum Exit { kOk = 0, kTypeErrors = 1, kSyntaxErrors = 2, kRuntimeError = 3, kUsage = 4 };

struct CliConfig {
  std::string subcommand;
  std::vector<std::string> inputPaths;
  std::string outputFormat = "text";
  RunOptions runOptions;
  bool warningsAsErrors = false;
  bool verbose = false;
};

struct FileResult {
  std::string out;
  std::string err;
  int code = kOk;
};

bool failed_check(const CheckResult &r, bool werror) {
  if (!r.ok()) return true;
  return werror && count_severity(r.diagnostics, Severity::Warning) > 0;
}

FileResult process(const CliConfig &cfg, const std::string &path) {
  FileResult res;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    res.err = "mmaple: cannot read " + path + "\n";
    res.code = kUsage;
    return res;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const bool asJson = cfg.outputFormat == "json";

  Parsed<Program> parsed = parse_source(buf.str(), path);
  if (!parsed.ok()) {
    res.code = kSyntaxErrors;
    if (asJson || cfg.subcommand == "dump-env") {
      res.out = check_json(path, parsed.errors, nullptr).dump() + "\n";
    } else {
      res.out = syntax_report(path, parsed.errors);
    }
    return res;
  }
  const Program &program = *parsed.value;

  if (cfg.subcommand == "fmt") {
    res.out = pretty_print(program);
    return res;
  }
  if (cfg.subcommand == "dump-ast") {
    res.out = ast_json_lines(program);
    return res;
  }

  CheckResult checked = check_program(program);
  const bool bad = failed_check(checked, cfg.warningsAsErrors);
  if (bad) res.code = kTypeErrors;

  if (cfg.subcommand == "dump-env" || (asJson && cfg.subcommand == "check")) {
    json j = check_json(path, checked.diagnostics, &checked);
    if (cfg.verbose) {
      json procs = json::array();
      for (const auto &p : checked.procedures) {
        procs.push_back(json{{"name", p.name}, {"env", to_json(p.entryEnv)}});
      }
      j["procedures"] = std::move(procs);
    }
    res.out = j.dump() + "\n";
    return res;
  }

  if (!asJson) res.out = check_report(path, checked, cfg.verbose);
  if (cfg.subcommand == "check" || bad) {
    if (asJson) res.out = check_json(path, checked.diagnostics, &checked).dump() + "\n";
    return res;
  }

  RunResult run = run_program(program, cfg.runOptions);
  const auto *error = std::get_if<RuntimeError>(&run.final);
  if (error) res.code = kRuntimeError;
  if (asJson) {
    json j = check_json(path, checked.diagnostics, &checked);
    json trace = json::array();
    for (const auto &e : run.trace) trace.push_back(to_json(e));
    j["trace"] = std::move(trace);
    if (error) {
      j["error"] = json{{"message", error->message}, {"span", to_json(error->span)}};
      if (error->label) j["error"]["label"] = *error->label;
    }
    res.out = j.dump() + "\n";
    return res;
  }
  res.out += "Running " + path + "...\n";
  for (const auto &e : run.trace) res.out += format_trace_event(e) + "\n";
  if (error) {
    res.out += path + ":" + std::to_string(error->span.line) + ":" + std::to_string(error->span.column) +
               ": runtime error: " + format_error(*error) + "\n";
  } else {
    res.out += "Execution finished.\n";
  }
  return res;
}

void add_common_options(CLI::App &sub, CliConfig &cfg) {
  sub.add_option("files", cfg.inputPaths, "MiniMaple source files")->required();
  sub.add_option("--format", cfg.outputFormat, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  sub.add_flag("--check-contracts", cfg.runOptions.checkProcContracts,
               "Check requires/ensures clauses at run time");
  sub.add_flag("--check-invariants", cfg.runOptions.checkLoopSpecs,
               "Check loop invariants and decreases clauses at run time");
  sub.add_flag("--no-assert{false}", cfg.runOptions.checkAssertions, "Skip ASSERT commands");
  sub.add_option("--step-limit", cfg.runOptions.stepLimit, "Maximum number of execution steps");
  sub.add_option("--quantifier-bound", cfg.runOptions.quantifierBound,
                 "Largest range a quantifier may enumerate");
  sub.add_flag("--werror", cfg.warningsAsErrors, "Treat warnings as errors");
  sub.add_flag("--verbose", cfg.verbose, "Also print per-procedure annotation blocks");
}

} // namespace

int main(int argc, char **argv) {
  CliConfig cfg;
  CLI::App app{"MiniMaple type checker and interpreter", "mmaple"};
  app.require_subcommand(1);
  const std::pair<const char *, const char *> subcommands[] = {
      {"check", "Parse and type-check"},
      {"run", "Type-check, then execute"},
      {"dump-ast", "Print the syntax tree as JSON lines"},
      {"dump-env", "Print diagnostics and the final type environment as JSON"},
      {"fmt", "Pretty-print the program"},
  };
  for (const auto &[name, help] : subcommands) {
    CLI::App *sub = app.add_subcommand(name, help);
    add_common_options(*sub, cfg);
    sub->callback([&cfg, sub] { cfg.subcommand = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError &e) {
    std::cerr << "mmaple: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  std::vector<std::future<FileResult>> jobs;
  for (const auto &path : cfg.inputPaths) {
    jobs.push_back(std::async(std::launch::async, process, std::cref(cfg), path));
  }
  int code = kOk;
  for (auto &job : jobs) {
    FileResult r = job.get();
    std::cout << r.out;
    std::cerr << r.err;
    code = std::max(code, r.code);
  }
  return code;
}
