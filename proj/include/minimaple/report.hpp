// minimaple/report.hpp - Text and JSON renderings of checker and interpreter
// results, shared by the command-line driver and the tests.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minimaple/ast.hpp"
#include "minimaple/diagnostic.hpp"
#include "minimaple/interpreter.hpp"
#include "minimaple/typechecker.hpp"

namespace minimaple {

inline constexpr int kJsonSchema = 1;

inline constexpr const char *kVerdictOk = "The program type-checked correctly.";
inline constexpr const char *kVerdictFailed = "The program failed to type-check.";

// The COMMAND-SEQUENCE-ANNOTATION block: PI, RetTypeSet, ThrownExceptionSet
// and RetFlag, one item per line, each line ending in '\n'.
std::string annotation_block(const TypeEnv &env, const CommandInfo &info);

// Full `check` report for a parsed file. Diagnostics come before the
// annotation block; per-procedure blocks are added when `verbose`.
std::string check_report(const std::string &path, const CheckResult &result, bool verbose);

// Report for a file that did not parse.
std::string syntax_report(const std::string &path, const std::vector<Diagnostic> &errors);

nlohmann::json to_json(const SourceSpan &span);
nlohmann::json to_json(const Diagnostic &d);
nlohmann::json to_json(const TypeEnv &env); // [{name, type}] in dump order
nlohmann::json to_json(const TraceEvent &e);
nlohmann::json to_json(const Expr &e);
nlohmann::json to_json(const Cmd &c);

// One JSON object per top-level command, one per line.
std::string ast_json_lines(const Program &program);

nlohmann::json check_json(const std::string &path, const std::vector<Diagnostic> &diagnostics,
                          const CheckResult *result);

} // namespace minimaple
