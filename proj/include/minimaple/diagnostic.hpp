// minimaple/diagnostic.hpp
#pragma once

#include <string>
#include <vector>

#include "minimaple/ast.hpp"

namespace minimaple {

enum class Severity { Error, Warning, Info };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;

  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

const char *to_string(Severity s);

// `file:line:col: severity[code]: message`
std::string format_diagnostic(const Diagnostic &d);

// Stable sort by (line, column); ties keep emission order.
void sort_by_position(std::vector<Diagnostic> &diags);

std::size_t count_severity(const std::vector<Diagnostic> &diags, Severity s);

} // namespace minimaple
