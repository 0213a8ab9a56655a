// diagnostic.cpp
#include "minimaple/diagnostic.hpp"

#include <algorithm>

namespace minimaple {

const char *to_string(Severity s) {
  switch (s) {
  case Severity::Error: return "error";
  case Severity::Warning: return "warning";
  case Severity::Info: return "info";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic &d) {
  return d.span.file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) +
         ": " + to_string(d.severity) + "[" + d.code + "]: " + d.message;
}

void sort_by_position(std::vector<Diagnostic> &diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic &a, const Diagnostic &b) {
    if (a.span.line != b.span.line) return a.span.line < b.span.line;
    return a.span.column < b.span.column;
  });
}

std::size_t count_severity(const std::vector<Diagnostic> &diags, Severity s) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [s](const Diagnostic &d) { return d.severity == s; }));
}

} // namespace minimaple
