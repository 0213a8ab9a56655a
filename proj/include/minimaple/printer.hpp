// minimaple/printer.hpp - Canonical source rendering of syntax trees.
//
// Output re-parses to a structurally equal tree.
#pragma once

#include <string>

#include "minimaple/ast.hpp"

namespace minimaple {

std::string pretty_print(const Program &program);
std::string pretty_print(const Decl &decl);
std::string pretty_print(const Cmd &cmd, int indent = 0);
std::string pretty_print(const Expr &expr);
std::string pretty_print(const TypeExpr &type);
std::string pretty_print(const ProcSpec &spec);
std::string pretty_print(const LoopSpec &spec);

} // namespace minimaple
