// ast.cpp - generic traversal helpers
#include "minimaple/ast.hpp"

namespace minimaple {

std::vector<const Expr *> subexpressions(const Expr &e) {
  std::vector<const Expr *> out;
  auto push = [&](const Expr &c) { out.push_back(&c); };
  if (auto *n = e.as<ListLit>()) {
    for (const auto &i : n->items) push(i);
  } else if (auto *n = e.as<SetLit>()) {
    for (const auto &i : n->items) push(i);
  } else if (auto *n = e.as<Index>()) {
    push(*n->base);
    push(*n->index);
  } else if (auto *n = e.as<Call>()) {
    for (const auto &a : n->args) push(a);
  } else if (auto *n = e.as<TypeTest>()) {
    push(*n->subject);
  } else if (auto *n = e.as<Unary>()) {
    push(*n->operand);
  } else if (auto *n = e.as<Binary>()) {
    push(*n->lhs);
    push(*n->rhs);
  } else if (auto *n = e.as<Quantified>()) {
    push(*n->body);
  } else if (auto *n = e.as<NumQuant>()) {
    push(*n->term);
    if (auto *r = std::get_if<InRange>(&n->range)) {
      push(*r->source);
    } else {
      const auto &iv = std::get<IntervalRange>(n->range);
      push(*iv.low);
      push(*iv.high);
    }
    if (n->filter) push(**n->filter);
  }
  return out;
}

} // namespace minimaple
