// types.cpp - type lattice, normalization and environment algebra
#include "minimaple/types.hpp"

#include <algorithm>

namespace minimaple {

// ---------------------------------------------------------------------------
// Construction

Type Type::set(Type elem) { return Type(Kind::Set, {}, {std::move(elem)}); }
Type Type::list(Type elem) { return Type(Kind::List, {}, {std::move(elem)}); }
Type Type::record(std::vector<Type> fields) { return Type(Kind::Record, {}, std::move(fields)); }

Type Type::procedure(Type ret, std::vector<Type> args) {
  std::vector<Type> parts;
  parts.reserve(args.size() + 1);
  parts.push_back(std::move(ret));
  for (auto &a : args) parts.push_back(std::move(a));
  return Type(Kind::Procedure, {}, std::move(parts));
}

Type Type::tagged(std::string name, std::vector<Type> args) {
  return Type(Kind::Tagged, std::move(name), std::move(args));
}

Type Type::named(std::string name) { return Type(Kind::Named, std::move(name), {}); }
Type Type::abstract(std::string name) { return Type(Kind::Abstract, std::move(name), {}); }

Type Type::union_of(std::vector<Type> members) {
  std::vector<Type> flat;
  for (auto &m : members) {
    if (m.is(Kind::Anything)) return anything();
    if (m.is(Kind::Union)) {
      flat.insert(flat.end(), m.parts_.begin(), m.parts_.end());
    } else {
      flat.push_back(std::move(m));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());

  // Drop members subsumed by another member.
  std::vector<Type> kept;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < flat.size() && !subsumed; ++j) {
      subsumed = i != j && is_subtype(flat[i], flat[j]);
    }
    if (!subsumed) kept.push_back(flat[i]);
  }
  if (kept.size() == 1) return std::move(kept.front());
  return Type(Kind::Union, {}, std::move(kept));
}

bool operator==(const Type &a, const Type &b) {
  return a.kind_ == b.kind_ && a.name_ == b.name_ && a.parts_ == b.parts_;
}

std::strong_ordering operator<=>(const Type &a, const Type &b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.name_.compare(b.name_); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  const std::size_t n = std::min(a.parts_.size(), b.parts_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.parts_[i] <=> b.parts_[i]; c != 0) return c;
  }
  return a.parts_.size() <=> b.parts_.size();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string join_types(std::span<const Type> ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ",";
    out += to_string(ts[i]);
  }
  return out;
}

} // namespace

std::string to_string(const Type &t) {
  using K = Type::Kind;
  switch (t.kind()) {
  case K::Integer: return "integer";
  case K::Boolean: return "boolean";
  case K::String: return "string";
  case K::Float: return "float";
  case K::Rational: return "rational";
  case K::Anything: return "anything";
  case K::Symbol: return "symbol";
  case K::Void: return "void";
  case K::Uneval: return "uneval";
  case K::Set: return "{" + to_string(t.elem()) + "}";
  case K::List: return "list(" + to_string(t.elem()) + ")";
  case K::Record: return "[" + join_types(t.fields()) + "]";
  case K::Procedure: return "procedure[" + to_string(t.ret()) + "](" + join_types(t.params()) + ")";
  case K::Tagged: return t.name() + "(" + join_types(t.fields()) + ")";
  case K::Union: return "Or(" + join_types(t.members()) + ")";
  case K::Named:
  case K::Abstract: return t.name();
  }
  return "anything";
}

// ---------------------------------------------------------------------------
// Lattice

namespace {

bool pointwise(std::span<const Type> as, std::span<const Type> bs, bool contra = false) {
  if (as.size() != bs.size()) return false;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (!(contra ? is_subtype(bs[i], as[i]) : is_subtype(as[i], bs[i]))) return false;
  }
  return true;
}

} // namespace

bool is_subtype(const Type &a, const Type &b) {
  using K = Type::Kind;
  if (a == b || b.is(K::Anything)) return true;
  if (a.is(K::Union)) {
    return std::all_of(a.members().begin(), a.members().end(),
                       [&](const Type &m) { return is_subtype(m, b); });
  }
  if (b.is(K::Union)) {
    return std::any_of(b.members().begin(), b.members().end(),
                       [&](const Type &m) { return is_subtype(a, m); });
  }
  switch (a.kind()) {
  case K::Integer: return b.is(K::Rational);
  case K::Set:
  case K::List: return b.kind() == a.kind() && is_subtype(a.elem(), b.elem());
  case K::Record: return b.is(K::Record) && pointwise(a.fields(), b.fields());
  case K::Procedure:
    return b.is(K::Procedure) && is_subtype(a.ret(), b.ret()) &&
           pointwise(a.params(), b.params(), true);
  case K::Tagged:
    return b.is(K::Tagged) && a.name() == b.name() && pointwise(a.fields(), b.fields());
  default: return false;
  }
}

Type super_type(const Type &a, const Type &b) {
  if (is_subtype(a, b)) return b;
  if (is_subtype(b, a)) return a;
  return Type::union_of({a, b});
}

bool may_overlap(const Type &a, const Type &b) {
  using K = Type::Kind;
  if (is_subtype(a, b) || is_subtype(b, a)) return true;
  if (a.is(K::Union)) {
    return std::any_of(a.members().begin(), a.members().end(),
                       [&](const Type &m) { return may_overlap(m, b); });
  }
  if (b.is(K::Union)) return may_overlap(b, a);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case K::Set:
  case K::List: return true; // the empty collection inhabits both
  case K::Record:
  case K::Tagged: {
    if (a.name() != b.name() || a.fields().size() != b.fields().size()) return false;
    for (std::size_t i = 0; i < a.fields().size(); ++i) {
      if (!may_overlap(a.fields()[i], b.fields()[i])) return false;
    }
    return true;
  }
  case K::Procedure: return a.params().size() == b.params().size();
  default: return false;
  }
}

std::optional<Type> subtract(const Type &t, const Type &tested) {
  if (t == tested) return std::nullopt;
  if (!t.is(Type::Kind::Union)) return t;
  std::vector<Type> removed =
      tested.is(Type::Kind::Union) ? tested.members() : std::vector<Type>{tested};
  const auto &members = t.members();
  for (const auto &r : removed) {
    if (std::find(members.begin(), members.end(), r) == members.end()) return t;
  }
  std::vector<Type> rest;
  for (const auto &m : members) {
    if (std::find(removed.begin(), removed.end(), m) == removed.end()) rest.push_back(m);
  }
  if (rest.empty()) return std::nullopt;
  return Type::union_of(std::move(rest));
}

bool is_numeric(const Type &t) {
  static const Type number = Type::union_of({Type::rational(), Type::float_()});
  return is_subtype(t, number);
}

// ---------------------------------------------------------------------------
// Environments

TypeEnv::TypeEnv(std::initializer_list<Entry> entries) {
  for (const auto &[name, type] : entries) bind(name, type);
}

const Type *TypeEnv::find(std::string_view name) const {
  for (const auto &e : entries_) {
    if (e.first == name) return &e.second;
  }
  return nullptr;
}

void TypeEnv::bind(const std::string &name, Type t) {
  for (auto &e : entries_) {
    if (e.first == name) {
      e.second = std::move(t);
      return;
    }
  }
  entries_.emplace_back(name, std::move(t));
}

void TypeEnv::erase(std::string_view name) {
  std::erase_if(entries_, [&](const Entry &e) { return e.first == name; });
}

bool operator==(const TypeEnv &a, const TypeEnv &b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const TypeEnv::Entry &e) {
    const Type *other = b.find(e.first);
    return other && *other == e.second;
  });
}

std::string to_string(const TypeEnv &env) {
  std::string out = "{";
  bool first = true;
  for (const auto &[name, type] : env) {
    out += (first ? "" : ", ") + name + ":" + to_string(type);
    first = false;
  }
  return out + "}";
}

bool can_specialize(const TypeEnv &pi, const TypeEnv &pi2) {
  return std::all_of(pi2.begin(), pi2.end(), [&](const TypeEnv::Entry &e) {
    const Type *mine = pi.find(e.first);
    return !mine || super_type_pred(*mine, e.second) || super_type_pred(e.second, *mine);
  });
}

TypeEnv specialize(const TypeEnv &pi, const TypeEnv &pi2) {
  TypeEnv out = pi;
  for (const auto &[name, narrowed] : pi2) {
    const Type *mine = pi.find(name);
    if (mine && is_subtype(narrowed, *mine)) out.bind(name, narrowed);
  }
  return out;
}

TypeEnv combine(const TypeEnv &pi1, const TypeEnv &pi2) {
  TypeEnv out = pi1;
  for (const auto &[name, type] : pi2) {
    const Type *mine = pi1.find(name);
    out.bind(name, mine ? super_type(*mine, type) : type);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

struct Resolver {
  const NamedTypeTable &table;
  std::vector<std::string> stack;
  std::optional<Diagnostic> error;

  std::optional<Type> fail(const TypeExpr &t, std::string code, std::string msg) {
    if (!error) error = Diagnostic{Severity::Error, std::move(code), std::move(msg), t.loc.span};
    return std::nullopt;
  }

  std::optional<std::vector<Type>> all(const std::vector<TypeExpr> &ts, std::size_t from = 0) {
    std::vector<Type> out;
    for (std::size_t i = from; i < ts.size(); ++i) {
      auto r = go(ts[i]);
      if (!r) return std::nullopt;
      out.push_back(std::move(*r));
    }
    return out;
  }

  std::optional<Type> go(const TypeExpr &t) {
    using K = TypeExpr::Kind;
    switch (t.kind) {
    case K::Integer: return Type::integer();
    case K::Boolean: return Type::boolean();
    case K::String: return Type::string();
    case K::Float: return Type::float_();
    case K::Rational: return Type::rational();
    case K::Anything: return Type::anything();
    case K::Symbol: return Type::symbol();
    case K::Void: return Type::void_();
    case K::Uneval: return Type::uneval();
    case K::Set:
    case K::List: {
      if (t.args.size() != 1) return fail(t, "type-arity", "collection type takes one argument");
      auto e = go(t.args[0]);
      if (!e) return std::nullopt;
      return t.kind == K::Set ? Type::set(std::move(*e)) : Type::list(std::move(*e));
    }
    case K::Record: {
      auto fs = all(t.args);
      if (!fs) return std::nullopt;
      return Type::record(std::move(*fs));
    }
    case K::Procedure: {
      if (t.args.empty()) return fail(t, "type-arity", "procedure type needs a return type");
      auto ret = go(t.args[0]);
      auto ps = all(t.args, 1);
      if (!ret || !ps) return std::nullopt;
      return Type::procedure(std::move(*ret), std::move(*ps));
    }
    case K::Tagged: {
      auto fs = all(t.args);
      if (!fs) return std::nullopt;
      return Type::tagged(t.name, std::move(*fs));
    }
    case K::Or: {
      if (t.args.size() < 2) return fail(t, "type-arity", "Or needs at least two alternatives");
      auto ms = all(t.args);
      if (!ms) return std::nullopt;
      return Type::union_of(std::move(*ms));
    }
    case K::Named: {
      if (table.abstract.count(t.name)) return Type::abstract(t.name);
      auto it = table.named.find(t.name);
      if (it == table.named.end()) {
        return fail(t, "unknown-type", "unknown type name '" + t.name + "'");
      }
      if (std::find(stack.begin(), stack.end(), t.name) != stack.end()) {
        return fail(t, "recursive-type", "named type '" + t.name + "' is defined in terms of itself");
      }
      stack.push_back(t.name);
      auto r = go(it->second);
      stack.pop_back();
      return r;
    }
    }
    return std::nullopt;
  }
};

} // namespace

Resolved resolve(const TypeExpr &t, const NamedTypeTable &table) {
  Resolver r{table, {}, std::nullopt};
  auto type = r.go(t);
  if (!type) return Resolved{std::nullopt, r.error};
  return Resolved{std::move(type), std::nullopt};
}

} // namespace minimaple
