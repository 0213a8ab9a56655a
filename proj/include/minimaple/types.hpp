// minimaple/types.hpp - Semantic types and the environment algebra.
//
// Types form a lattice under is_subtype with `anything` on top:
//   integer <= rational <= anything
//   float, boolean, string, symbol, uneval, void sit directly below anything
//   list/set covariant, records pointwise covariant at equal arity,
//   procedures contravariant in arguments and covariant in the result.
// Unions are kept normalized (flat, deduplicated, no member subsumed by
// another, canonically ordered), so structural equality decides type equality.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minimaple/ast.hpp"
#include "minimaple/diagnostic.hpp"

namespace minimaple {

class Type {
public:
  enum class Kind {
    Integer,
    Boolean,
    String,
    Float,
    Rational,
    Anything,
    Set,
    List,
    Record,
    Procedure,
    Tagged,
    Union,
    Symbol,
    Void,
    Uneval,
    Named,
    Abstract,
  };

  Type() : kind_(Kind::Anything) {}

  static Type integer() { return Type(Kind::Integer); }
  static Type boolean() { return Type(Kind::Boolean); }
  static Type string() { return Type(Kind::String); }
  static Type float_() { return Type(Kind::Float); }
  static Type rational() { return Type(Kind::Rational); }
  static Type anything() { return Type(Kind::Anything); }
  static Type symbol() { return Type(Kind::Symbol); }
  static Type void_() { return Type(Kind::Void); }
  static Type uneval() { return Type(Kind::Uneval); }
  static Type set(Type elem);
  static Type list(Type elem);
  static Type record(std::vector<Type> fields);
  static Type procedure(Type ret, std::vector<Type> args);
  static Type tagged(std::string name, std::vector<Type> args);
  static Type named(std::string name);
  static Type abstract(std::string name);

  // Normalizing union constructor. `members` must be non-empty. Returns the
  // single surviving member bare, and `anything` when any member is anything.
  static Type union_of(std::vector<Type> members);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  const std::string &name() const { return name_; }

  const Type &elem() const { return parts_.at(0); }          // Set, List
  const Type &ret() const { return parts_.at(0); }           // Procedure
  std::span<const Type> params() const {                     // Procedure
    return std::span<const Type>(parts_).subspan(1);
  }
  const std::vector<Type> &fields() const { return parts_; }  // Record, Tagged
  const std::vector<Type> &members() const { return parts_; } // Union

  friend bool operator==(const Type &a, const Type &b);
  friend std::strong_ordering operator<=>(const Type &a, const Type &b);

private:
  explicit Type(Kind k) : kind_(k) {}
  Type(Kind k, std::string name, std::vector<Type> parts)
      : kind_(k), name_(std::move(name)), parts_(std::move(parts)) {}

  Kind kind_;
  std::string name_;
  std::vector<Type> parts_;
};

// Surface syntax, e.g. `procedure[[integer,float]](list(Or(integer,float)))`.
std::string to_string(const Type &t);

bool is_subtype(const Type &a, const Type &b);

// Least common supertype: the larger of two comparable types, otherwise
// their union.
Type super_type(const Type &a, const Type &b);

// True iff `a` is a supertype of `b`.
inline bool super_type_pred(const Type &a, const Type &b) { return is_subtype(b, a); }

// Whether some value could inhabit both types.
bool may_overlap(const Type &a, const Type &b);

// Removes the tested alternatives from a union. nullopt means nothing is
// left, i.e. the test always succeeds.
std::optional<Type> subtract(const Type &t, const Type &tested);

bool is_numeric(const Type &t); // every inhabitant is a number

// ---------------------------------------------------------------------------

// Partial map from identifiers to types. Iteration follows first-binding
// order; rebinding keeps the original position. Equality ignores order.
class TypeEnv {
public:
  using Entry = std::pair<std::string, Type>;

  TypeEnv() = default;
  TypeEnv(std::initializer_list<Entry> entries);

  const Type *find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  void bind(const std::string &name, Type t);
  void erase(std::string_view name);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const TypeEnv &a, const TypeEnv &b);

private:
  std::vector<Entry> entries_;
};

std::string to_string(const TypeEnv &env);

bool can_specialize(const TypeEnv &pi, const TypeEnv &pi2);
TypeEnv specialize(const TypeEnv &pi, const TypeEnv &pi2);
TypeEnv combine(const TypeEnv &pi1, const TypeEnv &pi2);

// ---------------------------------------------------------------------------

// User type declarations: `type/I`:=T; (named) and `type/I`; (abstract).
struct NamedTypeTable {
  std::map<std::string, TypeExpr> named;
  std::set<std::string> abstract;
};

struct Resolved {
  std::optional<Type> type;
  std::optional<Diagnostic> error;
};

// Replaces named references by their definitions. Fails on unknown names
// and on cyclic definitions.
Resolved resolve(const TypeExpr &t, const NamedTypeTable &table);

} // namespace minimaple
