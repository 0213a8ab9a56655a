// minimaple/value.hpp - Runtime values and states.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "minimaple/ast.hpp"
#include "minimaple/types.hpp"

namespace minimaple {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct Frame;
struct Value;

struct IntVal {
  BigInt v;
};
struct FloatVal {
  double v = 0;
};
// Always in lowest terms with a denominator above 1; whole results are IntVal.
struct RationalVal {
  BigRational v;
};
struct BoolVal {
  bool v = false;
};
struct StringVal {
  std::string v;
};
struct SymbolVal {
  std::string name;
};
struct ListVal {
  std::vector<Value> items;
};
// Deduplicated, canonical order.
struct SetVal {
  std::vector<Value> items;
};
struct RecordVal {
  std::vector<Value> items;
};
struct TaggedVal {
  std::string name;
  std::vector<Value> items;
};
struct ProcVal {
  const ProcDef *def = nullptr;
  std::shared_ptr<Frame> scope; // static link; null at top level
};
struct UnevalVal {
  const Expr *expr = nullptr;
};
struct VoidVal {};

struct Value {
  using Node = std::variant<IntVal, FloatVal, RationalVal, BoolVal, StringVal, SymbolVal, ListVal,
                            SetVal, RecordVal, TaggedVal, ProcVal, UnevalVal, VoidVal>;
  Node node;

  template <class T>
  const T *as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

Value make_int(BigInt v);
Value make_float(double v);
Value make_rational(BigRational v); // IntVal when whole
Value make_bool(bool v);
Value make_string(std::string v);
Value make_symbol(std::string name);
Value make_list(std::vector<Value> items);
Value make_set(std::vector<Value> items); // normalizes
Value make_record(std::vector<Value> items);

bool is_number(const Value &v);
std::optional<double> to_double(const Value &v);
std::optional<BigRational> to_exact(const Value &v); // Int and Rational only

// Language equality: numbers compare by value (1 = 1.0), lists and records
// compare element-wise, everything else structurally.
bool values_equal(const Value &a, const Value &b);

// Identity including representation (1 and 1.0 differ). Used for state
// comparison and set canonicalization.
bool same_value(const Value &a, const Value &b);

// `%.10g` with a trailing `.0` for whole floats, e.g. 12849.76224 and 1.0.
std::string format_float(double v);
std::string to_string(const Value &v);

// Runtime membership of a value in a resolved type.
bool has_type(const Value &v, const Type &t);

// Converts a list to a record when `t` is a record type of the same arity.
Value coerce_to(Value v, const Type &t);

// ---------------------------------------------------------------------------

struct Frame {
  std::map<std::string, Value> vars;
  std::map<std::string, Type> declared; // annotated params and locals
  std::set<std::string> globals;        // names declared `global`
  std::shared_ptr<Frame> parent;        // static link
};

struct State {
  std::map<std::string, Value> globals;
  std::vector<std::shared_ptr<Frame>> frames; // innermost last

  // Copy whose frames are distinct objects, so evaluating against it cannot
  // disturb the original.
  State snapshot() const;
};

// Compares globals and the variables of every frame.
bool same_state(const State &a, const State &b);

struct RuntimeError {
  std::string message;
  std::optional<std::string> label;
  SourceSpan span;

  friend bool operator==(const RuntimeError &, const RuntimeError &) = default;
};

std::string format_error(const RuntimeError &e);

using StateU = std::variant<State, RuntimeError>;
using ValueU = std::variant<Value, RuntimeError>;

inline bool is_error(const StateU &s) { return std::holds_alternative<RuntimeError>(s); }

} // namespace minimaple
