// value.cpp - runtime value helpers
#include "minimaple/value.hpp"

#include <algorithm>
#include <cstdio>

#include "minimaple/printer.hpp"

namespace minimaple {

Value make_int(BigInt v) { return Value{IntVal{std::move(v)}}; }
Value make_float(double v) { return Value{FloatVal{v}}; }

Value make_rational(BigRational v) {
  if (boost::multiprecision::denominator(v) == 1) {
    return make_int(boost::multiprecision::numerator(v));
  }
  return Value{RationalVal{std::move(v)}};
}

Value make_bool(bool v) { return Value{BoolVal{v}}; }
Value make_string(std::string v) { return Value{StringVal{std::move(v)}}; }
Value make_symbol(std::string name) { return Value{SymbolVal{std::move(name)}}; }
Value make_list(std::vector<Value> items) { return Value{ListVal{std::move(items)}}; }
Value make_record(std::vector<Value> items) { return Value{RecordVal{std::move(items)}}; }

Value make_set(std::vector<Value> items) {
  std::vector<Value> kept;
  for (auto &v : items) {
    bool dup = std::any_of(kept.begin(), kept.end(), [&](const Value &k) { return same_value(k, v); });
    if (!dup) kept.push_back(std::move(v));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Value &a, const Value &b) {
    if (a.node.index() != b.node.index()) return a.node.index() < b.node.index();
    return to_string(a) < to_string(b);
  });
  return Value{SetVal{std::move(kept)}};
}

bool is_number(const Value &v) {
  return v.is<IntVal>() || v.is<FloatVal>() || v.is<RationalVal>();
}

std::optional<double> to_double(const Value &v) {
  if (auto *i = v.as<IntVal>()) return i->v.convert_to<double>();
  if (auto *f = v.as<FloatVal>()) return f->v;
  if (auto *r = v.as<RationalVal>()) return r->v.convert_to<double>();
  return std::nullopt;
}

std::optional<BigRational> to_exact(const Value &v) {
  if (auto *i = v.as<IntVal>()) return BigRational(i->v);
  if (auto *r = v.as<RationalVal>()) return r->v;
  return std::nullopt;
}

namespace {

const std::vector<Value> *sequence(const Value &v) {
  if (auto *l = v.as<ListVal>()) return &l->items;
  if (auto *r = v.as<RecordVal>()) return &r->items;
  return nullptr;
}

template <class Eq>
bool pointwise(const std::vector<Value> &a, const std::vector<Value> &b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

std::string join(const std::vector<Value> &items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + to_string(items[i]);
  return out;
}

} // namespace

bool values_equal(const Value &a, const Value &b) {
  if (is_number(a) && is_number(b)) {
    auto ea = to_exact(a);
    auto eb = to_exact(b);
    if (ea && eb) return *ea == *eb;
    return *to_double(a) == *to_double(b);
  }
  auto *sa = sequence(a);
  auto *sb = sequence(b);
  if (sa && sb) return pointwise(*sa, *sb, values_equal);
  if (auto *x = a.as<SetVal>(); x && b.is<SetVal>()) {
    const auto &y = b.as<SetVal>()->items;
    if (x->items.size() != y.size()) return false;
    return std::all_of(x->items.begin(), x->items.end(), [&](const Value &v) {
      return std::any_of(y.begin(), y.end(), [&](const Value &w) { return values_equal(v, w); });
    });
  }
  if (auto *x = a.as<TaggedVal>(); x && b.is<TaggedVal>()) {
    const auto *y = b.as<TaggedVal>();
    return x->name == y->name && pointwise(x->items, y->items, values_equal);
  }
  return same_value(a, b);
}

bool same_value(const Value &a, const Value &b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto &x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T &y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntVal> || std::is_same_v<T, FloatVal> ||
                      std::is_same_v<T, RationalVal> || std::is_same_v<T, BoolVal> ||
                      std::is_same_v<T, StringVal>) {
          return x.v == y.v;
        } else if constexpr (std::is_same_v<T, SymbolVal>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ListVal> || std::is_same_v<T, SetVal> ||
                             std::is_same_v<T, RecordVal>) {
          return pointwise(x.items, y.items, same_value);
        } else if constexpr (std::is_same_v<T, TaggedVal>) {
          return x.name == y.name && pointwise(x.items, y.items, same_value);
        } else if constexpr (std::is_same_v<T, ProcVal>) {
          return x.def == y.def && x.scope == y.scope;
        } else if constexpr (std::is_same_v<T, UnevalVal>) {
          return x.expr == y.expr || (x.expr && y.expr && *x.expr == *y.expr);
        } else {
          return true;
        }
      },
      a.node);
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string to_string(const Value &v) {
  return std::visit(
      [](const auto &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntVal>) {
          return x.v.str();
        } else if constexpr (std::is_same_v<T, FloatVal>) {
          return format_float(x.v);
        } else if constexpr (std::is_same_v<T, RationalVal>) {
          return boost::multiprecision::numerator(x.v).str() + "/" +
                 boost::multiprecision::denominator(x.v).str();
        } else if constexpr (std::is_same_v<T, BoolVal>) {
          return x.v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, StringVal>) {
          return "\"" + x.v + "\"";
        } else if constexpr (std::is_same_v<T, SymbolVal>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, ListVal> || std::is_same_v<T, RecordVal>) {
          return "[" + join(x.items) + "]";
        } else if constexpr (std::is_same_v<T, SetVal>) {
          return "{" + join(x.items) + "}";
        } else if constexpr (std::is_same_v<T, TaggedVal>) {
          return x.name + "(" + join(x.items) + ")";
        } else if constexpr (std::is_same_v<T, ProcVal>) {
          return "proc";
        } else if constexpr (std::is_same_v<T, UnevalVal>) {
          return "'" + (x.expr ? pretty_print(*x.expr) : std::string()) + "'";
        } else {
          return "NULL";
        }
      },
      v.node);
}

bool has_type(const Value &v, const Type &t) {
  using K = Type::Kind;
  auto all_items = [&](const std::vector<Value> &items, const Type &elem) {
    return std::all_of(items.begin(), items.end(), [&](const Value &x) { return has_type(x, elem); });
  };
  switch (t.kind()) {
  case K::Anything: return true;
  case K::Integer: return v.is<IntVal>();
  case K::Rational: return v.is<IntVal>() || v.is<RationalVal>();
  case K::Float: return v.is<FloatVal>();
  case K::Boolean: return v.is<BoolVal>();
  case K::String: return v.is<StringVal>();
  case K::Symbol: return v.is<SymbolVal>();
  case K::Void: return v.is<VoidVal>();
  case K::Uneval: return v.is<UnevalVal>();
  case K::List: return v.is<ListVal>() && all_items(v.as<ListVal>()->items, t.elem());
  case K::Set: return v.is<SetVal>() && all_items(v.as<SetVal>()->items, t.elem());
  case K::Record: {
    auto *items = sequence(v);
    if (!items || items->size() != t.fields().size()) return false;
    for (std::size_t i = 0; i < items->size(); ++i) {
      if (!has_type((*items)[i], t.fields()[i])) return false;
    }
    return true;
  }
  case K::Procedure: return v.is<ProcVal>();
  case K::Tagged: {
    auto *tv = v.as<TaggedVal>();
    if (!tv || tv->name != t.name() || tv->items.size() != t.fields().size()) return false;
    for (std::size_t i = 0; i < tv->items.size(); ++i) {
      if (!has_type(tv->items[i], t.fields()[i])) return false;
    }
    return true;
  }
  case K::Union:
    return std::any_of(t.members().begin(), t.members().end(),
                       [&](const Type &m) { return has_type(v, m); });
  case K::Named:
  case K::Abstract: return false;
  }
  return false;
}

Value coerce_to(Value v, const Type &t) {
  if (!t.is(Type::Kind::Record)) return v;
  auto *l = v.as<ListVal>();
  if (!l || l->items.size() != t.fields().size()) return v;
  std::vector<Value> items;
  for (std::size_t i = 0; i < l->items.size(); ++i) items.push_back(coerce_to(l->items[i], t.fields()[i]));
  return make_record(std::move(items));
}

State State::snapshot() const {
  State copy;
  copy.globals = globals;
  std::map<const Frame *, std::shared_ptr<Frame>> remap;
  for (const auto &f : frames) {
    auto c = std::make_shared<Frame>(*f);
    remap[f.get()] = c;
    copy.frames.push_back(c);
  }
  for (auto &f : copy.frames) {
    if (f->parent) {
      if (auto it = remap.find(f->parent.get()); it != remap.end()) f->parent = it->second;
    }
  }
  return copy;
}

namespace {

bool same_vars(const std::map<std::string, Value> &a, const std::map<std::string, Value> &b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !same_value(ia->second, ib->second)) return false;
  }
  return true;
}

} // namespace

bool same_state(const State &a, const State &b) {
  if (!same_vars(a.globals, b.globals) || a.frames.size() != b.frames.size()) return false;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    if (!same_vars(a.frames[i]->vars, b.frames[i]->vars)) return false;
  }
  return true;
}

std::string format_error(const RuntimeError &e) {
  std::string out = e.message;
  if (e.label) out += " (" + *e.label + ")";
  return out;
}

} // namespace minimaple
