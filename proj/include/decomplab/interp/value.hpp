#ifndef DECOMPLAB_INTERP_VALUE_HPP
#define DECOMPLAB_INTERP_VALUE_HPP

#include "decomplab/lang/ast.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace decomplab {

/// Runtime value. Lists have value semantics: assignment copies.
struct Value {
  using List = std::vector<Value>;
  std::variant<std::int64_t, double, bool, std::string, List> data;

  Value() = default;
  Value(std::int64_t v) : data(v) {}
  Value(int v) : data(static_cast<std::int64_t>(v)) {}
  Value(double v) : data(v) {}
  Value(bool v) : data(v) {}
  Value(std::string v) : data(std::move(v)) {}
  Value(const char *v) : data(std::string(v)) {}
  Value(List v) : data(std::move(v)) {}

  bool is_int() const noexcept { return data.index() == 0; }
  bool is_float() const noexcept { return data.index() == 1; }
  bool is_bool() const noexcept { return data.index() == 2; }
  bool is_str() const noexcept { return data.index() == 3; }
  bool is_list() const noexcept { return data.index() == 4; }

  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  double as_float() const { return std::get<double>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  const std::string &as_str() const { return std::get<std::string>(data); }
  const List &as_list() const { return std::get<List>(data); }
  List &as_list() { return std::get<List>(data); }

  /// Exact equality; floats compare bit-for-bit.
  friend bool operator==(const Value &a, const Value &b);
};

std::string_view kind_name(const Value &v) noexcept;

/// Print formatting: decimal ints, "true"/"false", raw strings, floats with
/// exactly six fractional digits, lists as "[a, b]".
std::string format_value(const Value &v);

/// True if `v` can be bound to a parameter of type `t` (ints widen to float).
bool conforms(const Value &v, Type t) noexcept;

/// Applies the int-to-float widening used when binding parameters.
Value coerce(Value v, Type t);

} // namespace decomplab

#endif // DECOMPLAB_INTERP_VALUE_HPP
