#include "decomplab/interp/value.hpp"

#include <bit>
#include <charconv>

namespace decomplab {

bool operator==(const Value &a, const Value &b) {
  if (a.data.index() != b.data.index())
    return false;
  if (a.is_float())
    return std::bit_cast<std::uint64_t>(a.as_float()) ==
           std::bit_cast<std::uint64_t>(b.as_float());
  return a.data == b.data;
}

std::string_view kind_name(const Value &v) noexcept {
  switch (v.data.index()) {
  case 0:
    return "int";
  case 1:
    return "float";
  case 2:
    return "bool";
  case 3:
    return "string";
  default:
    return "list";
  }
}

std::string format_value(const Value &v) {
  switch (v.data.index()) {
  case 0:
    return std::to_string(v.as_int());
  case 1: {
    // to_chars with a precision rounds the exact binary value, ties to even.
    char buf[400];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.as_float(),
                                   std::chars_format::fixed, 6);
    return std::string(buf, end);
  }
  case 2:
    return v.as_bool() ? "true" : "false";
  case 3:
    return v.as_str();
  default: {
    std::string out = "[";
    const auto &items = v.as_list();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i)
        out += ", ";
      out += format_value(items[i]);
    }
    return out + "]";
  }
  }
}

bool conforms(const Value &v, Type t) noexcept {
  switch (t) {
  case Type::Int:
    return v.is_int();
  case Type::Float:
    return v.is_float() || v.is_int();
  case Type::Bool:
    return v.is_bool();
  case Type::String:
    return v.is_str();
  case Type::List:
    return v.is_list();
  case Type::Void:
    return false;
  }
  return false;
}

Value coerce(Value v, Type t) {
  if (t == Type::Float && v.is_int())
    return Value(static_cast<double>(v.as_int()));
  return v;
}

} // namespace decomplab
