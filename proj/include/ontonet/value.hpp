#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace ontonet {

/// Property targets and rule-variable values: a Boolean literal, a number
/// (timestamps, durations) or a symbol naming an instance.
using Value = std::variant<bool, std::int64_t, std::string>;

inline bool is_number(const Value& v) noexcept { return std::holds_alternative<std::int64_t>(v); }
inline bool is_symbol(const Value& v) noexcept { return std::holds_alternative<std::string>(v); }

/// `true`/`false`, decimal numbers, bare symbols.
std::string to_string(const Value& v);

}  // namespace ontonet
