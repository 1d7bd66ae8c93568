#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace pswl {

// Parses the TOML subset used by config files: [tables] and [dotted.tables],
// bare keys, basic/literal strings, integers, floats, booleans and (nested,
// multi-line) arrays. Throws ConfigError with the offending line number.
nlohmann::json parse_toml(std::string_view text);

}  // namespace pswl
