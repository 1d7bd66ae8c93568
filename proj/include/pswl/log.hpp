#pragma once

#include <cstdio>
#include <string_view>

namespace pswl::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Reads PSWL_LOG once; defaults to warn.
Level threshold();

void write(Level lvl, std::string_view msg);

inline void error(std::string_view m) { write(Level::Error, m); }
inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void debug(std::string_view m) { write(Level::Debug, m); }

}  // namespace pswl::log
