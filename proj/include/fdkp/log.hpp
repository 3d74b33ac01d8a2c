#pragma once

#include <string_view>

// Minimal stderr logger. The level comes from the FDKP_LOG environment
// variable (error, warn, info, debug); default is warn.
namespace fdkp::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level level();
void set_level(Level level);

void error(std::string_view message);
void warn(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

}  // namespace fdkp::log
