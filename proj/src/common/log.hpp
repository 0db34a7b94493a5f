#pragma once

#include <string>

// Verbosity is read once from LIFT_LOG (quiet | info | debug); default info.
namespace lift::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

Level level();
void set_level(Level level);

void info(const std::string& message);
void debug(const std::string& message);
void warn(const std::string& message);

}  // namespace lift::log
