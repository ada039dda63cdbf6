#pragma once

#include <string_view>

namespace obd {

enum class LogLevel { kOff = 0, kInfo = 1, kDebug = 2 };

// Level read once from the OBD_LOG environment variable (off | info | debug); default off.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_info(std::string_view message);
void log_debug(std::string_view message);

}  // namespace obd
