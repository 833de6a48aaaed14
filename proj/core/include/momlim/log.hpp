#pragma once

#include <string>

namespace momlim {

enum class LogLevel { Off = 0, Info = 1, Debug = 2 };

/// Level from the MOMLIM_LOG environment variable (off|info|debug), read once.
LogLevel log_level();

/// Diagnostics go to standard error only; data output never does.
void log_info(const std::string& message);
void log_debug(const std::string& message);

} // namespace momlim
