#include "momlim/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace momlim {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MOMLIM_LOG");
        if (env == nullptr) return LogLevel::Off;
        const std::string_view v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Off;
    }();
    return level;
}

void log_info(const std::string& message) {
    if (log_level() >= LogLevel::Info) std::cerr << "[momlim] " << message << '\n';
}

void log_debug(const std::string& message) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[momlim:debug] " << message << '\n';
}

} // namespace momlim
