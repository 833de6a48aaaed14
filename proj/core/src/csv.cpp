#include "momlim/csv.hpp"

#include <charconv>

namespace momlim {

std::string format_double(double value) {
    char buffer[48];
    auto [ptr, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific);
    (void)ec;
    return std::string(buffer, ptr);
}

} // namespace momlim
