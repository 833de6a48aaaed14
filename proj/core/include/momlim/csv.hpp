#pragma once

#include <string>

namespace momlim {

/// Shortest round-trip scientific representation of a binary64 value
/// (std::to_chars), so emitted CSV is byte-stable across platforms.
std::string format_double(double value);

} // namespace momlim
