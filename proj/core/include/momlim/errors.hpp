#pragma once

#include <stdexcept>
#include <string>

namespace momlim {

/// Iterate magnitude exceeded the divergence guard; carries the failing round.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long round, double magnitude)
        : std::runtime_error("divergence at round " + std::to_string(round) +
                             " (|theta| = " + std::to_string(magnitude) + ")"),
          round_(round) {}

    long round() const noexcept { return round_; }

private:
    long round_;
};

/// The problem does not have the two-block cyclic structure the closed-form
/// round update requires.
class UnsupportedConstruction : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace momlim
