#pragma once

namespace momlim {

/// Compensated accumulator. Tracks the rounding error of each addition and
/// feeds it back into the next one; alternating series keep full precision.
struct KahanAccumulator {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        const double y = value - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }

    KahanAccumulator& operator+=(double value) {
        add(value);
        return *this;
    }

    operator double() const { return sum; }
};

} // namespace momlim
