#pragma once

#include "momlim/algorithms.hpp"

namespace momlim {

/// Least-squares fit of log envelope against log t. The envelope at a
/// checkpoint t is max(|theta^t|, |theta^(t+1)|), which removes the period-2
/// sign flip; it needs the successor round, so only checkpoints recorded as
/// adjacent pairs contribute.
struct RateFit {
    double t_min = 0.0;
    double t_max = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    bool plateau = false;        ///< |slope| < 0.02 and envelope varies < 1e-3 relative
    double plateau_value = 0.0;  ///< mean envelope over the window
};

/// Throws std::invalid_argument when fewer than 10 usable envelope points
/// fall inside [t_min, t_max].
RateFit fit_rate(const Trajectory& trajectory, double t_min, double t_max);

} // namespace momlim
