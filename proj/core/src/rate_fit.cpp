#include "momlim/rate_fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace momlim {

RateFit fit_rate(const Trajectory& trajectory, double t_min, double t_max) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("fit_rate: need 0 < t_min < t_max");

    // Envelope points come from checkpoints recorded as adjacent pairs.
    std::vector<double> log_t, log_env, env;
    const auto& cps = trajectory.checkpoints;
    for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
        if (cps[i + 1].t != cps[i].t + 1) continue;
        const double t = static_cast<double>(cps[i].t);
        if (t < t_min || t > t_max) continue;
        const double e = std::max(std::abs(cps[i].theta), std::abs(cps[i + 1].theta));
        if (!(e > 0.0)) continue; // identically-zero stretches carry no slope
        log_t.push_back(std::log(t));
        log_env.push_back(std::log(e));
        env.push_back(e);
    }
    if (log_t.size() < 10)
        throw std::invalid_argument(
            "fit_rate: fewer than 10 usable envelope points inside the window (" +
            std::to_string(log_t.size()) + ")");

    const std::size_t n = log_t.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += log_t[i];
        mean_y += log_env[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = log_t[i] - mean_x;
        const double dy = log_env[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    RateFit fit;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.points_used = static_cast<int>(n);
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;

    double env_min = env.front(), env_max = env.front(), env_sum = 0.0;
    for (double e : env) {
        env_min = std::min(env_min, e);
        env_max = std::max(env_max, e);
        env_sum += e;
    }
    fit.plateau_value = env_sum / static_cast<double>(n);
    fit.plateau = std::abs(fit.slope) < 0.02 && (env_max - env_min) / env_max < 1e-3;
    return fit;
}

} // namespace momlim
