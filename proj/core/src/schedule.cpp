#include "momlim/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace momlim {

StepSchedule::StepSchedule(ScheduleKind kind, double eta, double alpha, double gamma)
    : kind_(kind), eta_(eta), alpha_(alpha), gamma_(gamma) {}

StepSchedule StepSchedule::constant(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("schedule: eta must be > 0");
    return StepSchedule(ScheduleKind::Constant, eta, 0.0, 0.0);
}

StepSchedule StepSchedule::polynomial(double eta, double alpha) {
    if (!(eta > 0.0)) throw std::invalid_argument("schedule: eta must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("schedule: alpha must be > 0");
    return StepSchedule(ScheduleKind::Polynomial, eta, alpha, 0.0);
}

StepSchedule StepSchedule::exponential(double eta, double gamma) {
    if (!(eta > 0.0)) throw std::invalid_argument("schedule: eta must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("schedule: gamma must be in (0, 1)");
    return StepSchedule(ScheduleKind::Exponential, eta, 0.0, gamma);
}

double StepSchedule::step_at(long t) const {
    if (t < 1) throw std::invalid_argument("step_at: round index must be >= 1");
    switch (kind_) {
    case ScheduleKind::Constant:
        return eta_;
    case ScheduleKind::Polynomial:
        // t^alpha via exp(alpha ln t); the first round returns eta exactly.
        if (t == 1) return eta_;
        return eta_ / std::exp(alpha_ * std::log(static_cast<double>(t)));
    case ScheduleKind::Exponential:
        return eta_ * std::pow(gamma_, static_cast<double>(t));
    }
    return eta_;
}

} // namespace momlim
