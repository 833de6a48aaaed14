#pragma once

namespace momlim {

enum class ScheduleKind { Constant, Polynomial, Exponential };

/// Server step-size rule eta_t.
///   Constant:    eta
///   Polynomial:  eta / t^alpha
///   Exponential: eta * gamma^t
class StepSchedule {
public:
    static StepSchedule constant(double eta);
    static StepSchedule polynomial(double eta, double alpha);
    static StepSchedule exponential(double eta, double gamma);

    /// Step at round t >= 1; throws std::invalid_argument for t < 1.
    double step_at(long t) const;

    ScheduleKind kind() const { return kind_; }
    double eta() const { return eta_; }
    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }

private:
    StepSchedule(ScheduleKind kind, double eta, double alpha, double gamma);

    ScheduleKind kind_ = ScheduleKind::Constant;
    double eta_ = 0.0;
    double alpha_ = 0.0;
    double gamma_ = 0.0;
};

} // namespace momlim
