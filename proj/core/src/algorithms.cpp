#include "momlim/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momlim/errors.hpp"
#include "momlim/rng.hpp"

namespace momlim {

namespace {

// Geometric sum S = sum_{j=0..J-1} (1-x)^j and the final power (1-x)^J by
// iterative accumulation; the ratio formula would hit 0/0 as x -> 0.
struct GeomSum {
    double sum;
    double last_power;
};

GeomSum geometric_sum(double x, int steps) {
    double sum = 0.0;
    double pw = 1.0;
    for (int j = 0; j < steps; ++j) {
        sum += pw;
        pw *= (1.0 - x);
    }
    return {sum, pw};
}

void check_config(const AlgoConfig& config) {
    if (!(config.beta >= 0.0 && config.beta < 1.0))
        throw std::invalid_argument("algo config: beta must be in [0, 1)");
    if (config.local_steps < 1)
        throw std::invalid_argument("algo config: local steps must be >= 1");
    if (!(config.eta_local > 0.0))
        throw std::invalid_argument("algo config: eta_local must be > 0");
}

} // namespace

RoundCoefficients coefficients(const AlgoConfig& config, double mu, long t) {
    check_config(config);
    if (t < 1) throw std::invalid_argument("coefficients: round index must be >= 1");
    const double eta_t = config.schedule.step_at(t);
    const double one_minus_beta = 1.0 - config.beta;

    if (config.local_steps == 1) {
        // Single local step: both algorithms reduce to the same update with
        // effective step eta_t * eta_local.
        const double damped = eta_t * config.eta_local * one_minus_beta;
        return {1.0 + config.beta - mu * damped, damped, config.beta};
    }

    if (config.algorithm == Algorithm::FedAvgM) {
        const auto g = geometric_sum(mu * config.eta_local, config.local_steps);
        const double eta_tilde_t = eta_t * one_minus_beta;
        return {1.0 + config.beta + eta_tilde_t * (g.last_power - 1.0),
                eta_t * config.eta_local * one_minus_beta * g.sum,
                config.beta};
    }

    const double eta_tilde_l = config.eta_local * one_minus_beta;
    const auto g = geometric_sum(mu * eta_tilde_l, config.local_steps);
    const double beta_hat = config.beta / static_cast<double>(config.local_steps);
    return {1.0 + beta_hat * g.sum + eta_t * (g.last_power - 1.0),
            eta_t * config.eta_local * one_minus_beta * g.sum,
            beta_hat * g.sum};
}

double local_unroll(const QuadraticClient& client, double theta_start,
                    const AlgoConfig& config, long t, double theta_prev2) {
    check_config(config);
    double theta = theta_start;
    if (config.algorithm == Algorithm::FedAvgM) {
        for (int j = 0; j < config.local_steps; ++j)
            theta -= config.eta_local * (client.mu * theta + client.b);
        return theta;
    }
    // FedCM: damped local step plus the server-difference correction, frozen
    // across the local pass.
    const double eta_tilde_l = config.eta_local * (1.0 - config.beta);
    const double beta_hat = config.beta / static_cast<double>(config.local_steps);
    const double eta_t = config.schedule.step_at(t);
    const double correction = beta_hat / eta_t * (theta_start - theta_prev2);
    for (int j = 0; j < config.local_steps; ++j)
        theta += -eta_tilde_l * (client.mu * theta + client.b) + correction;
    return theta;
}

namespace {

inline double step_two_block(double theta_prev, double theta_prev2,
                             const TwoBlockView& view, const RoundCoefficients& c,
                             long t, bool flip_phase) {
    // The (-1)^t input sign meets the +deviation block at odd rounds.
    double sign = (t % 2 == 0) ? 1.0 : -1.0;
    if (flip_phase) sign = -sign;
    const double input = sign * c.q * view.block_deviation;
    if (view.optimum == 0.0)
        return c.p * theta_prev + input - c.r * theta_prev2;
    // Translated constructions follow the same recurrence about the optimum.
    return view.optimum + (c.p * (theta_prev - view.optimum) + input -
                           c.r * (theta_prev2 - view.optimum));
}

} // namespace

double round_update(double theta_prev, double theta_prev2,
                    const FederationProblem& problem, const AlgoConfig& config,
                    long t, bool flip_phase) {
    if (t < 1) throw std::invalid_argument("round_update: round index must be >= 1");
    const TwoBlockView view = two_block_view(problem);
    const RoundCoefficients c = coefficients(config, view.mu, t);
    return step_two_block(theta_prev, theta_prev2, view, c, t, flip_phase);
}

std::vector<long> RecordPolicy::rounds(long horizon) const {
    std::vector<long> out;
    if (horizon < 1) return out;
    switch (kind_) {
    case Kind::EveryRound:
        out.reserve(static_cast<std::size_t>(horizon));
        for (long t = 1; t <= horizon; ++t) out.push_back(t);
        return out;
    case Kind::FinalOnly:
        if (horizon > 1) out.push_back(horizon - 1);
        out.push_back(horizon);
        return out;
    case Kind::LogSpaced:
        break;
    }
    for (long t = 1; t <= std::min<long>(100, horizon); ++t) out.push_back(t);
    for (int k = 1;; ++k) {
        const double mark = 100.0 * std::pow(10.0, static_cast<double>(k) / 20.0);
        if (mark >= static_cast<double>(horizon)) break;
        const long m = std::lround(mark);
        if (m >= horizon) break;
        out.push_back(m);
        if (m + 1 <= horizon) out.push_back(m + 1);
    }
    if (horizon > 1) out.push_back(horizon - 1);
    out.push_back(horizon);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string RecordPolicy::name() const {
    switch (kind_) {
    case Kind::LogSpaced: return "log";
    case Kind::EveryRound: return "all";
    case Kind::FinalOnly: return "final";
    }
    return "log";
}

Trajectory simulate(const FederationProblem& problem, const AlgoConfig& config,
                    long horizon, double theta0, const RecordPolicy& policy,
                    bool flip_phase) {
    if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
    const TwoBlockView view = two_block_view(problem);
    check_config(config);

    const std::vector<long> marks = policy.rounds(horizon);
    Trajectory traj;
    traj.checkpoints.reserve(marks.size());
    std::size_t next_mark = 0;
    auto record = [&](long t, double theta) {
        while (next_mark < marks.size() && marks[next_mark] == t) {
            traj.checkpoints.push_back({t, theta, problem.optimality_gap(theta)});
            ++next_mark;
        }
    };

    double theta_prev2 = theta0; // theta^0
    double theta_prev = theta0;  // theta^1 := theta^0
    record(1, theta_prev);
    for (long t = 2; t <= horizon; ++t) {
        const RoundCoefficients c = coefficients(config, view.mu, t);
        const double theta = step_two_block(theta_prev, theta_prev2, view, c, t, flip_phase);
        if (std::abs(theta) > 1e300) throw DivergenceError(t, std::abs(theta));
        theta_prev2 = theta_prev;
        theta_prev = theta;
        record(t, theta);
    }
    traj.terminal_theta = theta_prev;
    traj.terminal_t = horizon;
    return traj;
}

QtOrderingReport qt_ordering_check(double mu_lo, double mu_hi, int max_local_steps,
                                   long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("qt_ordering_check: samples must be >= 1");
    QtOrderingReport report;
    report.samples = samples;
    for (long i = 0; i < samples; ++i) {
        SplitMix64 rng = SplitMix64::for_index(seed, static_cast<std::uint64_t>(i));
        const double mu = rng.uniform(mu_lo, mu_hi);
        const double beta = rng.uniform(0.0, 0.999);
        const int J = static_cast<int>(rng.uniform_int(1, max_local_steps));
        // Admissible box: 0 < mu eta_l < 1 (then mu eta_l (1-beta) < 1 too).
        const double eta_local = rng.uniform(1e-6, 0.999) / mu;
        const double eta_t = rng.uniform(1e-3, 10.0);
        const StepSchedule sched = StepSchedule::constant(eta_t);

        AlgoConfig avgm{Algorithm::FedAvgM, beta, J, eta_local, sched};
        AlgoConfig cm{Algorithm::FedCM, beta, J, eta_local, sched};
        const double q_avgm = coefficients(avgm, mu, 1).q;
        const double q_cm = coefficients(cm, mu, 1).q;
        const double floor = eta_t * eta_local * (1.0 - beta);

        const double slack = 1e-15 * std::max({q_cm, q_avgm, floor});
        if (q_cm + slack < q_avgm || q_avgm + slack < floor) {
            ++report.violations;
            if (report.violating.size() < 32)
                report.violating.push_back(
                    {mu, beta, eta_local, eta_t, J, q_cm, q_avgm, floor});
        }
    }
    return report;
}

} // namespace momlim
