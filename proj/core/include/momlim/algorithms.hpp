#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "momlim/problem.hpp"
#include "momlim/schedule.hpp"

namespace momlim {

enum class Algorithm { FedAvgM, FedCM };

/// Federated optimizer configuration. Plain averaging / incremental gradient
/// descent is the beta = 0 special case, not a separate variant.
struct AlgoConfig {
    Algorithm algorithm = Algorithm::FedAvgM;
    double beta = 0.0;      ///< momentum factor in [0, 1)
    int local_steps = 1;    ///< J >= 1
    double eta_local = 1.0; ///< local step-size > 0
    StepSchedule schedule = StepSchedule::constant(0.5);
};

/// One-round closed-form coefficients: theta^t = p theta^(t-1)
/// + (-1)^t q G - r theta^(t-2) on the two-block construction.
struct RoundCoefficients {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

/// Coefficients at round t. With a single local step the two algorithms
/// coincide and share one reduced form (p = 1 + beta - mu*(1-beta)*eta_t*eta_l,
/// q = (1-beta)*eta_t*eta_l, r = beta).
RoundCoefficients coefficients(const AlgoConfig& config, double mu, long t);

/// Runs the configured number of local gradient steps on one client from
/// theta_start. FedCM adds the frozen server-difference correction
/// (beta/J)/eta_t * (theta_start - theta_prev2) to every local step.
double local_unroll(const QuadraticClient& client, double theta_start,
                    const AlgoConfig& config, long t, double theta_prev2);

/// Closed-form server round on a two-block problem. flip_phase swaps which
/// block is met at odd rounds; no claim is attached to the flipped phase.
double round_update(double theta_prev, double theta_prev2,
                    const FederationProblem& problem, const AlgoConfig& config,
                    long t, bool flip_phase = false);

struct Checkpoint {
    long t = 0;
    double theta = 0.0;
    double f_gap = 0.0; ///< f(theta) - f(theta*)
};

struct Trajectory {
    std::vector<Checkpoint> checkpoints;
    double terminal_theta = 0.0;
    long terminal_t = 0;
};

/// Which rounds a simulation records.
class RecordPolicy {
public:
    enum class Kind { LogSpaced, EveryRound, FinalOnly };

    /// Every round up to 100, then pairs (m, m+1) at the rounds nearest
    /// 100*10^(k/20), plus the final two rounds. The paired successor makes
    /// the sign-flip envelope max(|theta^t|, |theta^(t+1)|) computable.
    static RecordPolicy log_spaced() { return RecordPolicy(Kind::LogSpaced); }
    static RecordPolicy every_round() { return RecordPolicy(Kind::EveryRound); }
    static RecordPolicy final_only() { return RecordPolicy(Kind::FinalOnly); }

    /// Sorted unique rounds in [1, horizon]; always contains the horizon.
    std::vector<long> rounds(long horizon) const;

    Kind kind() const { return kind_; }
    std::string name() const;

private:
    explicit RecordPolicy(Kind kind) : kind_(kind) {}
    Kind kind_;
};

/// Simulates theta^1 = theta^0 = theta0, then round_update for t = 2..horizon.
/// Deterministic; throws DivergenceError when |theta| exceeds 1e300.
Trajectory simulate(const FederationProblem& problem, const AlgoConfig& config,
                    long horizon, double theta0,
                    const RecordPolicy& policy = RecordPolicy::log_spaced(),
                    bool flip_phase = false);

struct QtOrderingSample {
    double mu, beta, eta_local, eta_t;
    int local_steps;
    double q_fedcm, q_fedavgm, q_floor;
};

struct QtOrderingReport {
    long samples = 0;
    long violations = 0;
    std::vector<QtOrderingSample> violating; ///< at most 32 kept
};

/// Samples admissible parameters (0 < mu*eta_l < 1, beta in [0,1)) and checks
/// q_fedcm >= q_fedavgm >= eta_t*eta_l*(1-beta) on every draw.
QtOrderingReport qt_ordering_check(double mu_lo, double mu_hi, int max_local_steps,
                                   long samples, std::uint64_t seed);

} // namespace momlim
