#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "momlim/config.hpp"
#include "momlim/rate_fit.hpp"
#include "momlim/state_space.hpp"

namespace momlim {

/// Simulates the configured run and writes `t,theta,f_gap,eta_t` rows at the
/// record-policy checkpoints. Byte-for-byte deterministic given the config.
void run_to_csv(const ExperimentConfig& config, std::ostream& out);

/// Step-size schedule grid (constant; poly alpha in {0.1,0.5,1,2}; exp gamma
/// in {0.9999,0.999,0.99,0.9}) crossed with G in {100,10,0} and theta0 in
/// {0,10}, once with the given momentum and once with beta = 0. Emits one row
/// per schedule with terminal theta per cell. Throws std::invalid_argument
/// with Jury diagnostics when the constant-schedule base step is unstable.
void reproduce_table1(double mu, double eta, double beta, double eta_local,
                      long T, int threads, std::ostream& out);

/// Critical polynomial decay (alpha = 1) at the two pivotal base steps
/// eta = (1+beta)/(mu(1-beta)) - epsilon and eta = 1/mu - epsilon, G = 10,
/// theta0 in {0, 10}. One row per base step.
void reproduce_table2(double mu, double beta, double epsilon, long T, std::ostream& out);

/// Simulates the configured run and fits the envelope decay over
/// [t_min, t_max] (defaults: [1e4, T]).
RateFit run_and_fit(const ExperimentConfig& config, double t_min, double t_max);

void write_fit_csv(const RateFit& fit, std::ostream& out);

/// One row: window edges, stability verdict, margin and spectral radius for
/// the constant-step system.
void stability_report(double mu, double beta, double eta, std::ostream& out);

} // namespace momlim
