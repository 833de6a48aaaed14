#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "momlim/algorithms.hpp"

namespace momlim {

// Scalar transition products driving the decreasing-step analysis:
//   Psi1(t, s, alpha) = prod_{k=s+1..t} (1 - mu_eta / k^alpha)
//   Psi2(t, s, alpha) = prod_{k=s+1..t} (beta + mu_eta beta / k^alpha)

/// Exact iterative product; switches to log-space accumulation when a partial
/// product drops below 1e-280 so long tails do not underflow prematurely.
/// Requires 1 <= s < t (throws std::invalid_argument otherwise).
double psi1_exact(long t, long s, double alpha, double mu_eta);
double psi2_exact(long t, long s, double alpha, double mu_eta, double beta);

/// log Psi2, finite for beta > 0 at any range length.
double psi2_log(long t, long s, double alpha, double mu_eta, double beta);

/// Reference envelope for Psi1 by decay regime.
///   lower:  alpha<1: exp(-(2^a me/(2^a-me)) (t^(1-a)-s^(1-a))/(1-a))
///           alpha=1: (s/t)^(2 me/(2-me))
///           alpha>1: exp(-(2^a me/(2^a-me)) zeta_H(a, s+1))
///   upper:  alpha<1: exp(-me (t^(1-a)-s^(1-a))/(1-a))
///           alpha=1: (s/t)^me
///           alpha>1: exp(-me/2^a)
///   corrected_upper: alpha<=1 shifts the integral limits to (s+1, t+1);
///           alpha>1 uses the first-term bound exp(-me/(s+1)^a), which is
///           what the upper actually supports for s > 1.
/// The as-stated upper is kept verbatim so audits can flag where it fails.
/// Throws std::domain_error when mu_eta >= 2^alpha (hypothesis violated).
struct Psi1Bounds {
    double lower = 0.0;
    double upper = 0.0;
    double corrected_upper = 0.0;
};
Psi1Bounds psi1_bounds(long t, long s, double alpha, double mu_eta);

/// Positivity plus the beta^(t-s)-scaled upper envelope for Psi2.
struct Psi2Bounds {
    double lower = 0.0; ///< strict positivity is the stated lower bound
    double upper = 0.0;
    double log_upper = 0.0; ///< same bound in log space for long ranges
};
Psi2Bounds psi2_bounds(long t, long s, double alpha, double mu_eta, double beta);

/// zeta_H(alpha, s) = sum_{k=s..inf} k^-alpha for alpha > 1: partial sum to K
/// plus the integral tail bound K^(1-alpha)/(alpha-1), K chosen so the tail
/// bracket is narrower than 1e-12; returns the bracket midpoint. Memoized.
/// Throws std::domain_error for alpha <= 1 + 1e-9 (divergent series).
double hurwitz_zeta(double alpha, long s);

/// zeta_R(alpha) = zeta_H(alpha, 1).
double riemann_zeta(double alpha);

struct IntegralTestReport {
    long samples = 0;
    long violations = 0;
};

/// Checks sum_{k=a+1..b} k^-alpha <= integral_a^b x^-alpha dx on random
/// (alpha, a, b) draws with alpha > 0 and integer a < b.
IntegralTestReport audit_integral_test(long samples, std::uint64_t seed);

/// S(t, alpha) = sum_{s=2..t} Psi1(t, s, alpha) / s^(2 alpha), alpha > 1.
/// `stated_lower` is the reference limit constant exp(-c zR(alpha))/(2a-1)
/// with c = 2^a me/(2^a - me); `corrected_lower` carries the 2^(1-2a) factor
/// the reference derivation drops when evaluating integral_2^t s^(-2a) ds.
struct SumS1Result {
    double value = 0.0;
    double stated_lower = 0.0;
    double corrected_lower = 0.0;
    double upper = 0.0; ///< zeta_R(2 alpha)
    bool inside_stated = false;
    bool inside_corrected = false;
};
SumS1Result sum_S1(long t, double alpha, double mu_eta);

/// Alternating transition sums, accumulated backward with compensation:
///   alt_sum_psi1: sum_{s=2..t} (-1)^s / s^n * Psi1(t, s, alpha)
///   alt_sum_psi2: sum_{s=2..t} (-1)^s / s^n * Psi2(t, s, alpha)
double alt_sum_psi1(long t, double alpha, double n, double mu_eta);
double alt_sum_psi2(long t, double alpha, double n, double mu_eta, double beta);

/// Scaled-magnitude trace |S(t)| * t^n over log-spaced t in [t_lo, t_hi],
/// computed in one forward pass of the recurrence
/// S(t) = f(t) S(t-1) + (-1)^t / t^n. `bounded` holds when the trace stays
/// within `factor` over the last decade without vanishing.
struct AsymptoteTrace {
    std::vector<long> t_values;
    std::vector<double> scaled; ///< |S(t)| * t^n
    double last_decade_ratio = 0.0;
    bool bounded = false;
};
AsymptoteTrace alt_sum_psi2_asymptote(double alpha, double n, double mu_eta, double beta,
                                      long t_lo = 1000, long t_hi = 100000,
                                      double factor = 3.0);
AsymptoteTrace alt_sum_psi1_scaled_trace(double alpha, double n, double mu_eta,
                                         long t_lo = 1000, long t_hi = 100000,
                                         double factor = 3.0);

/// Fitted |S(t)| ~ t^(-exponent) over log-spaced t (least squares on logs).
double alt_sum_psi1_fitted_exponent(double alpha, double n, double mu_eta,
                                    long t_lo = 1000, long t_hi = 100000);

/// The alpha > 1 window for the alternating Psi1 sum at finite t:
///   gamma1 exp(-(2^a me/(2^a-me)) zeta_H(a,3)) <= S <= (1/2^n) exp(-me/2^a)
/// with gamma1 = (1/2)^n - (1/3)^n 3^a/(3^a - me). Only meaningful when
/// gamma1 > 0; `hypothesis_met` reports that precondition.
struct AltSumWindow {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double gamma1 = 0.0;
    bool hypothesis_met = false;
    bool inside = false;
};
AltSumWindow alt_sum_psi1_window(long t, double alpha, double n, double mu_eta);

enum class RateRegime { Constant, PolySlow, PolyCritical, PolyFast };

/// Predicted decay structure of the optimality gap for a given configuration.
struct RatePrediction {
    RateRegime regime = RateRegime::Constant;
    double theta_exponent = 0.0; ///< |theta| ~ t^-theta_exponent (0 when plateau)
    bool plateau = false;
    std::string f_gap_order;
};

/// Constant: with eta ~ 1/(mu T), terminal |theta| = Theta(G/(mu T)), gap
/// Theta(G^2/(mu T^2)). Polynomial: exponent alpha for alpha < 1,
/// min(mu eta, 1) at alpha = 1, plateau for alpha > 1.
RatePrediction predict_rate(const AlgoConfig& config, double mu, double G);

} // namespace momlim
