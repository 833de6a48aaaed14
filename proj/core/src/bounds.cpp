#include "momlim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "momlim/kahan.hpp"
#include "momlim/rng.hpp"

namespace momlim {

namespace {

constexpr double kLogSpaceThreshold = 1e-280;

double pow_d(double base, double exponent) { return std::pow(base, exponent); }

double pow_l(long k, double alpha) {
    return std::pow(static_cast<double>(k), alpha);
}

void check_range(long t, long s, const char* who) {
    if (s < 1 || s >= t)
        throw std::invalid_argument(std::string(who) + ": need 1 <= s < t");
}

// Iterative product with a log-space continuation once the running value
// leaves the comfortably-normal range.
template <typename FactorFn>
double guarded_product(long t, long s, FactorFn factor) {
    double prod = 1.0;
    bool in_log = false;
    double log_abs = 0.0;
    int sign = 1;
    for (long k = s + 1; k <= t; ++k) {
        const double f = factor(k);
        if (!in_log) {
            prod *= f;
            if (prod != 0.0 && std::abs(prod) < kLogSpaceThreshold) {
                in_log = true;
                log_abs = std::log(std::abs(prod));
                sign = prod < 0.0 ? -1 : 1;
            }
        } else {
            if (f == 0.0) return 0.0;
            log_abs += std::log(std::abs(f));
            if (f < 0.0) sign = -sign;
        }
    }
    return in_log ? sign * std::exp(log_abs) : prod;
}

} // namespace

double psi1_exact(long t, long s, double alpha, double mu_eta) {
    check_range(t, s, "psi1_exact");
    return guarded_product(t, s, [&](long k) { return 1.0 - mu_eta / pow_l(k, alpha); });
}

double psi2_exact(long t, long s, double alpha, double mu_eta, double beta) {
    check_range(t, s, "psi2_exact");
    if (beta == 0.0) return 0.0;
    return guarded_product(
        t, s, [&](long k) { return beta + mu_eta * beta / pow_l(k, alpha); });
}

double psi2_log(long t, long s, double alpha, double mu_eta, double beta) {
    check_range(t, s, "psi2_log");
    if (!(beta > 0.0)) throw std::invalid_argument("psi2_log: beta must be > 0");
    KahanAccumulator acc;
    for (long k = s + 1; k <= t; ++k) acc += std::log1p(mu_eta / pow_l(k, alpha));
    return static_cast<double>(t - s) * std::log(beta) + acc;
}

Psi1Bounds psi1_bounds(long t, long s, double alpha, double mu_eta) {
    check_range(t, s, "psi1_bounds");
    const double two_alpha = pow_d(2.0, alpha);
    if (!(mu_eta < two_alpha))
        throw std::domain_error("psi1_bounds: hypothesis mu*eta < 2^alpha violated");
    const double contraction = two_alpha * mu_eta / (two_alpha - mu_eta);

    Psi1Bounds bounds;
    const double td = static_cast<double>(t);
    const double sd = static_cast<double>(s);
    if (alpha < 1.0) {
        const double integral = (pow_d(td, 1.0 - alpha) - pow_d(sd, 1.0 - alpha)) / (1.0 - alpha);
        const double shifted =
            (pow_d(td + 1.0, 1.0 - alpha) - pow_d(sd + 1.0, 1.0 - alpha)) / (1.0 - alpha);
        bounds.lower = std::exp(-contraction * integral);
        bounds.upper = std::exp(-mu_eta * integral);
        bounds.corrected_upper = std::exp(-mu_eta * shifted);
    } else if (alpha == 1.0) {
        bounds.lower = pow_d(sd / td, 2.0 * mu_eta / (2.0 - mu_eta));
        bounds.upper = pow_d(sd / td, mu_eta);
        bounds.corrected_upper = pow_d((sd + 1.0) / (td + 1.0), mu_eta);
    } else {
        bounds.lower = std::exp(-contraction * hurwitz_zeta(alpha, s + 1));
        bounds.upper = std::exp(-mu_eta / two_alpha);
        // The stated constant only covers s = 1; the first retained factor
        // gives the bound that actually holds for every s.
        bounds.corrected_upper = std::exp(-mu_eta / pow_l(s + 1, alpha));
    }
    return bounds;
}

Psi2Bounds psi2_bounds(long t, long s, double alpha, double mu_eta, double beta) {
    check_range(t, s, "psi2_bounds");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("psi2_bounds: beta must be in (0, 1)");
    const double td = static_cast<double>(t);
    const double sd = static_cast<double>(s);
    double log_growth;
    if (alpha < 1.0)
        log_growth = mu_eta * (pow_d(td, 1.0 - alpha) - pow_d(sd, 1.0 - alpha)) / (1.0 - alpha);
    else if (alpha == 1.0)
        log_growth = mu_eta * std::log(td / sd);
    else
        log_growth = mu_eta * hurwitz_zeta(alpha, s + 1);

    Psi2Bounds bounds;
    bounds.lower = 0.0;
    bounds.log_upper = static_cast<double>(t - s) * std::log(beta) + log_growth;
    bounds.upper = std::exp(bounds.log_upper);
    return bounds;
}

namespace {

std::int64_t double_key(double value) {
    std::int64_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    return bits;
}

} // namespace

namespace {

// Partial sum to K plus the integral tail bracket, K widened until the
// bracket is below 1e-12; returns the bracket midpoint.
double hurwitz_zeta_direct(double alpha, long s) {
    long K = static_cast<long>(std::ceil(pow_d(2e12, 1.0 / alpha))) + 1;
    if (K < s + 16) K = s + 16;
    auto bracket = [&](long k) {
        const double lo = pow_d(static_cast<double>(k + 1), 1.0 - alpha) / (alpha - 1.0);
        const double hi = pow_d(static_cast<double>(k), 1.0 - alpha) / (alpha - 1.0);
        return std::pair<double, double>{lo, hi};
    };
    while (true) {
        const auto [lo, hi] = bracket(K);
        if (hi - lo < 1e-12) break;
        K *= 2;
    }
    KahanAccumulator partial;
    for (long k = s; k <= K; ++k) partial += pow_l(k, -alpha);
    const auto [lo, hi] = bracket(K);
    return partial + 0.5 * (lo + hi);
}

} // namespace

double hurwitz_zeta(double alpha, long s) {
    if (!(alpha > 1.0 + 1e-9))
        throw std::domain_error("hurwitz_zeta: series diverges for alpha <= 1");
    if (s < 1) throw std::invalid_argument("hurwitz_zeta: s must be >= 1");

    // The K-term sum dominates the cost and is identical for every s, so
    // cache the s = 1 evaluation per alpha and peel the prefix off exactly:
    // zeta_H(alpha, s) = zeta_H(alpha, 1) - sum_{k<s} k^-alpha.
    static std::mutex cache_mutex;
    static std::map<std::int64_t, double> cache;
    const std::int64_t key = double_key(alpha);
    bool cached = false;
    double base = 0.0;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) {
            base = it->second;
            cached = true;
        }
    }
    if (!cached) {
        base = hurwitz_zeta_direct(alpha, 1);
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(key, base);
    }
    if (s == 1) return base;
    KahanAccumulator prefix;
    for (long k = 1; k < s; ++k) prefix += pow_l(k, -alpha);
    return base - prefix;
}

double riemann_zeta(double alpha) { return hurwitz_zeta(alpha, 1); }

IntegralTestReport audit_integral_test(long samples, std::uint64_t seed) {
    IntegralTestReport report;
    report.samples = samples;
    for (long i = 0; i < samples; ++i) {
        SplitMix64 rng = SplitMix64::for_index(seed, static_cast<std::uint64_t>(i));
        const double alpha = rng.uniform(0.05, 4.0);
        const long a = rng.uniform_int(1, 200);
        const long b = a + rng.uniform_int(1, 400);
        KahanAccumulator sum;
        for (long k = a + 1; k <= b; ++k) sum += pow_l(k, -alpha);
        const double integral =
            alpha == 1.0
                ? std::log(static_cast<double>(b) / static_cast<double>(a))
                : (pow_d(static_cast<double>(b), 1.0 - alpha) -
                   pow_d(static_cast<double>(a), 1.0 - alpha)) /
                      (1.0 - alpha);
        if (static_cast<double>(sum) > integral + 1e-14) ++report.violations;
    }
    return report;
}

SumS1Result sum_S1(long t, double alpha, double mu_eta) {
    if (!(alpha > 1.0)) throw std::invalid_argument("sum_S1: alpha must be > 1");
    const double two_alpha = pow_d(2.0, alpha);
    if (!(mu_eta < two_alpha))
        throw std::domain_error("sum_S1: hypothesis mu*eta < 2^alpha violated");
    if (t < 2) throw std::invalid_argument("sum_S1: t must be >= 2");

    // Backward pass: extend the product one factor per term, O(t) overall.
    KahanAccumulator acc;
    double prod = 1.0;
    for (long s = t; s >= 2; --s) {
        acc += prod / pow_l(s, 2.0 * alpha);
        prod *= 1.0 - mu_eta / pow_l(s, alpha);
    }

    SumS1Result result;
    result.value = acc;
    const double contraction = two_alpha * mu_eta / (two_alpha - mu_eta);
    const double envelope = std::exp(-contraction * riemann_zeta(alpha));
    result.stated_lower = envelope / (2.0 * alpha - 1.0);
    result.corrected_lower = envelope * pow_d(2.0, 1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0);
    result.upper = riemann_zeta(2.0 * alpha);
    result.inside_stated = result.stated_lower - 1e-14 <= result.value &&
                           result.value <= result.upper + 1e-14;
    result.inside_corrected = result.corrected_lower - 1e-14 <= result.value &&
                              result.value <= result.upper + 1e-14;
    return result;
}

namespace {

double alt_sum_backward(long t, double n, const std::function<double(long)>& factor) {
    KahanAccumulator acc;
    double prod = 1.0;
    for (long s = t; s >= 2; --s) {
        const double sign = (s % 2 == 0) ? 1.0 : -1.0;
        acc += prod * sign / pow_l(s, n);
        prod *= factor(s);
    }
    return acc;
}

} // namespace

double alt_sum_psi1(long t, double alpha, double n, double mu_eta) {
    if (t < 2) throw std::invalid_argument("alt_sum_psi1: t must be >= 2");
    return alt_sum_backward(t, n,
                            [&](long s) { return 1.0 - mu_eta / pow_l(s, alpha); });
}

double alt_sum_psi2(long t, double alpha, double n, double mu_eta, double beta) {
    if (t < 2) throw std::invalid_argument("alt_sum_psi2: t must be >= 2");
    return alt_sum_backward(
        t, n, [&](long s) { return beta * (1.0 + mu_eta / pow_l(s, alpha)); });
}

namespace {

std::vector<long> log_marks(long t_lo, long t_hi) {
    std::vector<long> marks;
    for (int k = 0;; ++k) {
        const long m = std::lround(static_cast<double>(t_lo) *
                                   std::pow(10.0, static_cast<double>(k) / 10.0));
        if (m > t_hi) break;
        marks.push_back(m);
    }
    if (marks.empty() || marks.back() != t_hi) marks.push_back(t_hi);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return marks;
}

// The alternating sums obey S(t) = f(t) S(t-1) + (-1)^t / t^n, so a single
// forward pass yields the whole trace.
AsymptoteTrace trace_recurrence(double n, long t_lo, long t_hi, double factor_limit,
                                const std::function<double(long)>& factor) {
    AsymptoteTrace trace;
    trace.t_values = log_marks(t_lo, t_hi);
    trace.scaled.reserve(trace.t_values.size());
    double S = 0.0;
    std::size_t next = 0;
    for (long t = 2; t <= t_hi && next < trace.t_values.size(); ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        S = factor(t) * S + sign / pow_l(t, n);
        if (t == trace.t_values[next]) {
            trace.scaled.push_back(std::abs(S) * pow_l(t, n));
            ++next;
        }
    }
    // Boundedness judged over the last decade of the range.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < trace.t_values.size(); ++i) {
        if (trace.t_values[i] * 10 < t_hi) continue;
        lo = std::min(lo, trace.scaled[i]);
        hi = std::max(hi, trace.scaled[i]);
    }
    trace.last_decade_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    trace.bounded = lo > 0.0 && trace.last_decade_ratio <= factor_limit;
    return trace;
}

} // namespace

AsymptoteTrace alt_sum_psi2_asymptote(double alpha, double n, double mu_eta, double beta,
                                      long t_lo, long t_hi, double factor) {
    return trace_recurrence(n, t_lo, t_hi, factor, [&](long t) {
        return beta * (1.0 + mu_eta / pow_l(t, alpha));
    });
}

AsymptoteTrace alt_sum_psi1_scaled_trace(double alpha, double n, double mu_eta,
                                         long t_lo, long t_hi, double factor) {
    return trace_recurrence(n, t_lo, t_hi, factor,
                            [&](long t) { return 1.0 - mu_eta / pow_l(t, alpha); });
}

double alt_sum_psi1_fitted_exponent(double alpha, double n, double mu_eta,
                                    long t_lo, long t_hi) {
    const auto marks = log_marks(t_lo, t_hi);
    double S = 0.0;
    std::size_t next = 0;
    std::vector<double> xs, ys;
    for (long t = 2; t <= t_hi && next < marks.size(); ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        S = (1.0 - mu_eta / pow_l(t, alpha)) * S + sign / pow_l(t, n);
        if (t == marks[next]) {
            if (std::abs(S) > 0.0) {
                xs.push_back(std::log(static_cast<double>(t)));
                ys.push_back(std::log(std::abs(S)));
            }
            ++next;
        }
    }
    if (xs.size() < 2)
        throw std::invalid_argument("alt_sum_psi1_fitted_exponent: degenerate trace");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return -(sxy / sxx); // decay exponent, positive for shrinking sums
}

AltSumWindow alt_sum_psi1_window(long t, double alpha, double n, double mu_eta) {
    if (!(alpha > 1.0))
        throw std::invalid_argument("alt_sum_psi1_window: alpha must be > 1");
    const double two_alpha = pow_d(2.0, alpha);
    if (!(mu_eta < two_alpha))
        throw std::domain_error("alt_sum_psi1_window: hypothesis mu*eta < 2^alpha violated");

    AltSumWindow window;
    const double three_alpha = pow_d(3.0, alpha);
    window.gamma1 =
        pow_d(0.5, n) - pow_d(1.0 / 3.0, n) * three_alpha / (three_alpha - mu_eta);
    window.hypothesis_met = window.gamma1 > 0.0;
    window.value = alt_sum_psi1(t, alpha, n, mu_eta);
    if (!window.hypothesis_met) return window;
    const double contraction = two_alpha * mu_eta / (two_alpha - mu_eta);
    window.lower = window.gamma1 * std::exp(-contraction * hurwitz_zeta(alpha, 3));
    window.upper = pow_d(0.5, n) * std::exp(-mu_eta / two_alpha);
    window.inside = window.lower - 1e-14 <= window.value &&
                    window.value <= window.upper + 1e-14;
    return window;
}

RatePrediction predict_rate(const AlgoConfig& config, double mu, double G) {
    (void)G;
    RatePrediction prediction;
    switch (config.schedule.kind()) {
    case ScheduleKind::Constant:
        prediction.regime = RateRegime::Constant;
        prediction.theta_exponent = 0.0;
        prediction.f_gap_order = "G^2/(mu*T^2) with eta on the order of 1/(mu*T)";
        return prediction;
    case ScheduleKind::Exponential:
        // Faster-than-polynomial decay freezes the recurrence; same plateau
        // class as alpha > 1.
        prediction.regime = RateRegime::PolyFast;
        prediction.plateau = true;
        prediction.f_gap_order = "G^2/mu";
        return prediction;
    case ScheduleKind::Polynomial:
        break;
    }
    const double alpha = config.schedule.alpha();
    if (alpha < 1.0) {
        prediction.regime = RateRegime::PolySlow;
        prediction.theta_exponent = alpha;
        prediction.f_gap_order = "G^2/(mu*t^(2*alpha))";
    } else if (alpha == 1.0) {
        prediction.regime = RateRegime::PolyCritical;
        const double mu_eta = mu * config.schedule.eta() * config.eta_local;
        prediction.theta_exponent = std::min(mu_eta, 1.0);
        prediction.f_gap_order = "G^2/(mu*t^(2*min(mu*eta,1)))";
    } else {
        prediction.regime = RateRegime::PolyFast;
        prediction.plateau = true;
        prediction.f_gap_order = "G^2/mu";
    }
    return prediction;
}

} // namespace momlim
