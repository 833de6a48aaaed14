#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace momlim {

/// One audited sample of a reference bound. `holds` judges the bound exactly
/// as stated; `corrected_holds` judges the corrected form where one exists
/// (empty string in CSV when not applicable). Comparisons use 1e-14 absolute
/// slack so rounding never masquerades as a violation.
struct BoundVerdict {
    std::string check;
    long t = -1;
    long s = -1;
    double alpha = 0.0;
    double mu_eta = 0.0;
    double beta = 0.0; ///< NaN when not applicable
    double n = 0.0;    ///< NaN when not applicable
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool holds = false;
    int corrected_holds = -1; ///< -1 not applicable, else 0/1
};

struct BoundAuditSummary {
    std::string check;
    long samples = 0;
    long stated_violations = 0;
    long corrected_violations = 0;
    long corrected_applicable = 0;
};

struct BoundAuditResult {
    std::vector<BoundVerdict> rows;
    std::vector<BoundAuditSummary> summaries;

    bool any_stated_violation() const;
    bool any_corrected_violation() const;
};

/// Runs every bound audit with `samples_per_check` random admissible draws
/// per check (deterministic in `seed`, independent of `threads`):
///   integral_test            sum-below-integral comparison
///   psi1_lower               Psi1 lower envelope, all decay regimes
///   psi1_upper_fast_decay    Psi1 upper, alpha > 1 (stated + s-corrected)
///   psi1_upper_slow_decay    Psi1 upper, alpha <= 1 (stated + shifted-limit),
///                            always includes the pinned counterexample
///                            (t=10, s=2, alpha=1, mu_eta=0.5)
///   psi2_sandwich            0 < Psi2 <= scaled upper (log-space compare)
///   psi1_weighted_sum_limit  S(1e4, alpha) against the limit sandwich
///                            (stated + corrected lower)
///   psi1_alt_sum_window      alternating Psi1 sum inside its alpha>1 window
BoundAuditResult audit_bounds(std::uint64_t seed, long samples_per_check, int threads = 0);

/// One row per sample plus one summary row per check.
void write_audit_csv(const BoundAuditResult& result, std::ostream& out);

} // namespace momlim
