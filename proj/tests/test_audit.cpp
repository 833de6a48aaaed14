#include <doctest.h>

#include <sstream>

#include "momlim/audit.hpp"

using namespace momlim;

namespace {

const BoundAuditSummary& summary_for(const BoundAuditResult& result,
                                     const std::string& name) {
    for (const auto& s : result.summaries)
        if (s.check == name) return s;
    throw std::runtime_error("missing summary " + name);
}

} // namespace

TEST_CASE("bound audit: clean checks pass, known defects are flagged as stated-only") {
    const BoundAuditResult result = audit_bounds(7, 60);

    CHECK(summary_for(result, "integral_test").stated_violations == 0);
    CHECK(summary_for(result, "psi1_lower").stated_violations == 0);
    CHECK(summary_for(result, "psi2_sandwich").stated_violations == 0);
    CHECK(summary_for(result, "psi1_alt_sum_window").stated_violations == 0);

    // The slow-decay upper includes the pinned counterexample, so at least
    // one stated violation is always present; the corrected form never fails.
    const auto& slow = summary_for(result, "psi1_upper_slow_decay");
    CHECK(slow.samples == 61);
    CHECK(slow.stated_violations >= 1);
    CHECK(slow.corrected_violations == 0);

    const auto& fast = summary_for(result, "psi1_upper_fast_decay");
    CHECK(fast.corrected_violations == 0);

    const auto& weighted = summary_for(result, "psi1_weighted_sum_limit");
    CHECK(weighted.corrected_violations == 0);

    CHECK(result.any_stated_violation());
    CHECK_FALSE(result.any_corrected_violation());
}

TEST_CASE("bound audit is deterministic in the seed and thread count") {
    const BoundAuditResult a = audit_bounds(42, 30, 1);
    const BoundAuditResult b = audit_bounds(42, 30, 4);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].check == b.rows[i].check);
        CHECK(a.rows[i].exact == b.rows[i].exact);
        CHECK(a.rows[i].holds == b.rows[i].holds);
    }

    std::ostringstream csv_a, csv_b;
    write_audit_csv(a, csv_a);
    write_audit_csv(b, csv_b);
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("audit CSV carries one row per sample plus summaries") {
    const BoundAuditResult result = audit_bounds(3, 10);
    std::ostringstream out;
    write_audit_csv(result, out);
    const std::string text = out.str();
    CHECK(text.rfind("check,t,s,alpha,mu_eta,beta,n,exact,lower,upper,holds,corrected_holds\n",
                     0) == 0);
    CHECK(text.find("summary_check,") != std::string::npos);
    CHECK(text.find("psi1_weighted_sum_limit") != std::string::npos);
    // 7 checks x 10 samples + 1 pinned counterexample row.
    CHECK(result.rows.size() == 71);
}
