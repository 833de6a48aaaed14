#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "momlim/config.hpp"
#include "momlim/csv.hpp"
#include "momlim/experiment.hpp"
#include "momlim/rate_fit.hpp"

using namespace momlim;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

double field(const std::string& csv_row, int index) {
    std::istringstream in(csv_row);
    std::string cell;
    for (int i = 0; i <= index; ++i) std::getline(in, cell, ',');
    return std::stod(cell);
}

} // namespace

TEST_CASE("config parsing accepts the documented form") {
    const auto result =
        parse_config("mu=1\nG=10\nbeta=0.9\nschedule=poly:0.5\nT=1000000\ntheta0=0\n");
    REQUIRE(result.errors.empty());
    REQUIRE(result.config.has_value());
    CHECK(result.config->mu == 1.0);
    CHECK(result.config->G == 10.0);
    CHECK(result.config->beta == 0.9);
    CHECK(result.config->schedule_kind == ScheduleKind::Polynomial);
    CHECK(result.config->alpha == 0.5);
    CHECK(result.config->T == 1000000);
    CHECK(result.config->theta0 == 0.0);
}

TEST_CASE("config parsing reports constraint violations with line numbers") {
    const auto beta_bad = parse_config("mu=1\nbeta=1.0\n");
    REQUIRE(beta_bad.errors.size() == 1);
    CHECK(beta_bad.errors[0].line == 2);
    CHECK(beta_bad.errors[0].message.find("beta must be < 1") != std::string::npos);
    CHECK_FALSE(beta_bad.config.has_value());

    const auto alpha_bad = parse_config("schedule=poly:0\n");
    REQUIRE(alpha_bad.errors.size() == 1);
    CHECK(alpha_bad.errors[0].line == 1);
    CHECK(alpha_bad.errors[0].message.find("alpha must be > 0") != std::string::npos);
}

TEST_CASE("config parsing flags unknown keys and malformed values") {
    const auto result = parse_config("# comment line\n"
                                     "mu = 2.5\n"
                                     "unknown_key = 3\n"
                                     "G = ten\n"
                                     "\n"
                                     "T = 100\n");
    REQUIRE(result.errors.size() == 2);
    CHECK(result.errors[0].line == 3);
    CHECK(result.errors[0].message.find("unknown key") != std::string::npos);
    CHECK(result.errors[1].line == 4);
    CHECK(result.errors[1].message.find("malformed") != std::string::npos);
}

TEST_CASE("config parsing handles comments, spacing and every key") {
    const auto result = parse_config("mu = 2 # trailing comment\n"
                                     "G=0\n"
                                     "theta0 = -3.5\n"
                                     "algorithm = fedcm\n"
                                     "beta = 0.5\n"
                                     "J = 4\n"
                                     "eta_local = 0.25\n"
                                     "eta = 1.5\n"
                                     "schedule = exp:0.99\n"
                                     "T = 5000\n"
                                     "record = all\n"
                                     "out = /tmp/some.csv\n"
                                     "seed = 17\n");
    REQUIRE(result.errors.empty());
    const ExperimentConfig& config = *result.config;
    CHECK(config.algorithm == Algorithm::FedCM);
    CHECK(config.J == 4);
    CHECK(config.eta_local == 0.25);
    CHECK(config.schedule_kind == ScheduleKind::Exponential);
    CHECK(config.gamma == 0.99);
    CHECK(config.record == RecordPolicy::Kind::EveryRound);
    CHECK(config.out_path == "/tmp/some.csv");
    CHECK(config.seed == 17);
}

TEST_CASE("doubles render as shortest round-trip scientific") {
    CHECK(format_double(2.5e-06) == "2.5e-06");
    CHECK(format_double(0.0) == "0e+00");
    CHECK(format_double(-3.9e-06) == "-3.9e-06");
    CHECK(format_double(1.0 / 3.0) == "3.333333333333333e-01");
}

TEST_CASE("trajectory CSV is deterministic and linear in G") {
    ExperimentConfig config;
    config.T = 10000;
    config.theta0 = 0.0;

    std::ostringstream first, second;
    config.G = 100.0;
    run_to_csv(config, first);
    run_to_csv(config, second);
    CHECK(first.str() == second.str()); // byte-identical

    std::ostringstream small;
    config.G = 10.0;
    run_to_csv(config, small);
    const auto big_rows = split_lines(first.str());
    const auto small_rows = split_lines(small.str());
    REQUIRE(big_rows.size() == small_rows.size());
    CHECK(big_rows[0] == "t,theta,f_gap,eta_t");
    for (std::size_t i = 2; i < big_rows.size(); ++i) {
        const double big_theta = field(big_rows[i], 1);
        const double small_theta = field(small_rows[i], 1);
        if (small_theta == 0.0) {
            CHECK(big_theta == 0.0);
            continue;
        }
        CHECK(big_theta / small_theta == doctest::Approx(10.0).epsilon(1e-9));
    }
}

TEST_CASE("zero heterogeneity from the optimum emits all-zero rows") {
    ExperimentConfig config;
    config.G = 0.0;
    config.theta0 = 0.0;
    config.T = 500;
    std::ostringstream out;
    run_to_csv(config, out);
    for (std::size_t i = 1; i < split_lines(out.str()).size(); ++i)
        CHECK(field(split_lines(out.str())[i], 1) == 0.0);
}

TEST_CASE("rate fit recovers a synthetic power law exactly") {
    Trajectory traj;
    for (long t = 100; t <= 100000; t = t * 5 / 4) {
        const double sign_t = (t % 2 == 0) ? 1.0 : -1.0;
        const double sign_next = ((t + 1) % 2 == 0) ? 1.0 : -1.0;
        traj.checkpoints.push_back(
            {t, sign_t * std::pow(static_cast<double>(t), -0.5), 0.0});
        traj.checkpoints.push_back(
            {t + 1, sign_next * std::pow(static_cast<double>(t + 1), -0.5), 0.0});
    }
    const RateFit fit = fit_rate(traj, 100.0, 100000.0);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(fit.plateau);
}

TEST_CASE("rate fit declares a plateau on flat envelopes") {
    Trajectory traj;
    for (long t = 100; t <= 100000; t = t * 5 / 4) {
        traj.checkpoints.push_back({t, 2.5, 0.0});
        traj.checkpoints.push_back({t + 1, -2.5, 0.0});
    }
    const RateFit fit = fit_rate(traj, 100.0, 100000.0);
    CHECK(fit.plateau);
    CHECK(fit.plateau_value == doctest::Approx(2.5));
}

TEST_CASE("rate fit rejects windows with too few points") {
    Trajectory traj;
    traj.checkpoints.push_back({100, 1.0, 0.0});
    traj.checkpoints.push_back({101, -1.0, 0.0});
    CHECK_THROWS_AS(fit_rate(traj, 10.0, 1e6), std::invalid_argument);
}

TEST_CASE("simulate-and-fit recovers the slow-decay exponent at desk scale") {
    ExperimentConfig config;
    config.schedule_kind = ScheduleKind::Polynomial;
    config.alpha = 0.5;
    config.beta = 0.5;
    config.T = 100000;
    const RateFit fit = run_and_fit(config, 1000.0, 100000.0);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("table of critical decay pivots reproduces the dependence flags") {
    std::ostringstream out;
    reproduce_table2(1.0, 0.9, 1e-2, 1000000, out);
    const auto rows = split_lines(out.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "eta_label,eta,theta0_0,theta0_10");

    // Above 1/mu: the terminal iterate forgets the initialization.
    const double hi_0 = field(rows[1], 2), hi_10 = field(rows[1], 3);
    CHECK(std::abs(hi_0 - hi_10) / std::max(std::abs(hi_0), std::abs(hi_10)) < 1e-3);

    // Below 1/mu: the initialization shows through by more than 10x.
    const double lo_0 = field(rows[2], 2), lo_10 = field(rows[2], 3);
    CHECK(std::abs(lo_10) > 10.0 * std::abs(lo_0));
}

TEST_CASE("schedule-grid table: linearity columns and stability refusal") {
    std::ostringstream out;
    reproduce_table1(1.0, 0.5, 0.9, 1.0, 100000, 0, out);
    const auto rows = split_lines(out.str());
    REQUIRE(rows.size() == 10);

    // Rows constant, poly:0.1, poly:0.5, poly:1 with theta0=0: the G=100
    // column is exactly ten times the G=10 column (both momentum blocks).
    for (std::size_t row : {1u, 2u, 3u, 4u}) {
        for (int base : {1, 6}) { // mom_G100_th0 and plain_G100_th0
            const double g100 = field(rows[row], base);
            const double g10 = field(rows[row], base + 2);
            CHECK(g100 / g10 == doctest::Approx(10.0).epsilon(1e-9));
        }
    }

    // Fast-decaying schedules remember the initialization even at G=0.
    const double poly2_g0 = field(rows[5], 5);
    const double exp9_g0 = field(rows[9], 5);
    CHECK(std::abs(poly2_g0) > 1e-3);
    CHECK(std::abs(exp9_g0) > 1e-3);

    CHECK_THROWS_AS(reproduce_table1(1.0, 50.0, 0.9, 1.0, 1000, 0, std::ostringstream()),
                    std::invalid_argument);
}

TEST_CASE("slowly-decaying exponential schedules park next to the optimum") {
    ExperimentConfig config;
    config.schedule_kind = ScheduleKind::Exponential;
    config.T = 1000000;
    config.theta0 = 10.0;
    config.G = 100.0;
    for (double gamma : {0.9999, 0.999}) {
        config.gamma = gamma;
        const FederationProblem problem = make_two_client_problem(config.mu, config.G);
        const Trajectory traj = simulate(problem, config.algo_config(), config.T,
                                         config.theta0, RecordPolicy::final_only());
        CHECK(std::abs(traj.terminal_theta) < 1e-10);
    }
    // gamma = 0.99 freezes later; the residual sits a few decades higher.
    config.gamma = 0.99;
    const FederationProblem problem = make_two_client_problem(config.mu, config.G);
    const Trajectory traj = simulate(problem, config.algo_config(), config.T,
                                     config.theta0, RecordPolicy::final_only());
    CHECK(std::abs(traj.terminal_theta) < 1e-6);
}

TEST_CASE("stability report carries the window and the radius") {
    std::ostringstream out;
    stability_report(1.0, 0.9, 1.0, out);
    const auto rows = split_lines(out.str());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] ==
          "mu,beta,eta,window_lo,window_hi,stable,margin,spectral_radius");
    CHECK(field(rows[1], 4) == doctest::Approx(38.0));
    CHECK(rows[1].find("true") != std::string::npos);
}
