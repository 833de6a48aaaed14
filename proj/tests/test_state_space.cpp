#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "momlim/algorithms.hpp"
#include "momlim/rng.hpp"
#include "momlim/state_space.hpp"

using namespace momlim;

namespace {

AlgoConfig constant_config(double beta, double eta, int J = 1, double eta_local = 1.0) {
    return AlgoConfig{Algorithm::FedAvgM, beta, J, eta_local, StepSchedule::constant(eta)};
}

Mat2 companion(double mu, double beta, double eta) {
    return {1.0 + beta - mu * eta * (1.0 - beta), -beta, 1.0, 0.0};
}

bool approx_mat(const Mat2& a, const Mat2& b, double tol) {
    return std::abs(a.m11 - b.m11) <= tol && std::abs(a.m12 - b.m12) <= tol &&
           std::abs(a.m21 - b.m21) <= tol && std::abs(a.m22 - b.m22) <= tol;
}

} // namespace

TEST_CASE("system matrix matches the companion form at one local step") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const SystemMatrices system = build_system(problem, constant_config(0.9, 1.0));
    const Mat2 a = system.a_of_t(5);
    CHECK(a.m11 == doctest::Approx(1.8).epsilon(1e-15));
    CHECK(a.m12 == doctest::Approx(-0.9).epsilon(1e-15));
    CHECK(a.m21 == 1.0);
    CHECK(a.m22 == 0.0);
}

TEST_CASE("homogeneous problems drive a zero input") {
    const FederationProblem problem = make_two_client_problem(1.0, 0.0);
    const SystemMatrices system = build_system(problem, constant_config(0.5, 0.3));
    for (long t = 1; t <= 10; ++t) CHECK(system.u_of_t(t) == 0.0);
}

TEST_CASE("multi-local-step systems pick up the general coefficients") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig config = constant_config(0.9, 1.0, 2, 0.1);
    const SystemMatrices system = build_system(problem, config);
    const RoundCoefficients c = coefficients(config, 1.0, 7);
    CHECK(system.a_of_t(7).m11 == c.p);
    CHECK(system.a_of_t(7).m12 == -c.r);
    CHECK(system.u_of_t(7) == doctest::Approx(-c.q * 10.0)); // odd round
}

TEST_CASE("state transition identities") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const SystemMatrices system = build_system(problem, constant_config(0.6, 0.4));

    CHECK(approx_mat(state_transition(system, 9, 9), Mat2::identity(), 0.0));
    CHECK_THROWS_AS(state_transition(system, 3, 7), std::invalid_argument);

    // Constant schedule: Psi(t, 1) is the (t-1)-th matrix power.
    const Mat2 a = system.a_of_t(2);
    Mat2 power = Mat2::identity();
    for (long t = 1; t <= 50; ++t) {
        const Mat2 psi = state_transition(system, t, 1);
        CHECK(approx_mat(psi, power, 1e-12 * std::max(1.0, std::abs(power.m11))));
        power = a * power;
    }
}

TEST_CASE("state transition semigroup property on random triples") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig config{Algorithm::FedAvgM, 0.8, 1, 1.0,
                            StepSchedule::polynomial(0.9, 0.7)};
    const SystemMatrices system = build_system(problem, config);
    SplitMix64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const long k = rng.uniform_int(1, 40);
        const long m = k + rng.uniform_int(0, 30);
        const long t = m + rng.uniform_int(0, 30);
        const Mat2 whole = state_transition(system, t, k);
        const Mat2 split = state_transition(system, t, m) * state_transition(system, m, k);
        CHECK(approx_mat(whole, split, 1e-12));
    }
}

TEST_CASE("zero initial state gives a zero input response") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const SystemMatrices system = build_system(problem, constant_config(0.5, 0.2));
    for (long t : {1L, 7L, 150L}) CHECK(zero_input_response(system, {0.0, 0.0}, t) == 0.0);
}

TEST_CASE("homogeneous problems give a zero state response") {
    const FederationProblem problem = make_two_client_problem(1.0, 0.0);
    const SystemMatrices system = build_system(problem, constant_config(0.5, 0.2));
    for (long t : {1L, 7L, 150L}) CHECK(zero_state_response(system, t) == 0.0);
}

TEST_CASE("superposition reproduces the direct recurrence") {
    const FederationProblem problem = make_two_client_problem(1.0, 10.0);
    const AlgoConfig config = constant_config(0.5, 0.2);
    const SystemMatrices system = build_system(problem, config);
    const Trajectory traj = simulate(problem, config, 200, 3.0, RecordPolicy::final_only());
    const double reconstructed = zero_input_response(system, {3.0, 3.0}, 200) +
                                 zero_state_response(system, 200);
    CHECK(reconstructed == doctest::Approx(traj.terminal_theta).epsilon(1e-10));
}

TEST_CASE("stability window edges") {
    const JuryResult no_momentum = jury_stability(1.0, 0.0, 1.9);
    CHECK(no_momentum.window_hi == doctest::Approx(2.0));
    CHECK(no_momentum.stable);
    CHECK_FALSE(jury_stability(1.0, 0.0, 2.1).stable);
    CHECK_FALSE(jury_stability(1.0, 0.0, -0.1).stable);

    CHECK(jury_stability(1.0, 0.9, 1.0).window_hi == doctest::Approx(38.0));
    // The window grows without bound as beta approaches 1.
    CHECK(jury_stability(1.0, 1.0 - 1e-12, 1.0).window_hi > 1e11);
    CHECK_FALSE(jury_stability(1.0, 1.0, 1.0).stable);
}

TEST_CASE("stability margin is the distance to the nearest edge") {
    const JuryResult inside = jury_stability(1.0, 0.0, 0.5);
    CHECK(inside.margin == doctest::Approx(0.5));
    const JuryResult near_top = jury_stability(1.0, 0.0, 1.8);
    CHECK(near_top.margin == doctest::Approx(0.2));
    CHECK(jury_stability(1.0, 0.0, 2.5).margin < 0.0);
}

TEST_CASE("spectral radius on closed-form cases") {
    CHECK(spectral_radius(Mat2::identity()) == doctest::Approx(1.0));
    CHECK(spectral_radius(companion(1.0, 0.0, 0.5)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(spectral_radius(companion(1.0, 0.9, 1.0)) ==
          doctest::Approx(0.9486832980505138).epsilon(1e-14)); // sqrt(0.9)
}

TEST_CASE("stability verdict agrees with the spectral radius") {
    for (double mu : {0.5, 1.0, 2.0}) {
        for (int bi = 0; bi < 20; ++bi) {
            const double beta = 0.98 * bi / 19.0;
            const double hi = 2.0 * (1.0 + beta) / (mu * (1.0 - beta));
            for (int ei = 1; ei <= 20; ++ei) {
                const double eta = 1.25 * hi * ei / 20.0;
                const double rho = spectral_radius(companion(mu, beta, eta));
                const bool jury = jury_stability(mu, beta, eta).stable;
                if (std::abs(rho - 1.0) > 1e-12) CHECK(jury == (rho < 1.0));
            }
        }
    }
}

TEST_CASE("limit cycle amplitude") {
    CHECK(limit_cycle_amplitude(1.0, 0.5, 1.0, 0.0) == 0.0);
    CHECK(limit_cycle_amplitude(1.0, 0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(limit_cycle_amplitude(1.0, 0.0, 2.5, 1.0), std::domain_error);

    // Strictly increasing in eta across the window.
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double eta = 38.0 * i / 41.0;
        const double amp = limit_cycle_amplitude(1.0, 0.9, eta, 10.0);
        CHECK(amp > prev);
        prev = amp;
    }
}

TEST_CASE("diagonalization factors the limit matrix") {
    for (double beta : {0.1, 0.5, 0.9}) {
        const DiagonalizedSystem ds = diagonalize(beta);
        const Mat2 reconstructed = ds.p_mat * ds.lambda_mat * ds.p_inv;
        const Mat2 a_inf{1.0 + beta, -beta, 1.0, 0.0};
        CHECK(approx_mat(reconstructed, a_inf, 1e-14));
        CHECK(ds.w_vec.x1 == doctest::Approx(1.0 / (1.0 - beta)));
        CHECK(ds.w_vec.x2 == doctest::Approx(-1.0 / (1.0 - beta)));
    }
    CHECK_THROWS_AS(diagonalize(0.0), std::invalid_argument);
    CHECK_THROWS_AS(diagonalize(1.0), std::invalid_argument);
}

TEST_CASE("transformed step is the conjugated original step") {
    const double beta = 0.5, mu = 1.2, eta = 0.8, alpha = 0.9, G = 4.0;
    const DiagonalizedSystem ds = diagonalize(beta);
    SplitMix64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const Vec2 zbar{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const long t = rng.uniform_int(2, 5000);
        const Vec2 stepped = transformed_step(ds, zbar, t, mu, eta, alpha, G);
        const Vec2 via_p = ds.p_mat * stepped;

        const double eta_t = eta / std::pow(static_cast<double>(t), alpha);
        const double eta_tilde = eta_t * (1.0 - beta);
        const Mat2 a{1.0 + beta - mu * eta_tilde, -beta, 1.0, 0.0};
        const double u = ((t % 2 == 0) ? 1.0 : -1.0) * eta_tilde * G;
        const Vec2 direct = a * (ds.p_mat * zbar);
        const Vec2 expected{direct.x1 + u, direct.x2};
        CHECK(via_p.x1 == doctest::Approx(expected.x1).epsilon(1e-12));
        CHECK(via_p.x2 == doctest::Approx(expected.x2).epsilon(1e-12));
    }
}

TEST_CASE("transformed trajectory reconstructs the simulated iterates") {
    const double beta = 0.5, mu = 1.0, eta = 0.5, alpha = 1.0, G = 10.0;
    const double theta0 = 2.0;
    const FederationProblem problem = make_two_client_problem(mu, G);
    const AlgoConfig config{Algorithm::FedAvgM, beta, 1, 1.0,
                            StepSchedule::polynomial(eta, alpha)};
    const long horizon = 100000;
    const Trajectory traj = simulate(problem, config, horizon, theta0);

    const DiagonalizedSystem ds = diagonalize(beta);
    Vec2 zbar = ds.p_inv * Vec2{theta0, theta0};
    std::size_t mark = 0;
    const auto& cps = traj.checkpoints;
    for (long t = 2; t <= horizon; ++t) {
        zbar = transformed_step(ds, zbar, t, mu, eta, alpha, G);
        while (mark < cps.size() && cps[mark].t < t) ++mark;
        if (mark < cps.size() && cps[mark].t == t) {
            const double reconstructed = zbar.x1 + beta * zbar.x2; // first row of P zbar
            const double scale = std::max(std::abs(cps[mark].theta), 1e-30);
            CHECK(std::abs(reconstructed - cps[mark].theta) / scale <= 1e-10);
        }
    }
}

TEST_CASE("trivial transformed step stays at rest") {
    const DiagonalizedSystem ds = diagonalize(0.5);
    const Vec2 rest = transformed_step(ds, {0.0, 0.0}, 4, 1.0, 0.5, 1.0, 0.0);
    CHECK(rest.x1 == 0.0);
    CHECK(rest.x2 == 0.0);
}
