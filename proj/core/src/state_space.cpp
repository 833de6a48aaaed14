#include "momlim/state_space.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "momlim/kahan.hpp"

namespace momlim {

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.m11 * v.x1 + a.m12 * v.x2, a.m21 * v.x1 + a.m22 * v.x2};
}

Vec2 operator*(const Vec2& row, const Mat2& a) {
    return {row.x1 * a.m11 + row.x2 * a.m21, row.x1 * a.m12 + row.x2 * a.m22};
}

double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }

SystemMatrices build_system(const FederationProblem& problem, const AlgoConfig& config) {
    const TwoBlockView view = two_block_view(problem);
    SystemMatrices system;
    system.a_of_t = [config, view](long t) {
        const RoundCoefficients c = coefficients(config, view.mu, t);
        return Mat2{c.p, -c.r, 1.0, 0.0};
    };
    system.u_of_t = [config, view](long t) {
        const RoundCoefficients c = coefficients(config, view.mu, t);
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        return sign * c.q * view.block_deviation;
    };
    return system;
}

Mat2 state_transition(const SystemMatrices& system, long t, long k) {
    if (k < 1 || k > t)
        throw std::invalid_argument("state_transition: need 1 <= k <= t");
    Mat2 psi = Mat2::identity();
    // Left product A[t] A[t-1] ... A[k+1].
    for (long s = k + 1; s <= t; ++s) psi = system.a_of_t(s) * psi;
    return psi;
}

double zero_input_response(const SystemMatrices& system, const Vec2& z1, long t) {
    if (t < 1) throw std::invalid_argument("zero_input_response: t must be >= 1");
    Vec2 row = system.c_vec;
    for (long s = t; s >= 2; --s) row = row * system.a_of_t(s);
    return dot(row, z1);
}

double zero_state_response(const SystemMatrices& system, long t) {
    if (t < 1) throw std::invalid_argument("zero_state_response: t must be >= 1");
    // row(k) = C Psi(t, k), extended backward one factor per term; the input
    // alternates in sign, so accumulate with compensation.
    Vec2 row = system.c_vec;
    KahanAccumulator acc;
    for (long k = t; k >= 2; --k) {
        acc += dot(row, system.b_vec) * system.u_of_t(k);
        row = row * system.a_of_t(k);
    }
    return acc;
}

JuryResult jury_stability(double mu, double beta, double eta) {
    if (!(mu > 0.0)) throw std::invalid_argument("jury_stability: mu must be > 0");
    JuryResult result;
    result.window_lo = 0.0;
    if (beta < 0.0 || beta >= 1.0) {
        result.stable = false;
        result.window_hi = std::numeric_limits<double>::quiet_NaN();
        result.margin = -std::numeric_limits<double>::infinity();
        return result;
    }
    result.window_hi = 2.0 * (1.0 + beta) / (mu * (1.0 - beta));
    result.stable = eta > 0.0 && eta < result.window_hi;
    result.margin = std::min(eta - result.window_lo, result.window_hi - eta);
    return result;
}

double spectral_radius(const Mat2& m) {
    const double trace = m.m11 + m.m22;
    const double det = m.m11 * m.m22 - m.m12 * m.m21;
    const double disc = trace * trace - 4.0 * det;
    if (disc < 0.0) return std::sqrt(det); // complex pair, |lambda|^2 = det
    const double root = std::sqrt(disc);
    return std::max(std::abs((trace + root) / 2.0), std::abs((trace - root) / 2.0));
}

double limit_cycle_amplitude(double mu, double beta, double eta, double G) {
    const JuryResult jury = jury_stability(mu, beta, eta);
    if (!jury.stable)
        throw std::domain_error("limit_cycle_amplitude: step outside the stability window");
    const double eta_tilde = eta * (1.0 - beta);
    return eta_tilde * G / (2.0 * (1.0 + beta) - mu * eta_tilde);
}

DiagonalizedSystem diagonalize(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument(
            "diagonalize: beta must be in (0, 1); at beta = 0 the limit matrix "
            "is already triangular and no transform is needed");
    DiagonalizedSystem ds;
    ds.beta = beta;
    ds.p_mat = {1.0, beta, 1.0, 1.0};
    ds.lambda_mat = {1.0, 0.0, 0.0, beta};
    const double inv = 1.0 / (beta - 1.0);
    ds.p_inv = {-inv, beta * inv, inv, -inv};
    ds.w_vec = {1.0 / (1.0 - beta), -1.0 / (1.0 - beta)};
    return ds;
}

Mat2 DiagonalizedSystem::h_at(long t, double mu, double eta, double alpha) const {
    const double decay = mu * eta / std::pow(static_cast<double>(t), alpha);
    return {-decay, -decay * beta, decay, decay * beta};
}

Vec2 transformed_step(const DiagonalizedSystem& ds, const Vec2& zbar_prev, long t,
                      double mu, double eta, double alpha, double G) {
    if (t < 2) throw std::invalid_argument("transformed_step: t must be >= 2");
    const double step = eta / std::pow(static_cast<double>(t), alpha);
    const double r1 = mu * step * ds.beta * zbar_prev.x2;
    const double r2 = mu * step * zbar_prev.x1;
    const double r3 = step * G * ((t % 2 == 0) ? 1.0 : -1.0);
    return {(1.0 - mu * step) * zbar_prev.x1 - r1 + r3,
            (ds.beta + mu * step * ds.beta) * zbar_prev.x2 + r2 - r3};
}

} // namespace momlim
