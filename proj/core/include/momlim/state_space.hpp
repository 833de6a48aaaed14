#pragma once

#include <functional>

#include "momlim/algorithms.hpp"
#include "momlim/problem.hpp"

namespace momlim {

struct Vec2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Mat2 {
    double m11 = 0.0, m12 = 0.0;
    double m21 = 0.0, m22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Vec2 operator*(const Mat2& a, const Vec2& v);
/// Row vector times matrix.
Vec2 operator*(const Vec2& row, const Mat2& a);
double dot(const Vec2& a, const Vec2& b);

/// The round recurrence as a discrete-time linear system on the state
/// z[t] = (theta^t - theta*, theta^(t-1) - theta*):
///   z[t] = A[t] z[t-1] + B u[t],  y[t] = C z[t]
/// with A[t] = [[p_t, -r_t], [1, 0]] and u[t] = (-1)^t q_t G.
struct SystemMatrices {
    std::function<Mat2(long)> a_of_t;
    std::function<double(long)> u_of_t;
    Vec2 b_vec{1.0, 0.0}; ///< input column
    Vec2 c_vec{1.0, 0.0}; ///< output row
};

/// Builds the system for a two-block problem; any J is accepted (the
/// coefficients carry the local-step structure).
SystemMatrices build_system(const FederationProblem& problem, const AlgoConfig& config);

/// State transition Psi(t, k) = A[t] A[t-1] ... A[k+1]; Psi(t, t) = I.
/// Throws std::invalid_argument when k > t or k < 1.
Mat2 state_transition(const SystemMatrices& system, long t, long k);

/// C Psi(t,1) z1 — the output due to the initial state alone.
double zero_input_response(const SystemMatrices& system, const Vec2& z1, long t);

/// C sum_{k=2..t} Psi(t,k) B u[k] — the output due to the input alone.
/// Backward accumulation; each Psi costs O(1) amortized, O(t) total.
double zero_state_response(const SystemMatrices& system, long t);

struct JuryResult {
    bool stable = false;
    double margin = 0.0; ///< distance of eta to the nearest window edge, < 0 outside
    double window_lo = 0.0;
    double window_hi = 0.0; ///< 2(1+beta)/(mu(1-beta)); +inf as beta -> 1
};

/// Stability of the constant-step system with effective step eta
/// (eta_tilde = eta(1-beta)): stable iff beta in [0,1) and 0 < eta < window_hi.
JuryResult jury_stability(double mu, double beta, double eta);

/// max |lambda| of the two roots of lambda^2 - trace lambda + det.
/// Complex pairs are handled through |lambda|^2 = det; no complex arithmetic.
double spectral_radius(const Mat2& m);

/// Amplitude of the period-2 steady state theta^t = (-1)^t * amplitude:
/// eta(1-beta)G / (2(1+beta) - mu eta(1-beta)).
/// Throws std::domain_error outside the stability window.
double limit_cycle_amplitude(double mu, double beta, double eta, double G);

/// Eigenstructure of the limiting matrix A_inf = [[1+beta, -beta], [1, 0]]:
/// A_inf = P Lambda P^{-1} with Lambda = diag(1, beta).
struct DiagonalizedSystem {
    double beta = 0.0;
    Mat2 p_mat;      ///< [[1, beta], [1, 1]]
    Mat2 lambda_mat; ///< diag(1, beta)
    Mat2 p_inv;      ///< (1/(beta-1)) [[-1, beta], [1, -1]]
    Vec2 w_vec;      ///< P^{-1} B = (1/(1-beta)) (1, -1)

    /// Perturbation H[t] = P^{-1} E[t] P for the polynomial schedule,
    /// E[t] = diag(-mu eta (1-beta)/t^alpha, 0).
    Mat2 h_at(long t, double mu, double eta, double alpha) const;
};

/// Requires 0 < beta < 1 (at beta = 0 the limit matrix is already triangular
/// and the transform would be the identity; at beta = 1 P is singular).
DiagonalizedSystem diagonalize(double beta);

/// One step of the transformed recurrence under eta_t = eta/t^alpha:
///   zbar1[t] = (1 - mu eta/t^a) zbar1 - (mu eta beta/t^a) zbar2 + (eta/t^a) G (-1)^t
///   zbar2[t] = (beta + mu eta beta/t^a) zbar2 + (mu eta/t^a) zbar1 - (eta/t^a) G (-1)^t
/// Reconstruction z = P zbar, in particular theta - theta* = zbar1 + beta zbar2.
Vec2 transformed_step(const DiagonalizedSystem& ds, const Vec2& zbar_prev, long t,
                      double mu, double eta, double alpha, double G);

} // namespace momlim
