#pragma once

#include <string>
#include <vector>

namespace momlim {

/// One scalar strongly convex client objective f(theta) = mu/2 theta^2 + b theta.
struct QuadraticClient {
    double mu = 1.0; ///< curvature, must be > 0
    double b = 0.0;  ///< linear coefficient, signed

    double gradient(double theta) const { return mu * theta + b; }
    double value(double theta) const { return 0.5 * mu * theta * theta + b * theta; }
};

/// A set of clients visited in a fixed cyclic order. The participation
/// fraction C selects one block of clients per round; blocks repeat with
/// period 1/C and are disjoint within a period.
class FederationProblem {
public:
    FederationProblem() = default;

    /// Lenient constructor: stores the inputs and derives period = round(1/C).
    /// Use validate_assumptions() to check the invariants, or the checked
    /// factories below which throw on violation.
    FederationProblem(std::vector<QuadraticClient> clients, double participation_fraction);

    const std::vector<QuadraticClient>& clients() const { return clients_; }
    double participation_fraction() const { return participation_fraction_; }
    int period() const { return period_; }

    double mu() const;
    double mean_linear_coefficient() const; // b-bar
    /// Global minimizer -b-bar/mu.
    double optimum() const;
    /// Mean absolute deviation of client linear coefficients from their mean.
    double heterogeneity_bound() const;

    double global_gradient(double theta) const;
    double global_value(double theta) const;
    /// f(theta) - f(theta*), exact for quadratics.
    double optimality_gap(double theta) const;

    /// Client indices active at round t (1-based): the ((t-1) mod period)-th
    /// block of the client list split into `period` equal blocks.
    std::vector<int> active_set(long t) const;

private:
    std::vector<QuadraticClient> clients_;
    double participation_fraction_ = 1.0;
    int period_ = 1;
};

/// Checked factory; throws std::invalid_argument when the invariants fail.
FederationProblem make_federation_problem(std::vector<QuadraticClient> clients,
                                          double participation_fraction);

/// Two clients with linear coefficients +G and -G sharing curvature mu,
/// sampled alternately (C = 1/2). The global objective is mu/2 theta^2.
FederationProblem make_two_client_problem(double mu, double G);

struct AssumptionCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_passed = true;
};

/// Checks strong convexity (mu > 0, shared), bounded heterogeneity (finite G)
/// and cyclic participation (period * C == 1 exactly, client count divisible
/// by the period). Reports rather than throws.
AssumptionReport validate_assumptions(const FederationProblem& problem);

/// The two-block structure used by the closed-form round update: period 2,
/// equal halves, shared curvature. `block_deviation` is the signed deviation
/// of the first block's mean linear coefficient from the global mean.
struct TwoBlockView {
    double mu = 0.0;
    double optimum = 0.0;
    double block_deviation = 0.0;
};

/// Throws UnsupportedConstruction when the problem is not two equal cyclic
/// blocks with one shared curvature.
TwoBlockView two_block_view(const FederationProblem& problem);

} // namespace momlim
