#include "momlim/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "momlim/errors.hpp"

namespace momlim {

FederationProblem::FederationProblem(std::vector<QuadraticClient> clients,
                                     double participation_fraction)
    : clients_(std::move(clients)), participation_fraction_(participation_fraction) {
    if (participation_fraction_ > 0.0 && std::isfinite(participation_fraction_)) {
        period_ = static_cast<int>(std::lround(1.0 / participation_fraction_));
        if (period_ < 1) period_ = 1;
    } else {
        period_ = 1;
    }
}

double FederationProblem::mu() const {
    return clients_.empty() ? 0.0 : clients_.front().mu;
}

double FederationProblem::mean_linear_coefficient() const {
    if (clients_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& c : clients_) sum += c.b;
    return sum / static_cast<double>(clients_.size());
}

double FederationProblem::optimum() const {
    const double m = mu();
    return m > 0.0 ? -mean_linear_coefficient() / m : 0.0;
}

double FederationProblem::heterogeneity_bound() const {
    if (clients_.empty()) return 0.0;
    const double mean_b = mean_linear_coefficient();
    double sum = 0.0;
    for (const auto& c : clients_) sum += std::abs(c.b - mean_b);
    return sum / static_cast<double>(clients_.size());
}

double FederationProblem::global_gradient(double theta) const {
    return mu() * theta + mean_linear_coefficient();
}

double FederationProblem::global_value(double theta) const {
    return 0.5 * mu() * theta * theta + mean_linear_coefficient() * theta;
}

double FederationProblem::optimality_gap(double theta) const {
    const double d = theta - optimum();
    return 0.5 * mu() * d * d;
}

std::vector<int> FederationProblem::active_set(long t) const {
    if (t < 1) throw std::invalid_argument("active_set: round index must be >= 1");
    const long n = static_cast<long>(clients_.size());
    if (n == 0) return {};
    const long p = period_ > 0 ? period_ : 1;
    const long block = (t - 1) % p;
    const long block_size = n / p;
    std::vector<int> indices;
    indices.reserve(static_cast<std::size_t>(block_size));
    for (long i = block * block_size; i < (block + 1) * block_size && i < n; ++i)
        indices.push_back(static_cast<int>(i));
    return indices;
}

FederationProblem make_federation_problem(std::vector<QuadraticClient> clients,
                                          double participation_fraction) {
    FederationProblem problem(std::move(clients), participation_fraction);
    const AssumptionReport report = validate_assumptions(problem);
    if (!report.all_passed) {
        std::string what = "invalid federation problem:";
        for (const auto& check : report.checks)
            if (!check.passed) what += " [" + check.name + "] " + check.detail;
        throw std::invalid_argument(what);
    }
    return problem;
}

FederationProblem make_two_client_problem(double mu, double G) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("make_two_client_problem: mu must be positive");
    if (G < 0.0 || !std::isfinite(G))
        throw std::invalid_argument("make_two_client_problem: G must be finite and >= 0");
    return FederationProblem({{mu, G}, {mu, -G}}, 0.5);
}

AssumptionReport validate_assumptions(const FederationProblem& problem) {
    AssumptionReport report;
    auto add = [&](std::string name, bool passed, std::string detail) {
        report.checks.push_back({std::move(name), passed, std::move(detail)});
        report.all_passed = report.all_passed && passed;
    };

    const auto& clients = problem.clients();
    bool mu_ok = !clients.empty();
    for (const auto& c : clients)
        mu_ok = mu_ok && c.mu > 0.0 && std::isfinite(c.mu) && c.mu == clients.front().mu;
    add("strong_convexity", mu_ok,
        mu_ok ? "shared positive curvature"
              : "curvature must be positive, finite and shared by all clients");

    const double G = problem.heterogeneity_bound();
    const bool g_ok = std::isfinite(G) && !clients.empty();
    add("bounded_heterogeneity", g_ok,
        g_ok ? "G = " + std::to_string(G) : "heterogeneity bound is not finite");

    const double C = problem.participation_fraction();
    const int p = problem.period();
    const bool c_range = C > 0.0 && C <= 1.0;
    // p * C == 1 exactly: a fractional period like 1/0.3 never satisfies this.
    const bool exact = c_range && static_cast<double>(p) * C == 1.0;
    const bool divides = !clients.empty() && p > 0 &&
                         static_cast<long>(clients.size()) % p == 0;
    add("cyclic_participation", exact && divides,
        exact && divides
            ? "period " + std::to_string(p)
            : !exact ? "period 1/C is not a positive integer (C = " + std::to_string(C) + ")"
                     : "client count not divisible by the period");
    return report;
}

TwoBlockView two_block_view(const FederationProblem& problem) {
    const auto& clients = problem.clients();
    if (problem.period() != 2 || clients.size() % 2 != 0 || clients.empty())
        throw UnsupportedConstruction(
            "round_update requires exactly two equal cyclic client blocks (C = 1/2)");
    for (const auto& c : clients)
        if (!(c.mu > 0.0) || c.mu != clients.front().mu)
            throw UnsupportedConstruction(
                "round_update requires one shared positive curvature");

    const std::size_t half = clients.size() / 2;
    double first = 0.0;
    for (std::size_t i = 0; i < half; ++i) first += clients[i].b;
    first /= static_cast<double>(half);

    TwoBlockView view;
    view.mu = problem.mu();
    view.optimum = problem.optimum();
    view.block_deviation = first - problem.mean_linear_coefficient();
    return view;
}

} // namespace momlim
