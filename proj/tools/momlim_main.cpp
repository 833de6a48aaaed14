// momlim command-line front end: experiment runs, schedule-grid tables,
// envelope rate fits, bound audits and stability reports. Data goes to
// stdout or --out; diagnostics go to stderr (MOMLIM_LOG=off|info|debug).

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "momlim/audit.hpp"
#include "momlim/config.hpp"
#include "momlim/errors.hpp"
#include "momlim/experiment.hpp"
#include "momlim/log.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitStatedViolations = 4;
constexpr int kExitCorrectedViolations = 5;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 0;
    bool seed_set = false;
    bool out_set = false;
};

struct Overrides {
    std::optional<double> mu, beta, eta, alpha, gamma, G, theta0, eta_local;
    std::optional<long> T;
    std::optional<int> J;
    std::optional<std::string> algo;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--config", common.config_path, "key = value config file");
    cmd->add_option("--out", common.out_path, "output path (default stdout)")
        ->each([&common](const std::string&) { common.out_set = true; });
    cmd->add_option("--seed", common.seed, "seed for audit sampling")
        ->each([&common](const std::string&) { common.seed_set = true; });
    cmd->add_option("--threads", common.threads, "worker threads, 0 = auto");
}

void add_overrides(CLI::App* cmd, Overrides& over) {
    cmd->add_option("--mu", over.mu, "curvature");
    cmd->add_option("--beta", over.beta, "momentum factor in [0,1)");
    cmd->add_option("--eta", over.eta, "base server step");
    cmd->add_option("--alpha", over.alpha, "polynomial decay exponent");
    cmd->add_option("--gamma", over.gamma, "exponential decay factor");
    cmd->add_option("--G", over.G, "heterogeneity bound");
    cmd->add_option("--theta0", over.theta0, "initial iterate");
    cmd->add_option("--T", over.T, "horizon");
    cmd->add_option("--J", over.J, "local steps");
    cmd->add_option("--eta-local", over.eta_local, "local step-size");
    cmd->add_option("--algo", over.algo, "fedavgm | fedcm")
        ->check(CLI::IsMember({"fedavgm", "fedcm"}));
}

int load_config(const CommonOptions& common, const Overrides& over,
                momlim::ExperimentConfig& config) {
    if (!common.config_path.empty()) {
        std::ifstream in(common.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file " << common.config_path << '\n';
            return kExitConfig;
        }
        std::ostringstream text;
        text << in.rdbuf();
        const momlim::ConfigParseResult parsed = momlim::parse_config(text.str());
        if (!parsed.errors.empty()) {
            for (const auto& e : parsed.errors)
                std::cerr << common.config_path << ':' << e.line << ": " << e.message
                          << '\n';
            return kExitConfig;
        }
        config = *parsed.config;
    }
    if (over.mu) config.mu = *over.mu;
    if (over.beta) config.beta = *over.beta;
    if (over.eta) config.eta = *over.eta;
    if (over.alpha) {
        config.schedule_kind = momlim::ScheduleKind::Polynomial;
        config.alpha = *over.alpha;
    }
    if (over.gamma) {
        config.schedule_kind = momlim::ScheduleKind::Exponential;
        config.gamma = *over.gamma;
    }
    if (over.G) config.G = *over.G;
    if (over.theta0) config.theta0 = *over.theta0;
    if (over.T) config.T = *over.T;
    if (over.J) config.J = *over.J;
    if (over.eta_local) config.eta_local = *over.eta_local;
    if (over.algo)
        config.algorithm = *over.algo == "fedcm" ? momlim::Algorithm::FedCM
                                                 : momlim::Algorithm::FedAvgM;
    if (common.seed_set) config.seed = common.seed;
    if (common.out_set) config.out_path = common.out_path;

    const auto problems = momlim::validate_config(config);
    if (!problems.empty()) {
        for (const auto& message : problems) std::cerr << "config error: " << message << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

// Writes through `emit` either to the configured path or to stdout.
template <typename Fn>
int with_output(const std::string& path, Fn emit) {
    if (path.empty()) return emit(std::cout);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << path << '\n';
        return kExitConfig;
    }
    return emit(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"momentum federated optimization lab"};
    app.require_subcommand(1);

    CommonOptions common;
    Overrides over;

    auto* run_cmd = app.add_subcommand("run", "simulate one configuration, emit trajectory CSV");
    add_common(run_cmd, common);
    add_overrides(run_cmd, over);

    auto* table1_cmd =
        app.add_subcommand("table1", "schedule grid x heterogeneity x initialization");
    add_common(table1_cmd, common);
    add_overrides(table1_cmd, over);

    auto* table2_cmd =
        app.add_subcommand("table2", "critical decay at the two pivotal base steps");
    double epsilon = 1e-2;
    table2_cmd->add_option("--epsilon", epsilon, "offset from the pivotal steps");
    add_common(table2_cmd, common);
    add_overrides(table2_cmd, over);

    auto* fit_cmd = app.add_subcommand("fit", "simulate and fit the envelope decay exponent");
    double fit_min = 1e4, fit_max = 0.0;
    fit_cmd->add_option("--fit-min", fit_min, "window lower edge (default 1e4)");
    fit_cmd->add_option("--fit-max", fit_max, "window upper edge (default T)");
    add_common(fit_cmd, common);
    add_overrides(fit_cmd, over);

    auto* audit_cmd = app.add_subcommand("audit", "randomized audit of the reference bounds");
    long samples = 1000;
    audit_cmd->add_option("--samples", samples, "samples per check (default 1000)");
    add_common(audit_cmd, common);

    auto* stability_cmd =
        app.add_subcommand("stability", "stability window and spectral radius");
    add_common(stability_cmd, common);
    add_overrides(stability_cmd, over);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            momlim::ExperimentConfig config;
            if (int rc = load_config(common, over, config); rc != kExitOk) return rc;
            return with_output(config.out_path, [&](std::ostream& out) {
                momlim::run_to_csv(config, out);
                return kExitOk;
            });
        }
        if (table1_cmd->parsed()) {
            momlim::ExperimentConfig config;
            if (int rc = load_config(common, over, config); rc != kExitOk) return rc;
            return with_output(config.out_path, [&](std::ostream& out) {
                momlim::reproduce_table1(config.mu, config.eta, config.beta,
                                         config.eta_local, config.T, common.threads, out);
                return kExitOk;
            });
        }
        if (table2_cmd->parsed()) {
            momlim::ExperimentConfig config;
            if (int rc = load_config(common, over, config); rc != kExitOk) return rc;
            return with_output(config.out_path, [&](std::ostream& out) {
                momlim::reproduce_table2(config.mu, config.beta, epsilon, config.T, out);
                return kExitOk;
            });
        }
        if (fit_cmd->parsed()) {
            momlim::ExperimentConfig config;
            if (int rc = load_config(common, over, config); rc != kExitOk) return rc;
            if (fit_max <= 0.0) fit_max = static_cast<double>(config.T);
            const momlim::RateFit fit = momlim::run_and_fit(config, fit_min, fit_max);
            return with_output(config.out_path, [&](std::ostream& out) {
                momlim::write_fit_csv(fit, out);
                return kExitOk;
            });
        }
        if (audit_cmd->parsed()) {
            const momlim::BoundAuditResult result =
                momlim::audit_bounds(common.seed, samples, common.threads);
            const int rc = with_output(common.out_path, [&](std::ostream& out) {
                momlim::write_audit_csv(result, out);
                return kExitOk;
            });
            if (rc != kExitOk) return rc;
            if (result.any_corrected_violation()) {
                std::cerr << "audit: corrected-bound violations found (implementation bug)\n";
                return kExitCorrectedViolations;
            }
            if (result.any_stated_violation()) {
                momlim::log_info("audit: violations confined to as-stated bounds");
                return kExitStatedViolations;
            }
            return kExitOk;
        }
        if (stability_cmd->parsed()) {
            momlim::ExperimentConfig config;
            if (int rc = load_config(common, over, config); rc != kExitOk) return rc;
            return with_output(config.out_path, [&](std::ostream& out) {
                momlim::stability_report(config.mu, config.beta,
                                         config.eta * config.eta_local, out);
                return kExitOk;
            });
        }
    } catch (const momlim::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
