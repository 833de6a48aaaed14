#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "momlim/algorithms.hpp"

namespace momlim {

/// A full experiment description. Defaults match the documented baseline
/// (mu=1, G=10, beta=0.9, J=1, eta_local=1, constant eta=0.5, T=1e6).
struct ExperimentConfig {
    double mu = 1.0;
    double G = 10.0;
    double theta0 = 0.0;
    Algorithm algorithm = Algorithm::FedAvgM;
    double beta = 0.9;
    int J = 1;
    double eta_local = 1.0;
    double eta = 0.5;
    ScheduleKind schedule_kind = ScheduleKind::Constant;
    double alpha = 0.0;
    double gamma = 0.0;
    long T = 1000000;
    RecordPolicy::Kind record = RecordPolicy::Kind::LogSpaced;
    std::string out_path;
    std::uint64_t seed = 0;

    StepSchedule schedule() const;
    AlgoConfig algo_config() const;
    RecordPolicy record_policy() const;
};

struct ParseError {
    int line = 0;
    std::string message;
};

struct ConfigParseResult {
    std::optional<ExperimentConfig> config; ///< set only when errors is empty
    std::vector<ParseError> errors;
};

/// Line-oriented `key = value` text; '#' starts a comment. Keys: mu, G,
/// theta0, algorithm (fedavgm|fedcm), beta, J, eta_local, eta,
/// schedule (constant | poly:<alpha> | exp:<gamma>), T, record
/// (log|all|final), out, seed. Every malformed line, unknown key and
/// constraint violation is reported with its line number.
ConfigParseResult parse_config(std::string_view text);

/// Re-checks every parameter constraint; used by parse_config and by the CLI
/// after flag overrides. Empty result means valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

} // namespace momlim
