#include "momlim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace momlim {

StepSchedule ExperimentConfig::schedule() const {
    switch (schedule_kind) {
    case ScheduleKind::Constant: return StepSchedule::constant(eta);
    case ScheduleKind::Polynomial: return StepSchedule::polynomial(eta, alpha);
    case ScheduleKind::Exponential: return StepSchedule::exponential(eta, gamma);
    }
    return StepSchedule::constant(eta);
}

AlgoConfig ExperimentConfig::algo_config() const {
    return AlgoConfig{algorithm, beta, J, eta_local, schedule()};
}

RecordPolicy ExperimentConfig::record_policy() const {
    switch (record) {
    case RecordPolicy::Kind::EveryRound: return RecordPolicy::every_round();
    case RecordPolicy::Kind::FinalOnly: return RecordPolicy::final_only();
    case RecordPolicy::Kind::LogSpaced: break;
    }
    return RecordPolicy::log_spaced();
}

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    return text;
}

bool parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_long(std::string_view text, long& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

std::vector<std::string> validate_config(const ExperimentConfig& config) {
    std::vector<std::string> errors;
    if (!(config.mu > 0.0) || !std::isfinite(config.mu))
        errors.push_back("mu must be > 0");
    if (config.G < 0.0 || !std::isfinite(config.G))
        errors.push_back("G must be finite and >= 0");
    if (!std::isfinite(config.theta0)) errors.push_back("theta0 must be finite");
    if (!(config.beta >= 0.0 && config.beta < 1.0))
        errors.push_back("beta must be < 1 and >= 0");
    if (config.J < 1) errors.push_back("J must be >= 1");
    if (!(config.eta_local > 0.0)) errors.push_back("eta_local must be > 0");
    if (!(config.eta > 0.0)) errors.push_back("eta must be > 0");
    if (config.schedule_kind == ScheduleKind::Polynomial && !(config.alpha > 0.0))
        errors.push_back("alpha must be > 0");
    if (config.schedule_kind == ScheduleKind::Exponential &&
        !(config.gamma > 0.0 && config.gamma < 1.0))
        errors.push_back("gamma must be in (0, 1)");
    if (config.T < 1) errors.push_back("T must be >= 1");
    return errors;
}

ConfigParseResult parse_config(std::string_view text) {
    ConfigParseResult result;
    ExperimentConfig config;
    auto fail = [&](int line, std::string message) {
        result.errors.push_back({line, std::move(message)});
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected `key = value`");
            continue;
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(line_no, "expected `key = value`");
            continue;
        }

        if (key == "mu") {
            if (!parse_double(value, config.mu)) fail(line_no, "malformed number for mu");
        } else if (key == "G") {
            if (!parse_double(value, config.G)) fail(line_no, "malformed number for G");
        } else if (key == "theta0") {
            if (!parse_double(value, config.theta0))
                fail(line_no, "malformed number for theta0");
        } else if (key == "beta") {
            if (!parse_double(value, config.beta))
                fail(line_no, "malformed number for beta");
            else if (!(config.beta >= 0.0 && config.beta < 1.0))
                fail(line_no, "beta must be < 1 and >= 0");
        } else if (key == "J") {
            long j = 0;
            if (!parse_long(value, j))
                fail(line_no, "malformed integer for J");
            else if (j < 1)
                fail(line_no, "J must be >= 1");
            else
                config.J = static_cast<int>(j);
        } else if (key == "eta_local") {
            if (!parse_double(value, config.eta_local))
                fail(line_no, "malformed number for eta_local");
            else if (!(config.eta_local > 0.0))
                fail(line_no, "eta_local must be > 0");
        } else if (key == "eta") {
            if (!parse_double(value, config.eta))
                fail(line_no, "malformed number for eta");
            else if (!(config.eta > 0.0))
                fail(line_no, "eta must be > 0");
        } else if (key == "algorithm") {
            if (value == "fedavgm")
                config.algorithm = Algorithm::FedAvgM;
            else if (value == "fedcm")
                config.algorithm = Algorithm::FedCM;
            else
                fail(line_no, "algorithm must be fedavgm or fedcm");
        } else if (key == "schedule") {
            if (value == "constant") {
                config.schedule_kind = ScheduleKind::Constant;
            } else if (value.substr(0, 5) == "poly:") {
                config.schedule_kind = ScheduleKind::Polynomial;
                if (!parse_double(value.substr(5), config.alpha))
                    fail(line_no, "malformed alpha in schedule spec");
                else if (!(config.alpha > 0.0))
                    fail(line_no, "alpha must be > 0");
            } else if (value.substr(0, 4) == "exp:") {
                config.schedule_kind = ScheduleKind::Exponential;
                if (!parse_double(value.substr(4), config.gamma))
                    fail(line_no, "malformed gamma in schedule spec");
                else if (!(config.gamma > 0.0 && config.gamma < 1.0))
                    fail(line_no, "gamma must be in (0, 1)");
            } else {
                fail(line_no, "schedule must be constant, poly:<alpha> or exp:<gamma>");
            }
        } else if (key == "T") {
            if (!parse_long(value, config.T))
                fail(line_no, "malformed integer for T");
            else if (config.T < 1)
                fail(line_no, "T must be >= 1");
        } else if (key == "record") {
            if (value == "log")
                config.record = RecordPolicy::Kind::LogSpaced;
            else if (value == "all")
                config.record = RecordPolicy::Kind::EveryRound;
            else if (value == "final")
                config.record = RecordPolicy::Kind::FinalOnly;
            else
                fail(line_no, "record must be log, all or final");
        } else if (key == "out") {
            config.out_path = std::string(value);
        } else if (key == "seed") {
            if (!parse_u64(value, config.seed))
                fail(line_no, "malformed integer for seed");
        } else {
            fail(line_no, "unknown key `" + std::string(key) + "`");
        }
    }

    if (result.errors.empty()) {
        // Cross-field constraints that single lines cannot see.
        for (const auto& message : validate_config(config)) fail(0, message);
    }
    if (result.errors.empty()) result.config = config;
    return result;
}

} // namespace momlim
