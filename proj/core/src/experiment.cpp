#include "momlim/experiment.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "momlim/csv.hpp"
#include "momlim/log.hpp"
#include "momlim/parallel.hpp"

namespace momlim {

void run_to_csv(const ExperimentConfig& config, std::ostream& out) {
    const FederationProblem problem = make_two_client_problem(config.mu, config.G);
    const AlgoConfig algo = config.algo_config();
    const StepSchedule schedule = config.schedule();
    const Trajectory traj =
        simulate(problem, algo, config.T, config.theta0, config.record_policy());

    out << "t,theta,f_gap,eta_t\n";
    for (const auto& cp : traj.checkpoints)
        out << cp.t << ',' << format_double(cp.theta) << ',' << format_double(cp.f_gap)
            << ',' << format_double(schedule.step_at(cp.t)) << '\n';
}

namespace {

struct ScheduleRow {
    std::string label;
    ScheduleKind kind;
    double alpha = 0.0;
    double gamma = 0.0;

    StepSchedule make(double eta) const {
        switch (kind) {
        case ScheduleKind::Constant: return StepSchedule::constant(eta);
        case ScheduleKind::Polynomial: return StepSchedule::polynomial(eta, alpha);
        case ScheduleKind::Exponential: return StepSchedule::exponential(eta, gamma);
        }
        return StepSchedule::constant(eta);
    }
};

const std::vector<ScheduleRow>& table1_rows() {
    static const std::vector<ScheduleRow> rows = {
        {"constant", ScheduleKind::Constant, 0.0, 0.0},
        {"poly:0.1", ScheduleKind::Polynomial, 0.1, 0.0},
        {"poly:0.5", ScheduleKind::Polynomial, 0.5, 0.0},
        {"poly:1", ScheduleKind::Polynomial, 1.0, 0.0},
        {"poly:2", ScheduleKind::Polynomial, 2.0, 0.0},
        {"exp:0.9999", ScheduleKind::Exponential, 0.0, 0.9999},
        {"exp:0.999", ScheduleKind::Exponential, 0.0, 0.999},
        {"exp:0.99", ScheduleKind::Exponential, 0.0, 0.99},
        {"exp:0.9", ScheduleKind::Exponential, 0.0, 0.9},
    };
    return rows;
}

struct TableCell {
    double G;
    double theta0;
};

// Column layout: per momentum block, G=100 at theta0 in {0,10}, G=10 at
// theta0 in {0,10}, then the homogeneous G=0 column at theta0=10.
const std::vector<TableCell>& table1_cells() {
    static const std::vector<TableCell> cells = {
        {100.0, 0.0}, {100.0, 10.0}, {10.0, 0.0}, {10.0, 10.0}, {0.0, 10.0}};
    return cells;
}

} // namespace

void reproduce_table1(double mu, double eta, double beta, double eta_local,
                      long T, int threads, std::ostream& out) {
    for (double b : {beta, 0.0}) {
        const JuryResult jury = jury_stability(mu, b, eta * eta_local);
        if (!jury.stable) {
            std::ostringstream diag;
            diag << "reproduce_table1: constant base step outside the stability "
                    "window for beta="
                 << b << ": eta*eta_local=" << eta * eta_local << " not in (0, "
                 << jury.window_hi << "), margin " << jury.margin;
            throw std::invalid_argument(diag.str());
        }
    }

    const auto& rows = table1_rows();
    const auto& cells = table1_cells();
    const long n_rows = static_cast<long>(rows.size());
    const long n_cells = static_cast<long>(cells.size());
    const long total = n_rows * n_cells * 2; // with and without momentum

    std::vector<double> terminal(static_cast<std::size_t>(total));
    parallel_for(total, threads, [&](long index) {
        const long row = index / (n_cells * 2);
        const long within = index % (n_cells * 2);
        const long block = within / n_cells; // 0 = momentum, 1 = beta 0
        const TableCell cell = cells[static_cast<std::size_t>(within % n_cells)];
        const AlgoConfig algo{Algorithm::FedAvgM, block == 0 ? beta : 0.0, 1, eta_local,
                              rows[static_cast<std::size_t>(row)].make(eta)};
        const FederationProblem problem = make_two_client_problem(mu, cell.G);
        const Trajectory traj =
            simulate(problem, algo, T, cell.theta0, RecordPolicy::final_only());
        terminal[static_cast<std::size_t>(index)] = traj.terminal_theta;
    });

    out << "schedule,"
           "mom_G100_th0,mom_G100_th10,mom_G10_th0,mom_G10_th10,mom_G0_th10,"
           "plain_G100_th0,plain_G100_th10,plain_G10_th0,plain_G10_th10,plain_G0_th10\n";
    for (long row = 0; row < n_rows; ++row) {
        out << rows[static_cast<std::size_t>(row)].label;
        for (long i = 0; i < n_cells * 2; ++i)
            out << ',' << format_double(terminal[static_cast<std::size_t>(row * n_cells * 2 + i)]);
        out << '\n';
    }
    log_info("table1 grid complete (" + std::to_string(total) + " runs, T=" +
             std::to_string(T) + ")");
}

void reproduce_table2(double mu, double beta, double epsilon, long T, std::ostream& out) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("reproduce_table2: beta must be in [0, 1)");
    const double eta_high = (1.0 + beta) / (mu * (1.0 - beta)) - epsilon;
    const double eta_low = 1.0 / mu - epsilon;

    out << "eta_label,eta,theta0_0,theta0_10\n";
    for (auto [label, eta] : {std::pair<const char*, double>{"critical_window", eta_high},
                              std::pair<const char*, double>{"below_inverse_mu", eta_low}}) {
        const AlgoConfig algo{Algorithm::FedAvgM, beta, 1, 1.0,
                              StepSchedule::polynomial(eta, 1.0)};
        const FederationProblem problem = make_two_client_problem(mu, 10.0);
        const double th0 =
            simulate(problem, algo, T, 0.0, RecordPolicy::final_only()).terminal_theta;
        const double th10 =
            simulate(problem, algo, T, 10.0, RecordPolicy::final_only()).terminal_theta;
        out << label << ',' << format_double(eta) << ',' << format_double(th0) << ','
            << format_double(th10) << '\n';
    }
}

RateFit run_and_fit(const ExperimentConfig& config, double t_min, double t_max) {
    const FederationProblem problem = make_two_client_problem(config.mu, config.G);
    const Trajectory traj = simulate(problem, config.algo_config(), config.T,
                                     config.theta0, RecordPolicy::log_spaced());
    return fit_rate(traj, t_min, t_max);
}

void write_fit_csv(const RateFit& fit, std::ostream& out) {
    out << "t_min,t_max,slope,intercept,r_squared,points,plateau,plateau_value\n";
    out << format_double(fit.t_min) << ',' << format_double(fit.t_max) << ','
        << format_double(fit.slope) << ',' << format_double(fit.intercept) << ','
        << format_double(fit.r_squared) << ',' << fit.points_used << ','
        << (fit.plateau ? "true" : "false") << ',' << format_double(fit.plateau_value)
        << '\n';
}

void stability_report(double mu, double beta, double eta, std::ostream& out) {
    const JuryResult jury = jury_stability(mu, beta, eta);
    const double eta_tilde = eta * (1.0 - beta);
    const Mat2 a{1.0 + beta - mu * eta_tilde, -beta, 1.0, 0.0};
    out << "mu,beta,eta,window_lo,window_hi,stable,margin,spectral_radius\n";
    out << format_double(mu) << ',' << format_double(beta) << ',' << format_double(eta)
        << ',' << format_double(jury.window_lo) << ',' << format_double(jury.window_hi)
        << ',' << (jury.stable ? "true" : "false") << ',' << format_double(jury.margin)
        << ',' << format_double(spectral_radius(a)) << '\n';
}

} // namespace momlim
