#ifndef QFILT_HARNESS_HPP
#define QFILT_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qfilt/abscont.hpp"
#include "qfilt/charfn.hpp"
#include "qfilt/config.hpp"
#include "qfilt/observability.hpp"

namespace qfilt {

/// Monte Carlo comparison of the correctly and incorrectly initialized
/// filters on shared observation records, with the gate verdicts that
/// qualify the result.
struct StabilityReport {
    std::vector<double> times;
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> mean_abs_diff;  // [observable][time]
    std::vector<std::vector<double>> std_error;      // [observable][time]
    std::vector<double> trace_distance;              // mean over paths
    std::vector<double> stderr_trace_distance;

    bool observable = false;
    int obs_dimension = 0;
    bool obs_borderline = false;
    bool abs_continuous = false;
    std::int64_t n_paths = 0;
    std::int64_t n_aborted_dark_state = 0;
    std::int64_t clip_events = 0;
    double min_eigenvalue = 0.0;
    std::int64_t coarse_jump_steps = 0;
};

/// Runs the full stability experiment: observability and absolute
/// continuity gates, n_paths filter pairs on shared records, and per-time
/// means of |Tr[X (rho_true - rho_mis)]| for every tracked observable plus
/// the trace distance. Deterministic given the config.
StabilityReport run_stability(const ExperimentConfig& cfg);

/// CSV with columns t, mean_abs_diff_<name>, stderr_<name>, ...,
/// trace_distance, stderr_trace_distance.
void write_stability_csv(const StabilityReport& report, std::ostream& out);

/// Gate verdicts and counters as a JSON document.
std::string stability_metadata_json(const StabilityReport& report);

struct ObservabilityReport {
    ObservableSpace space;
    bool observable = false;
    /// Projection residual of each configured observable onto the space.
    std::vector<std::string> names;
    std::vector<double> residuals;
};

ObservabilityReport run_observability_report(const ExperimentConfig& cfg);
std::string observability_report_text(const ObservabilityReport& report);

struct AbsContReport {
    bool forward = false;   // rho_true << rho_filter
    bool backward = false;  // rho_filter << rho_true
    Eigen::Index kernel_dim_true = 0;
    Eigen::Index kernel_dim_filter = 0;
};

AbsContReport run_abscont_check(const ExperimentConfig& cfg);
std::string abscont_report_text(const AbsContReport& report);

struct CharfnRow {
    std::string grid_id;
    Complex exact;
    Complex mc;
    double std_error = 0.0;
    double zscore = 0.0;
};

/// Exact characteristic-function values against Monte Carlo estimates over
/// the configured grids, on freshly simulated observation records.
std::vector<CharfnRow> run_charfn_check(const ExperimentConfig& cfg);

/// CSV with columns grid_id, exact_re, exact_im, mc_re, mc_im, stderr,
/// zscore.
void write_charfn_csv(const std::vector<CharfnRow>& rows, std::ostream& out);

/// True when every z-score is at most 5 in magnitude.
bool charfn_check_passed(const std::vector<CharfnRow>& rows);

/// Single simulated filter pair written as a trajectory table: cumulative
/// observation, per-observable filter expectations and trace distance.
struct TrajectoryTable {
    std::vector<std::string> observable_names;
    std::vector<double> times;
    std::vector<double> cumulative_observation;
    std::vector<std::vector<double>> exp_true;  // [observable][time]
    std::vector<std::vector<double>> exp_mis;
    std::vector<double> trace_distance;
    bool ac_holds = true;
    bool aborted_dark_state = false;
};

TrajectoryTable run_single_trajectory(const ExperimentConfig& cfg);
void write_trajectory_csv(const TrajectoryTable& table, std::ostream& out);

/// Simulated observation records only (no misspecified branch); the
/// building block for run_charfn_check.
std::vector<double> simulate_observations(const QsdeModel& m,
                                          const DensityMatrix& rho_true,
                                          const SimulationGrid& grid,
                                          SeedSpec seed);

} // namespace qfilt

#endif // QFILT_HARNESS_HPP
