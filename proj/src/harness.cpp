#include "qfilt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace qfilt {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

DensityMatrix density_from_config(const std::optional<ComplexMatrix>& m,
                                  const char* field) {
    if (!m) {
        throw ConfigError(std::string("config: missing ") + field);
    }
    try {
        return DensityMatrix(*m);
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + field + ": " + e.what());
    }
}

/// Configured observables, or the measurement observable when none given.
std::vector<ObservableSpec> tracked_observables(const ExperimentConfig& cfg) {
    if (!cfg.observables.empty()) {
        return cfg.observables;
    }
    const ComplexMatrix m_obs = measurement_superop(cfg.model)
                                    .apply(ComplexMatrix::Identity(cfg.model.p, cfg.model.p));
    return {ObservableSpec{"M", m_obs}};
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix delta = a - b;
    return 0.5 * Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
                     delta, Eigen::EigenvaluesOnly)
                     .eigenvalues()
                     .cwiseAbs()
                     .sum();
}

struct MeanAccumulator {
    std::vector<double> sum;
    std::vector<double> sum_sq;

    explicit MeanAccumulator(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}

    void add(std::size_t i, double v) {
        sum[i] += v;
        sum_sq[i] += v * v;
    }

    double mean(std::size_t i, std::int64_t n) const {
        return sum[i] / static_cast<double>(n);
    }

    double std_error(std::size_t i, std::int64_t n) const {
        if (n < 2) {
            return 0.0;
        }
        const double nn = static_cast<double>(n);
        const double m = sum[i] / nn;
        double var = (sum_sq[i] - nn * m * m) / (nn - 1.0);
        if (var < 0.0) {
            var = 0.0;
        }
        return std::sqrt(var / nn);
    }
};

} // namespace

std::vector<double> simulate_observations(const QsdeModel& m,
                                          const DensityMatrix& rho_true,
                                          const SimulationGrid& grid,
                                          SeedSpec seed) {
    FilterStepper stepper(m);
    RngStream rng(seed);
    StepStats stats;
    ComplexMatrix state = rho_true.matrix();

    std::vector<double> observations(static_cast<std::size_t>(grid.n_steps));
    for (std::int64_t k = 0; k < grid.n_steps; ++k) {
        const double increment = stepper.sample_increment(state, grid.dt, rng, nullptr);
        observations[static_cast<std::size_t>(k)] = increment;
        if (m.detection == Detection::Homodyne) {
            stepper.homodyne(state, increment, grid.dt, stats);
        } else {
            stepper.counting(state, increment != 0.0, grid.dt, stats);
        }
    }
    return observations;
}

StabilityReport run_stability(const ExperimentConfig& cfg) {
    const QsdeModel& model = cfg.model;
    const DensityMatrix rho1 = density_from_config(cfg.rho_true, "rho_true");
    const DensityMatrix rho2 = density_from_config(cfg.rho_filter, "rho_filter");
    const std::vector<ObservableSpec> observables = tracked_observables(cfg);

    StabilityReport report;
    const ObservableSpace space = observable_space(model, cfg.tol_rank);
    report.observable = space.dimension == static_cast<int>(model.p * model.p);
    report.obs_dimension = space.dimension;
    report.obs_borderline = space.borderline;
    report.abs_continuous = is_absolutely_continuous(rho1, rho2, cfg.tol_kernel);
    report.min_eigenvalue = std::numeric_limits<double>::infinity();

    const std::size_t n_stored =
        static_cast<std::size_t>(cfg.grid.n_steps / cfg.stride) + 1;
    report.times.resize(n_stored);
    for (std::size_t j = 0; j < n_stored; ++j) {
        report.times[j] = cfg.grid.dt * static_cast<double>(cfg.stride) *
                          static_cast<double>(j);
    }

    std::vector<MeanAccumulator> per_observable(observables.size(),
                                                MeanAccumulator(n_stored));
    MeanAccumulator distance(n_stored);

    PathOptions opts;
    opts.store_stride = cfg.stride;
    opts.store_states = true;
    opts.tol_kernel = cfg.tol_kernel;

    std::int64_t n_used = 0;
    for (std::int64_t idx = 0; idx < cfg.n_paths; ++idx) {
        const FilterPairPath path = simulate_pair(
            model, rho1, rho2, cfg.grid, SeedSpec{cfg.master_seed,
                                                  static_cast<std::uint64_t>(idx)},
            opts);

        report.clip_events +=
            path.stats_true.clip_events + path.stats_mis.clip_events;
        report.min_eigenvalue =
            std::min({report.min_eigenvalue, path.stats_true.min_eigenvalue,
                      path.stats_mis.min_eigenvalue});
        report.coarse_jump_steps += path.coarse_jump_steps;

        if (path.aborted_dark_state) {
            report.n_aborted_dark_state += 1;
            continue;
        }
        n_used += 1;
        for (std::size_t j = 0; j < n_stored; ++j) {
            const ComplexMatrix& a = path.rho_true[j].matrix();
            const ComplexMatrix& b = path.rho_mis[j].matrix();
            for (std::size_t o = 0; o < observables.size(); ++o) {
                const double diff =
                    std::abs((observables[o].matrix * (a - b)).trace().real());
                per_observable[o].add(j, diff);
            }
            distance.add(j, trace_distance(a, b));
        }
    }

    if (n_used == 0) {
        throw JumpFromDarkStateError(
            "run_stability: every path aborted on a dark-state jump of the "
            "misspecified filter; see the start-state continuity check");
    }

    report.n_paths = n_used;
    report.observable_names.reserve(observables.size());
    for (const ObservableSpec& spec : observables) {
        report.observable_names.push_back(spec.name);
    }
    report.mean_abs_diff.resize(observables.size());
    report.std_error.resize(observables.size());
    for (std::size_t o = 0; o < observables.size(); ++o) {
        report.mean_abs_diff[o].resize(n_stored);
        report.std_error[o].resize(n_stored);
        for (std::size_t j = 0; j < n_stored; ++j) {
            report.mean_abs_diff[o][j] = per_observable[o].mean(j, n_used);
            report.std_error[o][j] = per_observable[o].std_error(j, n_used);
        }
    }
    report.trace_distance.resize(n_stored);
    report.stderr_trace_distance.resize(n_stored);
    for (std::size_t j = 0; j < n_stored; ++j) {
        report.trace_distance[j] = distance.mean(j, n_used);
        report.stderr_trace_distance[j] = distance.std_error(j, n_used);
    }
    return report;
}

void write_stability_csv(const StabilityReport& report, std::ostream& out) {
    out << "t";
    for (const std::string& name : report.observable_names) {
        out << ",mean_abs_diff_" << name << ",stderr_" << name;
    }
    out << ",trace_distance,stderr_trace_distance\n";

    for (std::size_t j = 0; j < report.times.size(); ++j) {
        out << fmt(report.times[j]);
        for (std::size_t o = 0; o < report.observable_names.size(); ++o) {
            out << ',' << fmt(report.mean_abs_diff[o][j]) << ','
                << fmt(report.std_error[o][j]);
        }
        out << ',' << fmt(report.trace_distance[j]) << ','
            << fmt(report.stderr_trace_distance[j]) << '\n';
    }
}

std::string stability_metadata_json(const StabilityReport& report) {
    nlohmann::ordered_json j;
    j["observable"] = report.observable;
    j["observable_space_dimension"] = report.obs_dimension;
    j["observability_borderline"] = report.obs_borderline;
    j["absolutely_continuous"] = report.abs_continuous;
    j["n_paths_used"] = report.n_paths;
    j["n_aborted_dark_state"] = report.n_aborted_dark_state;
    j["clip_events"] = report.clip_events;
    j["min_eigenvalue"] = report.min_eigenvalue;
    j["coarse_jump_steps"] = report.coarse_jump_steps;
    return j.dump(2) + "\n";
}

ObservabilityReport run_observability_report(const ExperimentConfig& cfg) {
    ObservabilityReport report;
    report.space = observable_space(cfg.model, cfg.tol_rank);
    report.observable =
        report.space.dimension == static_cast<int>(cfg.model.p * cfg.model.p);
    for (const ObservableSpec& spec : tracked_observables(cfg)) {
        report.names.push_back(spec.name);
        report.residuals.push_back(
            project_observable(report.space, spec.matrix).residual_norm);
    }
    return report;
}

std::string observability_report_text(const ObservabilityReport& report) {
    std::string text;
    text += "observable space dimension: " + std::to_string(report.space.dimension) +
            " of " + std::to_string(report.space.dim_p * report.space.dim_p) + "\n";
    text += std::string("verdict: ") +
            (report.observable ? "observable" : "not observable") + "\n";
    text += "iterations: " + std::to_string(report.space.iterations_used) + "\n";
    text += std::string("borderline rank decision: ") +
            (report.space.borderline ? "yes" : "no") + "\n";
    for (std::size_t i = 0; i < report.names.size(); ++i) {
        text += "projection residual " + report.names[i] + ": " +
                fmt(report.residuals[i]) + "\n";
    }
    return text;
}

AbsContReport run_abscont_check(const ExperimentConfig& cfg) {
    const DensityMatrix rho1 = density_from_config(cfg.rho_true, "rho_true");
    const DensityMatrix rho2 = density_from_config(cfg.rho_filter, "rho_filter");

    AbsContReport report;
    report.forward = is_absolutely_continuous(rho1, rho2, cfg.tol_kernel);
    report.backward = is_absolutely_continuous(rho2, rho1, cfg.tol_kernel);
    report.kernel_dim_true = kernel(rho1, cfg.tol_kernel).vectors.cols();
    report.kernel_dim_filter = kernel(rho2, cfg.tol_kernel).vectors.cols();
    return report;
}

std::string abscont_report_text(const AbsContReport& report) {
    std::string text;
    text += "kernel dimension rho_true: " + std::to_string(report.kernel_dim_true) + "\n";
    text += "kernel dimension rho_filter: " + std::to_string(report.kernel_dim_filter) + "\n";
    text += std::string("rho_true << rho_filter: ") + (report.forward ? "yes" : "no") + "\n";
    text += std::string("rho_filter << rho_true: ") + (report.backward ? "yes" : "no") + "\n";
    return text;
}

std::vector<CharfnRow> run_charfn_check(const ExperimentConfig& cfg) {
    if (cfg.charfn_grids.empty()) {
        throw ConfigError("config: charfn requires charfn_grids");
    }
    const DensityMatrix rho1 = density_from_config(cfg.rho_true, "rho_true");

    std::int64_t n_steps = 1;
    for (const TimeLambdaGrid& grid : cfg.charfn_grids) {
        for (double t : grid.times) {
            n_steps = std::max(
                n_steps, static_cast<std::int64_t>(std::llround(t / cfg.grid.dt)));
        }
    }
    const SimulationGrid sim_grid{cfg.grid.dt, n_steps};

    std::vector<std::vector<Complex>> phases(cfg.charfn_grids.size());
    for (auto& v : phases) {
        v.reserve(static_cast<std::size_t>(cfg.n_paths));
    }
    for (std::int64_t idx = 0; idx < cfg.n_paths; ++idx) {
        const std::vector<double> observations = simulate_observations(
            cfg.model, rho1, sim_grid,
            SeedSpec{cfg.master_seed, static_cast<std::uint64_t>(idx)});
        for (std::size_t g = 0; g < cfg.charfn_grids.size(); ++g) {
            phases[g].push_back(
                observation_phase(observations, cfg.grid.dt, cfg.charfn_grids[g]));
        }
    }

    std::vector<CharfnRow> rows;
    rows.reserve(cfg.charfn_grids.size());
    for (std::size_t g = 0; g < cfg.charfn_grids.size(); ++g) {
        CharfnRow row;
        row.grid_id = "g" + std::to_string(g);
        row.exact = char_fn(cfg.model, rho1, cfg.charfn_grids[g]);
        const McEstimate estimate = mc_from_phases(phases[g]);
        row.mc = estimate.estimate;
        row.std_error = estimate.std_error;
        const double floor = 1e-9 * (1.0 + std::abs(row.mc));
        row.zscore = std::abs(row.mc - row.exact) /
                     std::max(estimate.std_error, floor);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_charfn_csv(const std::vector<CharfnRow>& rows, std::ostream& out) {
    out << "grid_id,exact_re,exact_im,mc_re,mc_im,stderr,zscore\n";
    for (const CharfnRow& row : rows) {
        out << row.grid_id << ',' << fmt(row.exact.real()) << ','
            << fmt(row.exact.imag()) << ',' << fmt(row.mc.real()) << ','
            << fmt(row.mc.imag()) << ',' << fmt(row.std_error) << ','
            << fmt(row.zscore) << '\n';
    }
}

bool charfn_check_passed(const std::vector<CharfnRow>& rows) {
    for (const CharfnRow& row : rows) {
        if (!(row.zscore <= 5.0)) {
            return false;
        }
    }
    return true;
}

TrajectoryTable run_single_trajectory(const ExperimentConfig& cfg) {
    const DensityMatrix rho1 = density_from_config(cfg.rho_true, "rho_true");
    const DensityMatrix rho2 = density_from_config(cfg.rho_filter, "rho_filter");
    const std::vector<ObservableSpec> observables = tracked_observables(cfg);

    PathOptions opts;
    opts.store_stride = cfg.stride;
    opts.store_states = true;
    opts.tol_kernel = cfg.tol_kernel;

    const FilterPairPath path =
        simulate_pair(cfg.model, rho1, rho2, cfg.grid,
                      SeedSpec{cfg.master_seed, 0}, opts);

    TrajectoryTable table;
    table.ac_holds = path.ac_holds;
    table.aborted_dark_state = path.aborted_dark_state;
    table.times = path.times;
    for (const ObservableSpec& spec : observables) {
        table.observable_names.push_back(spec.name);
    }
    table.exp_true.resize(observables.size());
    table.exp_mis.resize(observables.size());

    double cumulative = 0.0;
    std::size_t next_step = 0;
    for (std::size_t j = 0; j < path.times.size(); ++j) {
        const std::size_t step_index = static_cast<std::size_t>(
            std::llround(path.times[j] / cfg.grid.dt));
        while (next_step < step_index && next_step < path.observations.size()) {
            cumulative += path.observations[next_step];
            ++next_step;
        }
        table.cumulative_observation.push_back(cumulative);

        const ComplexMatrix& a = path.rho_true[j].matrix();
        const ComplexMatrix& b = path.rho_mis[j].matrix();
        for (std::size_t o = 0; o < observables.size(); ++o) {
            table.exp_true[o].push_back((observables[o].matrix * a).trace().real());
            table.exp_mis[o].push_back((observables[o].matrix * b).trace().real());
        }
        table.trace_distance.push_back(trace_distance(a, b));
    }
    return table;
}

void write_trajectory_csv(const TrajectoryTable& table, std::ostream& out) {
    out << "t,Y";
    for (const std::string& name : table.observable_names) {
        out << ",exp_true_" << name << ",exp_mis_" << name;
    }
    out << ",trace_distance\n";
    for (std::size_t j = 0; j < table.times.size(); ++j) {
        out << fmt(table.times[j]) << ',' << fmt(table.cumulative_observation[j]);
        for (std::size_t o = 0; o < table.observable_names.size(); ++o) {
            out << ',' << fmt(table.exp_true[o][j]) << ',' << fmt(table.exp_mis[o][j]);
        }
        out << ',' << fmt(table.trace_distance[j]) << '\n';
    }
}

} // namespace qfilt
