#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qfilt/harness.hpp"

namespace {

using qfilt::ExperimentConfig;

/// Writes content to <out>/<filename>, or to stdout when no output
/// directory is configured.
void emit(const ExperimentConfig& cfg, const std::string& filename,
          const std::string& content) {
    if (cfg.out_dir.empty()) {
        std::cout << content;
        return;
    }
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path path =
        std::filesystem::path(cfg.out_dir) / filename;
    std::ofstream out(path);
    if (!out) {
        throw qfilt::ConfigError("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!cfg.quiet) {
        std::cout << "wrote " << path.string() << "\n";
    }
}

int run_observability(const ExperimentConfig& cfg) {
    const qfilt::ObservabilityReport report = qfilt::run_observability_report(cfg);
    emit(cfg, "observability.txt", qfilt::observability_report_text(report));
    return 0;
}

int run_abscont(const ExperimentConfig& cfg) {
    const qfilt::AbsContReport report = qfilt::run_abscont_check(cfg);
    emit(cfg, "abscont.txt", qfilt::abscont_report_text(report));
    return 0;
}

int run_simulate(const ExperimentConfig& cfg) {
    const qfilt::TrajectoryTable table = qfilt::run_single_trajectory(cfg);
    if (!table.ac_holds && !cfg.quiet) {
        std::cerr << "warning: rho_true is not absolutely continuous w.r.t. "
                     "rho_filter; filter stability is not guaranteed\n";
    }
    std::ostringstream csv;
    qfilt::write_trajectory_csv(table, csv);
    emit(cfg, "trajectory.csv", csv.str());
    if (table.aborted_dark_state) {
        std::cerr << "error: misspecified filter hit a dark-state jump; "
                     "path aborted (use a full-rank rho_filter)\n";
        return 2;
    }
    return 0;
}

int run_charfn(const ExperimentConfig& cfg) {
    const std::vector<qfilt::CharfnRow> rows = qfilt::run_charfn_check(cfg);
    std::ostringstream csv;
    qfilt::write_charfn_csv(rows, csv);
    emit(cfg, "charfn.csv", csv.str());
    if (!qfilt::charfn_check_passed(rows)) {
        std::cerr << "error: Monte Carlo estimate deviates from the exact "
                     "characteristic function by more than 5 standard errors\n";
        return 3;
    }
    return 0;
}

int run_stability_cmd(const ExperimentConfig& cfg) {
    const qfilt::StabilityReport report = qfilt::run_stability(cfg);
    if (!cfg.quiet) {
        if (!report.abs_continuous) {
            std::cerr << "warning: rho_true is not absolutely continuous "
                         "w.r.t. rho_filter; filter stability is not guaranteed\n";
        }
        if (report.n_aborted_dark_state > 0) {
            std::cerr << "warning: " << report.n_aborted_dark_state
                      << " path(s) aborted on dark-state jumps and were "
                         "excluded from the averages\n";
        }
        std::cerr << qfilt::stability_metadata_json(report);
    }
    std::ostringstream csv;
    qfilt::write_stability_csv(report, csv);
    emit(cfg, "stability.csv", csv.str());
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path meta_path =
            std::filesystem::path(cfg.out_dir) / "stability_meta.json";
        std::ofstream meta(meta_path);
        meta << qfilt::stability_metadata_json(report);
        if (!cfg.quiet) {
            std::cout << "wrote " << meta_path.string() << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional quantum Markov filter laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    double tol_rank = 0.0;
    double tol_kernel = 0.0;
    bool quiet = false;

    CLI::Option* opt_seed =
        app.add_option("--seed", seed, "Master seed override");
    CLI::Option* opt_out =
        app.add_option("--out", out_dir, "Output directory override");
    CLI::Option* opt_tol_rank =
        app.add_option("--tol-rank", tol_rank, "Relative rank tolerance override");
    CLI::Option* opt_tol_kernel =
        app.add_option("--tol-kernel", tol_kernel, "Kernel tolerance override");
    CLI::Option* opt_quiet =
        app.add_flag("--quiet", quiet, "Suppress status output");

    const char* const commands[] = {"check-observability", "check-abscont",
                                    "simulate", "charfn", "stability"};
    const char* const descriptions[] = {
        "Observable-space dimension and observability verdict",
        "Absolute-continuity check of the configured start states",
        "Simulate one filter pair and write its trajectory",
        "Exact vs Monte Carlo characteristic functions",
        "Monte Carlo filter stability experiment"};
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        sub->add_option("config", config_path, "JSON config file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig cfg = qfilt::load_config(config_path);
        if (*opt_seed) {
            cfg.master_seed = seed;
        }
        if (*opt_out) {
            cfg.out_dir = out_dir;
        }
        if (*opt_tol_rank) {
            if (tol_rank <= 0.0) {
                throw qfilt::ConfigError("--tol-rank must be positive");
            }
            cfg.tol_rank = tol_rank;
        }
        if (*opt_tol_kernel) {
            if (tol_kernel <= 0.0) {
                throw qfilt::ConfigError("--tol-kernel must be positive");
            }
            cfg.tol_kernel = tol_kernel;
        }
        if (*opt_quiet) {
            cfg.quiet = true;
        }

        if (app.got_subcommand(commands[0])) {
            return run_observability(cfg);
        }
        if (app.got_subcommand(commands[1])) {
            return run_abscont(cfg);
        }
        if (app.got_subcommand(commands[2])) {
            return run_simulate(cfg);
        }
        if (app.got_subcommand(commands[3])) {
            return run_charfn(cfg);
        }
        return run_stability_cmd(cfg);
    } catch (const qfilt::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qfilt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
