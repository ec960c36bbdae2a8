#ifndef QFILT_CONFIG_HPP
#define QFILT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfilt/charfn.hpp"
#include "qfilt/model.hpp"
#include "qfilt/trajectories.hpp"

namespace qfilt {

struct ObservableSpec {
    std::string name;
    ComplexMatrix matrix;  // Hermitian, symmetrized on load
};

/// Everything an experiment run needs, as read from a JSON config file.
/// Matrices are row-major nested arrays whose entries are either plain
/// numbers or [re, im] pairs; density matrices also accept a
/// {"diag": [...]} shorthand.
struct ExperimentConfig {
    QsdeModel model;
    std::optional<ComplexMatrix> rho_true;
    std::optional<ComplexMatrix> rho_filter;
    SimulationGrid grid;
    std::int64_t n_paths = 1000;
    std::uint64_t master_seed = 1;
    std::vector<ObservableSpec> observables;
    std::vector<TimeLambdaGrid> charfn_grids;
    std::string out_dir;
    std::int64_t stride = 1;
    double tol_rank = 1e-9;
    double tol_kernel = 1e-9;
    bool quiet = false;
};

/// Parses a config from JSON text. Throws ConfigError on malformed input,
/// unknown detection modes, shape problems or invalid parameter ranges.
ExperimentConfig parse_config_text(const std::string& text);

/// Reads and parses a JSON config file.
ExperimentConfig load_config(const std::string& path);

} // namespace qfilt

#endif // QFILT_CONFIG_HPP
