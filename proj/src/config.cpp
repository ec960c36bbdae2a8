#include "qfilt/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qfilt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) {
        return Complex(j.get<double>(), 0.0);
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    fail(where, "expected a number or an [re, im] pair");
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        fail(where, "expected a non-empty array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = -1;
    ComplexMatrix m;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.empty()) {
            fail(where, "row " + std::to_string(r) + " is not a non-empty array");
        }
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            fail(where, "ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                    where + "[" + std::to_string(r) + "][" +
                                        std::to_string(c) + "]");
        }
    }
    return m;
}

ComplexMatrix parse_density(const json& j, const std::string& where) {
    if (j.is_object() && j.contains("diag")) {
        const json& d = j.at("diag");
        if (!d.is_array() || d.empty()) {
            fail(where, "diag must be a non-empty array");
        }
        const Eigen::Index p = static_cast<Eigen::Index>(d.size());
        ComplexMatrix m = ComplexMatrix::Zero(p, p);
        for (Eigen::Index i = 0; i < p; ++i) {
            m(i, i) = parse_complex(d[static_cast<std::size_t>(i)],
                                    where + ".diag[" + std::to_string(i) + "]");
        }
        return m;
    }
    return parse_matrix(j, where);
}

template <typename T>
T get_scalar(const json& j, const std::string& key, T fallback,
             const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key, e.what());
    }
}

QsdeModel parse_model(const json& j) {
    if (!j.is_object()) {
        fail("model", "expected an object");
    }
    QsdeModel m;
    if (!j.contains("hamiltonian")) {
        fail("model", "missing hamiltonian");
    }
    m.hamiltonian = parse_matrix(j.at("hamiltonian"), "model.hamiltonian");
    m.p = get_scalar<Eigen::Index>(j, "p", m.hamiltonian.rows(), "model");

    if (!j.contains("lindblads") || !j.at("lindblads").is_array() ||
        j.at("lindblads").empty()) {
        fail("model.lindblads", "expected a non-empty array of matrices");
    }
    for (std::size_t k = 0; k < j.at("lindblads").size(); ++k) {
        m.lindblads.push_back(parse_matrix(j.at("lindblads")[k],
                                           "model.lindblads[" + std::to_string(k) + "]"));
    }

    m.eta = get_scalar<double>(j, "eta", 1.0, "model");

    const std::string detection =
        get_scalar<std::string>(j, "detection", "homodyne", "model");
    if (detection == "homodyne") {
        m.detection = Detection::Homodyne;
    } else if (detection == "counting") {
        m.detection = Detection::Counting;
    } else {
        fail("model.detection", "unknown mode '" + detection + "'");
    }

    try {
        return validate_model(std::move(m));
    } catch (const Error& e) {
        fail("model", e.what());
    }
}

TimeLambdaGrid parse_grid_entry(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("times") || !j.contains("lambdas")) {
        fail(where, "expected an object with times and lambdas");
    }
    TimeLambdaGrid grid;
    try {
        grid.times = j.at("times").get<std::vector<double>>();
        grid.lambdas = j.at("lambdas").get<std::vector<double>>();
    } catch (const json::exception& e) {
        fail(where, e.what());
    }
    if (grid.times.size() != grid.lambdas.size() || grid.times.empty()) {
        fail(where, "times and lambdas must be equally sized and non-empty");
    }
    return grid;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    if (!j.contains("model")) {
        throw ConfigError("config: missing model");
    }

    ExperimentConfig cfg;
    cfg.model = parse_model(j.at("model"));

    if (j.contains("rho_true")) {
        cfg.rho_true = parse_density(j.at("rho_true"), "rho_true");
    }
    if (j.contains("rho_filter")) {
        cfg.rho_filter = parse_density(j.at("rho_filter"), "rho_filter");
    }

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        cfg.grid.dt = get_scalar<double>(g, "dt", cfg.grid.dt, "grid");
        cfg.grid.n_steps = get_scalar<std::int64_t>(g, "n_steps", cfg.grid.n_steps, "grid");
        if (cfg.grid.dt <= 0.0 || cfg.grid.n_steps <= 0) {
            throw ConfigError("config: grid requires dt > 0 and n_steps > 0");
        }
    }

    cfg.n_paths = get_scalar<std::int64_t>(j, "n_paths", cfg.n_paths, "");
    if (cfg.n_paths < 1) {
        throw ConfigError("config: n_paths must be at least 1");
    }
    cfg.master_seed = get_scalar<std::uint64_t>(j, "master_seed", cfg.master_seed, "");
    cfg.out_dir = get_scalar<std::string>(j, "out", cfg.out_dir, "");
    cfg.stride = get_scalar<std::int64_t>(j, "stride", cfg.stride, "");
    if (cfg.stride < 1) {
        throw ConfigError("config: stride must be at least 1");
    }
    cfg.quiet = get_scalar<bool>(j, "quiet", cfg.quiet, "");

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        cfg.tol_rank = get_scalar<double>(t, "rank", cfg.tol_rank, "tolerances");
        cfg.tol_kernel = get_scalar<double>(t, "kernel", cfg.tol_kernel, "tolerances");
        if (cfg.tol_rank <= 0.0 || cfg.tol_kernel <= 0.0) {
            throw ConfigError("config: tolerances must be positive");
        }
    }

    if (j.contains("observables")) {
        const json& obs = j.at("observables");
        if (!obs.is_array()) {
            throw ConfigError("config: observables must be an array");
        }
        for (std::size_t k = 0; k < obs.size(); ++k) {
            const std::string where = "observables[" + std::to_string(k) + "]";
            const json& entry = obs[k];
            if (!entry.is_object() || !entry.contains("name") ||
                !entry.contains("matrix")) {
                fail(where, "expected an object with name and matrix");
            }
            ObservableSpec spec;
            try {
                spec.name = entry.at("name").get<std::string>();
            } catch (const json::exception& e) {
                fail(where + ".name", e.what());
            }
            if (spec.name.empty() ||
                spec.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                            "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                            "0123456789_") != std::string::npos) {
                fail(where + ".name", "use letters, digits and underscores only");
            }
            spec.matrix = parse_matrix(entry.at("matrix"), where + ".matrix");
            const double scale = 1.0 + spec.matrix.cwiseAbs().maxCoeff();
            if ((spec.matrix - spec.matrix.adjoint()).cwiseAbs().maxCoeff() >
                1e-8 * scale) {
                fail(where + ".matrix", "observable must be Hermitian");
            }
            spec.matrix = 0.5 * (spec.matrix + spec.matrix.adjoint().eval());
            cfg.observables.push_back(std::move(spec));
        }
    }

    if (j.contains("charfn_grids")) {
        const json& grids = j.at("charfn_grids");
        if (!grids.is_array() || grids.empty()) {
            throw ConfigError("config: charfn_grids must be a non-empty array");
        }
        for (std::size_t k = 0; k < grids.size(); ++k) {
            cfg.charfn_grids.push_back(parse_grid_entry(
                grids[k], "charfn_grids[" + std::to_string(k) + "]"));
        }
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace qfilt
