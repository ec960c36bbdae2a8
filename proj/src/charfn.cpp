#include "qfilt/charfn.hpp"

#include <cmath>
#include <string>

namespace qfilt {

namespace {

void validate_grid(const TimeLambdaGrid& grid) {
    if (grid.times.empty()) {
        throw EmptyInputError("TimeLambdaGrid: at least one time required");
    }
    if (grid.times.size() != grid.lambdas.size()) {
        throw ShapeMismatchError("TimeLambdaGrid: " +
                                 std::to_string(grid.times.size()) + " times vs " +
                                 std::to_string(grid.lambdas.size()) + " lambdas");
    }
    double previous = 0.0;
    for (double t : grid.times) {
        if (!(t > 0.0) || t < previous) {
            throw GridMisalignedError("TimeLambdaGrid: times must be positive and ascending");
        }
        previous = t;
    }
}

/// Index of the simulation grid point nearest to t; rejects times that are
/// more than half a step away or outside the recorded horizon.
std::int64_t grid_index(double t, double dt, std::int64_t n_steps) {
    const std::int64_t idx = static_cast<std::int64_t>(std::llround(t / dt));
    if (std::abs(static_cast<double>(idx) * dt - t) > 0.5 * dt * (1.0 + 1e-9)) {
        throw GridMisalignedError("time " + std::to_string(t) +
                                  " does not align with step " + std::to_string(dt));
    }
    if (idx < 1 || idx > n_steps) {
        throw GridMisalignedError("time " + std::to_string(t) +
                                  " outside the recorded horizon");
    }
    return idx;
}

} // namespace

ComplexMatrix upsilon(const QsdeModel& m, const TimeLambdaGrid& grid) {
    validate_grid(grid);
    const Superoperator gen = generator(m);
    const Superoperator meas = measurement_superop(m);
    const std::size_t k = grid.times.size();

    VectorizedMatrix v = vectorize(ComplexMatrix::Identity(m.p, m.p));
    for (std::size_t l = k; l-- > 0;) {
        const double t_prev = l == 0 ? 0.0 : grid.times[l - 1];
        const double delta_t = grid.times[l] - t_prev;
        const double lambda = grid.lambdas[l];
        const Complex c = m.detection == Detection::Homodyne
                              ? Complex(0.0, lambda * std::sqrt(m.eta))
                              : m.eta * (std::exp(Complex(0.0, lambda)) - 1.0);
        const ComplexMatrix deformed = (gen.matrix + c * meas.matrix) * delta_t;
        v.coords = matrix_exp(deformed) * v.coords;
    }
    return devectorize(v);
}

Complex char_fn(const QsdeModel& m, const DensityMatrix& rho,
                const TimeLambdaGrid& grid) {
    const ComplexMatrix ups = upsilon(m, grid);
    Complex value = (rho.matrix() * ups).trace();
    if (m.detection == Detection::Homodyne) {
        double exponent = 0.0;
        for (std::size_t l = 0; l < grid.times.size(); ++l) {
            const double t_prev = l == 0 ? 0.0 : grid.times[l - 1];
            exponent += grid.lambdas[l] * grid.lambdas[l] * (grid.times[l] - t_prev);
        }
        value *= std::exp(-0.5 * exponent);
    }
    return value;
}

Complex observation_phase(const std::vector<double>& observations, double dt,
                          const TimeLambdaGrid& grid) {
    validate_grid(grid);
    const std::int64_t n_steps = static_cast<std::int64_t>(observations.size());

    double angle = 0.0;
    std::int64_t previous_idx = 0;
    for (std::size_t l = 0; l < grid.times.size(); ++l) {
        const std::int64_t idx = grid_index(grid.times[l], dt, n_steps);
        double increment_sum = 0.0;
        for (std::int64_t j = previous_idx; j < idx; ++j) {
            increment_sum += observations[static_cast<std::size_t>(j)];
        }
        angle += grid.lambdas[l] * increment_sum;
        previous_idx = idx;
    }
    return std::exp(Complex(0.0, angle));
}

Complex observation_phase(const FilterPairPath& path, const TimeLambdaGrid& grid) {
    return observation_phase(path.observations, path.dt, grid);
}

McEstimate mc_from_phases(const std::vector<Complex>& phases) {
    if (phases.empty()) {
        throw EmptyInputError("mc_from_phases: no samples");
    }
    McEstimate result;
    result.n_paths = static_cast<std::int64_t>(phases.size());

    Complex sum{0.0, 0.0};
    for (const Complex& z : phases) {
        sum += z;
    }
    const double n = static_cast<double>(phases.size());
    result.estimate = sum / n;

    if (phases.size() >= 2) {
        // Jackknife over leave-one-out means; for the sample mean this
        // reduces to the classical standard error.
        double spread = 0.0;
        for (const Complex& z : phases) {
            const Complex loo = (sum - z) / (n - 1.0);
            spread += std::norm(loo - result.estimate);
        }
        result.std_error = std::sqrt(spread * (n - 1.0) / n);
    }
    return result;
}

McEstimate mc_char_fn(const std::vector<FilterPairPath>& paths,
                      const TimeLambdaGrid& grid) {
    if (paths.empty()) {
        throw EmptyInputError("mc_char_fn: no paths");
    }
    std::vector<Complex> phases;
    phases.reserve(paths.size());
    for (const FilterPairPath& path : paths) {
        phases.push_back(observation_phase(path, grid));
    }
    return mc_from_phases(phases);
}

} // namespace qfilt
