#ifndef QFILT_CHARFN_HPP
#define QFILT_CHARFN_HPP

#include <cstdint>
#include <vector>

#include "qfilt/model.hpp"
#include "qfilt/trajectories.hpp"

namespace qfilt {

/// Evaluation grid for multi-time characteristic functions: frequencies
/// lambda_1..lambda_k attached to the increments over (t_0, t_1], ...,
/// (t_{k-1}, t_k] with 0 < t_1 <= ... <= t_k.
struct TimeLambdaGrid {
    std::vector<double> times;
    std::vector<double> lambdas;
};

/// Time-ordered product of deformed semigroup exponentials applied to the
/// identity: exp((L + c(lambda_1) K) t_1) ... exp((L + c(lambda_k) K)
/// (t_k - t_{k-1})) I, with deformation c(lambda) = i lambda sqrt(eta) for
/// homodyne and eta (e^{i lambda} - 1) for counting.
ComplexMatrix upsilon(const QsdeModel& m, const TimeLambdaGrid& grid);

/// Characteristic function E[exp(i sum_l lambda_l (Y_{t_l} - Y_{t_{l-1}}))]
/// of the observation process started in rho: Tr[rho Upsilon], times the
/// Gaussian factor exp(-1/2 sum_l lambda_l^2 (t_l - t_{l-1})) for homodyne.
Complex char_fn(const QsdeModel& m, const DensityMatrix& rho,
                const TimeLambdaGrid& grid);

/// Single-path integrand exp(i sum_l lambda_l Delta Y_l) evaluated on a
/// simulated observation record. Grid times must land on the simulation
/// grid within dt/2 and inside the recorded horizon.
Complex observation_phase(const std::vector<double>& observations, double dt,
                          const TimeLambdaGrid& grid);
Complex observation_phase(const FilterPairPath& path, const TimeLambdaGrid& grid);

struct McEstimate {
    Complex estimate{0.0, 0.0};
    double std_error = 0.0;
    std::int64_t n_paths = 0;
};

/// Sample mean of per-path phases with jackknife standard error.
McEstimate mc_from_phases(const std::vector<Complex>& phases);

/// Monte Carlo estimate of char_fn from simulated observation records.
McEstimate mc_char_fn(const std::vector<FilterPairPath>& paths,
                      const TimeLambdaGrid& grid);

} // namespace qfilt

#endif // QFILT_CHARFN_HPP
