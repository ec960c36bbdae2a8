#ifndef QFILT_TRAJECTORIES_HPP
#define QFILT_TRAJECTORIES_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "qfilt/model.hpp"
#include "qfilt/rng.hpp"

namespace qfilt {

/// Uniform time grid for the Euler integrators.
struct SimulationGrid {
    double dt = 1e-3;
    std::int64_t n_steps = 10000;

    double t_final() const { return dt * static_cast<double>(n_steps); }
};

struct PathOptions {
    std::int64_t store_stride = 1;  // keep every stride-th grid point
    bool store_states = true;       // observations are always kept
    double tol_kernel = 1e-9;       // kernel tolerance for the start-state check
};

/// Per-filter step diagnostics accumulated along one path.
struct StepStats {
    std::int64_t clip_events = 0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
};

/// One simulated observation record with the pair of filters driven by it:
/// the correctly initialized filter and the misspecified one.
struct FilterPairPath {
    Detection detection = Detection::Homodyne;
    double dt = 0.0;
    std::vector<double> times;            // stored grid times, starting at 0
    std::vector<DensityMatrix> rho_true;  // states at the stored times
    std::vector<DensityMatrix> rho_mis;
    std::vector<double> observations;     // per-step increments on the full grid
    StepStats stats_true;
    StepStats stats_mis;
    std::int64_t coarse_jump_steps = 0;   // counting steps with jump probability > 0.1
    bool ac_holds = true;                 // start-state absolute-continuity check
    bool aborted_dark_state = false;      // misspecified filter hit a dark-state jump
    std::int64_t abort_step = -1;
};

/// Euler stepper for the normalized filter equations of one model. Holds
/// the precomputed Schroedinger-picture generator and scratch space, so a
/// single instance can advance many states cheaply.
class FilterStepper {
public:
    explicit FilterStepper(const QsdeModel& m);

    /// Diffusive update for one homodyne increment dY, in place. Throws
    /// StepTooLargeError when the pre-normalization trace drifts from 1 by
    /// more than 0.5.
    void homodyne(ComplexMatrix& rho, double dY, double dt, StepStats& stats);

    /// Jump or no-jump update for one counting increment, in place. Throws
    /// JumpFromDarkStateError when a jump is requested while the jump
    /// intensity vanishes.
    void counting(ComplexMatrix& rho, bool jumped, double dt, StepStats& stats);

    /// Observation increment sampled under the given state: a real homodyne
    /// increment, or 0/1 as jump indicator for counting.
    double sample_increment(const ComplexMatrix& rho, double dt, RngStream& rng,
                            std::int64_t* coarse_jump_steps = nullptr);

    double jump_intensity(const ComplexMatrix& rho) const;

private:
    void project(ComplexMatrix& rho, StepStats& stats, bool check_trace);

    Eigen::Index p_;
    Detection detection_;
    double eta_;
    double sqrt_eta_;
    ComplexMatrix l1_;
    ComplexMatrix l1_adj_;
    ComplexMatrix m_herm_;     // L1 + L1*, the homodyne measurement observable
    ComplexMatrix ldl_;        // L1* L1, the counting measurement observable
    ComplexMatrix lstar_;      // predual generator matrix
    ComplexMatrix work_;
    ComplexMatrix drift_;
};

/// One Euler step of the homodyne filter.
DensityMatrix homodyne_step(const QsdeModel& m, const DensityMatrix& rho,
                            double dY, double dt);

/// One Euler step of the counting filter.
DensityMatrix counting_step(const QsdeModel& m, const DensityMatrix& rho,
                            bool jumped, double dt);

/// Observation increment sampled under rho_true.
double sample_observation_increment(const QsdeModel& m,
                                    const DensityMatrix& rho_true, double dt,
                                    RngStream& rng);

/// Simulates one observation record under rho1 and drives both filters with
/// it. Deterministic given the seed. Emits a start-state warning flag when
/// rho1 is not absolutely continuous w.r.t. rho2; a dark-state jump in the
/// misspecified filter aborts the path and is recorded, not masked.
FilterPairPath simulate_pair(const QsdeModel& m, const DensityMatrix& rho1,
                             const DensityMatrix& rho2,
                             const SimulationGrid& grid, SeedSpec seed,
                             const PathOptions& opts = {});

} // namespace qfilt

#endif // QFILT_TRAJECTORIES_HPP
