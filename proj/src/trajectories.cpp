#include "qfilt/trajectories.hpp"

#include <cmath>
#include <string>

#include "qfilt/abscont.hpp"

namespace qfilt {

namespace {

constexpr double kDarkIntensity = 1e-12;
constexpr double kClipFloor = -1e-14;

double trace_real(const ComplexMatrix& a) {
    return a.trace().real();
}

/// Smallest eigenvalue of a Hermitian matrix; closed form for p = 2.
double min_eigenvalue(const ComplexMatrix& a) {
    if (a.rows() == 2) {
        const double half_tr = 0.5 * (a(0, 0).real() + a(1, 1).real());
        const double half_gap = 0.5 * (a(0, 0).real() - a(1, 1).real());
        return half_tr - std::sqrt(half_gap * half_gap + std::norm(a(0, 1)));
    }
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
               a, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
}

} // namespace

FilterStepper::FilterStepper(const QsdeModel& m)
    : p_(m.p),
      detection_(m.detection),
      eta_(m.eta),
      sqrt_eta_(std::sqrt(m.eta)),
      l1_(m.lindblads.front()),
      l1_adj_(m.lindblads.front().adjoint()),
      m_herm_(l1_ + l1_adj_),
      ldl_(l1_adj_ * l1_),
      lstar_(predual(generator(m)).matrix),
      work_(p_, p_),
      drift_(p_, p_) {}

double FilterStepper::jump_intensity(const ComplexMatrix& rho) const {
    return (ldl_ * rho).trace().real();
}

void FilterStepper::project(ComplexMatrix& rho, StepStats& stats,
                            bool check_trace) {
    rho = 0.5 * (rho + rho.adjoint()).eval();

    double tr = trace_real(rho);
    if (check_trace && std::abs(tr - 1.0) > 0.5) {
        throw StepTooLargeError("filter step: pre-normalization trace " +
                                std::to_string(tr) +
                                "; decrease the time step");
    }

    const double lambda_min = min_eigenvalue(rho);
    if (lambda_min < stats.min_eigenvalue) {
        stats.min_eigenvalue = lambda_min;
    }
    if (lambda_min < kClipFloor) {
        const HermitianEig eig = hermitian_eig(rho);
        const RealVector clipped = eig.eigenvalues.cwiseMax(0.0);
        rho = eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
        stats.clip_events += 1;
        tr = trace_real(rho);
    }

    if (!(tr > 0.0)) {
        throw StepTooLargeError("filter step: state trace collapsed to " +
                                std::to_string(tr));
    }
    if (tr != 1.0) {
        rho /= tr;
    }
}

void FilterStepper::homodyne(ComplexMatrix& rho, double dY, double dt,
                             StepStats& stats) {
    const Eigen::Map<const ComplexVector> rho_vec(rho.data(), p_ * p_);
    Eigen::Map<ComplexVector> drift_vec(drift_.data(), p_ * p_);
    drift_vec.noalias() = lstar_ * rho_vec;

    const double m_tr = (m_herm_ * rho).trace().real();
    work_.noalias() = l1_ * rho;
    work_.noalias() += rho * l1_adj_;
    work_ -= m_tr * rho;

    const double innovation = dY - sqrt_eta_ * m_tr * dt;
    rho += dt * drift_ + (sqrt_eta_ * innovation) * work_;
    project(rho, stats, true);
}

void FilterStepper::counting(ComplexMatrix& rho, bool jumped, double dt,
                             StepStats& stats) {
    if (jumped) {
        work_.noalias() = l1_ * rho * l1_adj_;
        const double tr = trace_real(work_);
        if (tr <= kDarkIntensity) {
            throw JumpFromDarkStateError(
                "counting step: jump requested at intensity " +
                std::to_string(tr));
        }
        rho = work_ / tr;
        project(rho, stats, false);
        return;
    }

    const Eigen::Map<const ComplexVector> rho_vec(rho.data(), p_ * p_);
    Eigen::Map<ComplexVector> drift_vec(drift_.data(), p_ * p_);
    drift_vec.noalias() = lstar_ * rho_vec;

    work_.noalias() = l1_ * rho * l1_adj_;
    const double intensity = trace_real(work_);
    work_ -= intensity * rho;

    rho += dt * drift_ - (eta_ * dt) * work_;
    project(rho, stats, false);
}

double FilterStepper::sample_increment(const ComplexMatrix& rho, double dt,
                                       RngStream& rng,
                                       std::int64_t* coarse_jump_steps) {
    if (detection_ == Detection::Homodyne) {
        const double m_tr = (m_herm_ * rho).trace().real();
        return sqrt_eta_ * m_tr * dt + std::sqrt(dt) * rng.normal();
    }
    const double prob = eta_ * jump_intensity(rho) * dt;
    if (coarse_jump_steps != nullptr && prob > 0.1) {
        *coarse_jump_steps += 1;
    }
    return rng.bernoulli(prob < 1.0 ? prob : 1.0) ? 1.0 : 0.0;
}

DensityMatrix homodyne_step(const QsdeModel& m, const DensityMatrix& rho,
                            double dY, double dt) {
    FilterStepper stepper(m);
    StepStats stats;
    ComplexMatrix state = rho.matrix();
    stepper.homodyne(state, dY, dt, stats);
    return DensityMatrix::trusted(std::move(state));
}

DensityMatrix counting_step(const QsdeModel& m, const DensityMatrix& rho,
                            bool jumped, double dt) {
    FilterStepper stepper(m);
    StepStats stats;
    ComplexMatrix state = rho.matrix();
    stepper.counting(state, jumped, dt, stats);
    return DensityMatrix::trusted(std::move(state));
}

double sample_observation_increment(const QsdeModel& m,
                                    const DensityMatrix& rho_true, double dt,
                                    RngStream& rng) {
    FilterStepper stepper(m);
    return stepper.sample_increment(rho_true.matrix(), dt, rng, nullptr);
}

FilterPairPath simulate_pair(const QsdeModel& m, const DensityMatrix& rho1,
                             const DensityMatrix& rho2,
                             const SimulationGrid& grid, SeedSpec seed,
                             const PathOptions& opts) {
    if (rho1.dim() != m.p || rho2.dim() != m.p) {
        throw ShapeMismatchError("simulate_pair: state dimensions " +
                                 std::to_string(rho1.dim()) + ", " +
                                 std::to_string(rho2.dim()) + " for model of dim " +
                                 std::to_string(m.p));
    }
    if (grid.dt <= 0.0 || grid.n_steps <= 0) {
        throw ShapeMismatchError("simulate_pair: grid requires dt > 0 and n_steps > 0");
    }

    FilterPairPath path;
    path.detection = m.detection;
    path.dt = grid.dt;
    path.ac_holds = is_absolutely_continuous(rho1, rho2, opts.tol_kernel);
    path.observations.resize(static_cast<std::size_t>(grid.n_steps));

    FilterStepper stepper(m);
    RngStream rng(seed);
    ComplexMatrix state_true = rho1.matrix();
    ComplexMatrix state_mis = rho2.matrix();

    const std::int64_t stride = opts.store_stride > 0 ? opts.store_stride : 1;
    auto store = [&](double t) {
        path.times.push_back(t);
        if (opts.store_states) {
            path.rho_true.push_back(DensityMatrix::trusted(state_true));
            path.rho_mis.push_back(DensityMatrix::trusted(state_mis));
        }
    };
    store(0.0);

    for (std::int64_t k = 0; k < grid.n_steps; ++k) {
        const double increment = stepper.sample_increment(
            state_true, grid.dt, rng, &path.coarse_jump_steps);
        path.observations[static_cast<std::size_t>(k)] = increment;

        if (m.detection == Detection::Homodyne) {
            stepper.homodyne(state_true, increment, grid.dt, path.stats_true);
            stepper.homodyne(state_mis, increment, grid.dt, path.stats_mis);
        } else {
            const bool jumped = increment != 0.0;
            stepper.counting(state_true, jumped, grid.dt, path.stats_true);
            try {
                stepper.counting(state_mis, jumped, grid.dt, path.stats_mis);
            } catch (const JumpFromDarkStateError&) {
                path.aborted_dark_state = true;
                path.abort_step = k;
                path.observations.resize(static_cast<std::size_t>(k) + 1);
                return path;
            }
        }

        if ((k + 1) % stride == 0) {
            store(grid.dt * static_cast<double>(k + 1));
        }
    }
    return path;
}

} // namespace qfilt
