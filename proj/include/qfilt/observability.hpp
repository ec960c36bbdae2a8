#ifndef QFILT_OBSERVABILITY_HPP
#define QFILT_OBSERVABILITY_HPP

#include <vector>

#include "qfilt/model.hpp"

namespace qfilt {

/// Smallest subspace of p x p matrices containing the identity and closed
/// under the generator and the measurement superoperator.
struct ObservableSpace {
    Eigen::Index dim_p = 0;
    std::vector<ComplexMatrix> basis;  // Hilbert-Schmidt orthonormal
    int dimension = 0;
    int iterations_used = 0;
    /// True when the rank decision rested on a singular value within a
    /// factor 10 of the cutoff, i.e. the dimension is tolerance-sensitive.
    bool borderline = false;
};

/// Grows span{I} by repeated application of the generator and the
/// measurement superoperator until the dimension stabilizes. Terminates
/// within p^2 iterations.
ObservableSpace observable_space(const QsdeModel& m, double tol_rel = 1e-9);

/// True iff the observable space has full dimension p^2, i.e. no two
/// distinct initial states produce the same observation law.
bool is_observable(const QsdeModel& m, double tol_rel = 1e-9);

struct ObservableProjection {
    ComplexMatrix projection;
    double residual_norm = 0.0;
};

/// Orthogonal projection of X onto the observable space together with the
/// Hilbert-Schmidt norm of the part left over.
ObservableProjection project_observable(const ObservableSpace& space,
                                        const ComplexMatrix& x);

} // namespace qfilt

#endif // QFILT_OBSERVABILITY_HPP
