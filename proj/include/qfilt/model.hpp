#ifndef QFILT_MODEL_HPP
#define QFILT_MODEL_HPP

#include <vector>

#include "qfilt/matops.hpp"

namespace qfilt {

enum class Detection { Homodyne, Counting };

/// Hermitian, positive semidefinite, unit-trace matrix. Construction
/// symmetrizes, clips eigenvalue dust in [-1e-7, 0) to zero and
/// renormalizes the trace; anything worse is rejected.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    /// Wraps a matrix that already satisfies the invariants, skipping
    /// validation. Intended for integrator-internal states.
    static DensityMatrix trusted(ComplexMatrix m);

    const ComplexMatrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    DensityMatrix() = default;
    ComplexMatrix mat_;
};

/// Finite-dimensional quantum stochastic model: Hamiltonian H, Lindblad
/// operators L_1..L_q (L_1 is the monitored channel), detection efficiency
/// eta and the detection scheme for the observation record.
struct QsdeModel {
    Eigen::Index p = 0;
    ComplexMatrix hamiltonian;
    std::vector<ComplexMatrix> lindblads;
    double eta = 1.0;
    Detection detection = Detection::Homodyne;
};

/// Checks shapes, Hermiticity of H (asymmetry up to 1e-8 relative, then
/// symmetrized) and eta in (0, 1]. Returns the cleaned-up model.
QsdeModel validate_model(QsdeModel m);

/// Linear map on p x p matrices, stored as a p^2 x p^2 matrix acting on
/// column-stacked coordinates.
struct Superoperator {
    Eigen::Index dim_p = 0;
    ComplexMatrix matrix;

    ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// Heisenberg-picture generator
/// L[X] = i[H,X] + sum_k (L_k* X L_k - (L_k* L_k X + X L_k* L_k)/2).
Superoperator generator(const QsdeModel& m);

/// Measurement superoperator of the detection scheme:
/// homodyne K[X] = L_1* X + X L_1, counting J[X] = L_1* X L_1.
Superoperator measurement_superop(const QsdeModel& m);

/// Adjoint with respect to the bilinear trace pairing:
/// Tr[predual(S)(rho) X] = Tr[rho S(X)] for all rho, X. Applied to the
/// generator this yields the Schroedinger-picture (master equation) form.
Superoperator predual(const Superoperator& s);

} // namespace qfilt

#endif // QFILT_MODEL_HPP
