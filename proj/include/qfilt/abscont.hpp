#ifndef QFILT_ABSCONT_HPP
#define QFILT_ABSCONT_HPP

#include "qfilt/model.hpp"

namespace qfilt {

/// Orthonormal basis of a subspace of C^p, stored as matrix columns.
struct SubspaceBasis {
    Eigen::Index dim_p = 0;
    ComplexMatrix vectors;  // p x k, orthonormal columns; k may be zero
};

/// Eigenvectors of rho with eigenvalue at most tol_abs.
SubspaceBasis kernel(const DensityMatrix& rho, double tol_abs = 1e-9);

/// Absolute continuity rho1 << rho2 at finite dimension: every kernel
/// vector of rho2 must be annihilated by rho1 (kernel containment).
bool is_absolutely_continuous(const DensityMatrix& rho1,
                              const DensityMatrix& rho2,
                              double tol_abs = 1e-9);

} // namespace qfilt

#endif // QFILT_ABSCONT_HPP
